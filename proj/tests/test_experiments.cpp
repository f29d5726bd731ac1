#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracreach/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace fracreach;

namespace {

Scenario fast_linear_scenario() {
    Scenario s;
    s.alpha = 0.5;
    s.n_modes = 4;
    s.n_steps = 64;
    s.horizon = 1.0;
    s.lambda = 1e-3;
    s.reaction = {"zero", 0.0};
    s.forcing.kind = "fixed_modal";
    s.forcing.c1 = 0.4;
    s.forcing.c2 = 0.1;
    s.b1.kind = "identity";
    s.b2.kind = "identity";
    s.u0_coeffs = {1.0, 0.5};
    s.target_coeffs = {0.2, -0.1};
    return s;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag)
        : path(std::filesystem::temp_directory_path() /
               ("fracreach_test_" + tag)) {
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("lambda sweep: rows sorted, flags recorded, errors shrink") {
    const Scenario s = fast_linear_scenario();
    // Deliberately unsorted ladder; the sweep reports it descending.
    const SweepResult res = run_lambda_sweep(s, {1e-2, 1.0, 1e-4});
    REQUIRE(res.rows.size() == 3);
    CHECK(res.rows[0].lambda == 1.0);
    CHECK(res.rows[1].lambda == 1e-2);
    CHECK(res.rows[2].lambda == 1e-4);
    CHECK(res.all_converged);
    for (const auto& r : res.rows) {
        CHECK(r.converged);
        CHECK(r.picard_iterations >= 1);
        CHECK(r.contraction_k == 0.0);  // zero reaction: no Lipschitz mass
        CHECK(r.mu1_energy > 0.0);
    }
    // Identity inputs make every mode reachable: terminal error must fall
    // strictly as lambda does.
    CHECK(res.rows[0].terminal_error > res.rows[1].terminal_error);
    CHECK(res.rows[1].terminal_error > res.rows[2].terminal_error);
}

TEST_CASE("lambda sweep validates its ladder") {
    const Scenario s = fast_linear_scenario();
    CHECK_THROWS_AS(run_lambda_sweep(s, {}), std::invalid_argument);
    CHECK_THROWS_AS(run_lambda_sweep(s, {1.0, -1e-2}), std::invalid_argument);
    CHECK_THROWS_AS(run_lambda_sweep(s, {1e-2, 1e-2}), std::invalid_argument);
}

TEST_CASE("sweep outputs: byte-identical CSV, sidecar metadata, plot script") {
    const Scenario s = fast_linear_scenario();
    const TempDir dir("sweep");
    const SweepResult first = run_lambda_sweep(s, {1.0, 1e-2});
    const SweepResult second = run_lambda_sweep(s, {1.0, 1e-2});

    const auto csv_a = dir.path / "run_a.csv";
    const auto csv_b = dir.path / "run_b.csv";
    write_sweep_outputs(first, csv_a.string());
    write_sweep_outputs(second, csv_b.string());

    const std::string a = slurp(csv_a);
    const std::string b = slurp(csv_b);
    CHECK(a == b);  // recomputation and rewriting are bitwise stable
    CHECK(a.rfind("lambda,terminal_error,picard_iterations,contraction_K,"
                  "mu1_energy,mu2_norm,converged\n",
                  0) == 0);
    // Two data rows, one per lambda, last field a 0/1 flag.
    int lines = 0;
    for (char c : a)
        if (c == '\n') ++lines;
    CHECK(lines == 3);
    CHECK(a.find(",1\n") != std::string::npos);

    // Sidecar metadata echoes the scenario; the plot script references the CSV.
    CHECK(std::filesystem::exists(dir.path / "run_a.meta.json"));
    const std::string meta = slurp(dir.path / "run_a.meta.json");
    CHECK(meta.find("\"all_converged\": true") != std::string::npos);
    CHECK(meta.find("\"n_modes\": 4") != std::string::npos);
    CHECK(std::filesystem::exists(dir.path / "run_a.gp"));
    CHECK(slurp(dir.path / "run_a.gp").find("run_a.csv") != std::string::npos);

    CHECK_THROWS_AS(
        write_sweep_outputs(first, (dir.path / "no_such_dir" / "x.csv").string()),
        std::runtime_error);
}

TEST_CASE("linear check verifies closed forms with identity inputs") {
    Scenario s = fast_linear_scenario();
    // The Duhamel comparison carries an O(h^alpha) early-time layer from
    // interpolating T across its steepest drop; the 2e-2 gate expects a
    // production-sized grid.
    s.n_steps = 256;
    const LinearCheckReport rep = run_linear_check(s);

    CHECK(rep.verifications_pass);
    CHECK(rep.free_evolution_max_err <= 2e-2);
    CHECK(rep.steering_identity_rel_err <= 1e-8);
    // Identity inputs are diagonal, so the per-mode closed form applies too.
    CHECK(rep.diagonal_closed_form_rel_err >= 0.0);
    CHECK(rep.diagonal_closed_form_rel_err <= 1e-8);

    REQUIRE(static_cast<int>(rep.probes_running.size()) == s.n_modes);
    REQUIRE(static_cast<int>(rep.probes_initial.size()) == s.n_modes);
    // Fully controllable configuration: every direction decays, both Gramians.
    for (const auto& p : rep.probes_running) CHECK(p.decaying);
    for (const auto& p : rep.probes_initial) CHECK(p.decaying);
}

TEST_CASE("linear check reports blocked directions without failing the gate") {
    Scenario s = fast_linear_scenario();
    // The O(h^alpha) Duhamel layer grows with the retained mode count; six
    // modes need the finer grid to sit under the fixed 2e-2 gate.
    s.n_steps = 1024;
    s.n_modes = 6;
    s.b1.kind = "coupled";
    s.b2.kind = "coupled";
    const LinearCheckReport rep = run_linear_check(s);

    // Non-diagonal inputs: the per-mode closed form does not apply.
    CHECK(rep.diagonal_closed_form_rel_err == -1.0);
    // The one-shot Gramian of the coupled operator is rank deficient, so at
    // least one basis direction must fail to decay; that is a reported
    // finding, not a verification failure.
    int blocked = 0;
    for (const auto& p : rep.probes_initial)
        if (!p.decaying) ++blocked;
    CHECK(blocked >= 1);
    CHECK(rep.verifications_pass);
    CHECK(rep.steering_identity_rel_err <= 1e-8);
}

TEST_CASE("invariant suites run clean and reject unknown selectors") {
    // "all" concatenates the seven named suites, so every check in every
    // suite is gated here, not just the ones a named selector would pick.
    const auto outcomes = run_invariant_suite("all");
    REQUIRE(outcomes.size() >= 25);
    for (const auto& o : outcomes) {
        INFO(o.name, ": ", o.detail);
        CHECK(o.pass);
    }

    const auto spectral_only = run_invariant_suite("spectral");
    REQUIRE(!spectral_only.empty());
    CHECK(spectral_only.size() < outcomes.size());
    for (const auto& o : spectral_only) CHECK(o.name.rfind("spectral.", 0) == 0);

    CHECK_THROWS_AS(run_invariant_suite("no_such_suite"), std::invalid_argument);
}
