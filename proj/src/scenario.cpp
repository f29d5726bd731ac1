#include "fracreach/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fracreach {

double DelayDescriptor::raw(double t) const {
    if (kind == "identity") return t;
    if (kind == "sin_sq") return t * std::sin(t) * std::sin(t);
    if (kind == "scale") return scale * t;
    if (kind == "overshoot") return t + scale;
    throw std::invalid_argument("DelayDescriptor: unknown kind '" + kind + "'");
}

double DelayDescriptor::eval(double t) const {
    return std::min(std::max(raw(t), 0.0), t);
}

double ForcingDescriptor::band_multiplier() const {
    if (selection == "midpoint") return 0.5 * (band_lo + band_hi);
    if (selection == "lower") return band_lo;
    if (selection == "upper") return band_hi;
    throw std::invalid_argument("ForcingDescriptor: unknown selection '" +
                                selection + "'");
}

ControlOperator ControlDescriptor::build(int n_modes) const {
    if (kind == "coupled") return ControlOperator::coupled(n_modes);
    if (kind == "identity") return ControlOperator::identity(n_modes);
    if (kind == "zero") return ControlOperator::zero(n_modes);
    if (kind == "matrix") {
        if (rows != n_modes)
            throw std::invalid_argument(
                "ControlDescriptor: matrix row count must equal n_modes");
        if (cols < 1 || static_cast<int>(entries.size()) != rows * cols)
            throw std::invalid_argument(
                "ControlDescriptor: matrix payload size mismatch");
        Eigen::MatrixXd m(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(r, c) = entries[r * cols + c];
        return {m};
    }
    throw std::invalid_argument("ControlDescriptor: unknown kind '" + kind + "'");
}

namespace {

SpectralState padded(const std::vector<double>& coeffs, int n_modes,
                     const char* who) {
    if (static_cast<int>(coeffs.size()) > n_modes)
        throw std::invalid_argument(std::string(who) +
                                    ": more coefficients than retained modes");
    SpectralState s = SpectralState::Zero(n_modes);
    for (std::size_t i = 0; i < coeffs.size(); ++i) s[i] = coeffs[i];
    return s;
}

}  // namespace

SpectralState Scenario::u0() const { return padded(u0_coeffs, n_modes, "u0"); }
SpectralState Scenario::target() const {
    return padded(target_coeffs, n_modes, "target");
}

void Scenario::validate() const {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("Scenario: alpha must lie in (0, 1]");
    if (n_modes < 1) throw std::invalid_argument("Scenario: n_modes < 1");
    if (n_steps < 2) throw std::invalid_argument("Scenario: n_steps < 2");
    if (!(horizon > 0.0)) throw std::invalid_argument("Scenario: horizon <= 0");
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("Scenario: p must lie in (0, 1)");
    if (!(q >= 0.0)) throw std::invalid_argument("Scenario: q must be >= 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("Scenario: lambda <= 0");
    if (!(tolerance > 0.0)) throw std::invalid_argument("Scenario: tolerance <= 0");
    if (max_iterations < 1)
        throw std::invalid_argument("Scenario: max_iterations < 1");
    if (forcing.band_lo > forcing.band_hi)
        throw std::invalid_argument("Scenario: forcing band is empty");
    for (const auto& term : nonlocal.terms)
        if (term.time < 0.0 || term.time > horizon)
            throw std::invalid_argument(
                "Scenario: nonlocal sample time outside [0, horizon]");
    if (sweep_lambdas.empty())
        throw std::invalid_argument("Scenario: empty sweep ladder");
    for (double l : sweep_lambdas)
        if (!(l > 0.0))
            throw std::invalid_argument("Scenario: sweep lambdas must be positive");
    // Exercise the registries so bad names fail at load, not mid-solve.
    (void)state_delay.raw(0.5);
    (void)forcing_delay.raw(0.5);
    (void)forcing.band_multiplier();
    if (reaction.kind != "zero" && reaction.kind != "x_atan")
        throw std::invalid_argument("Scenario: unknown reaction kind '" +
                                    reaction.kind + "'");
    if (forcing.kind != "zero" && forcing.kind != "memory_exp" &&
        forcing.kind != "fixed_modal")
        throw std::invalid_argument("Scenario: unknown forcing kind '" +
                                    forcing.kind + "'");
    if (forcing.kernel != "constant" && forcing.kernel != "exp_decay")
        throw std::invalid_argument("Scenario: unknown forcing kernel '" +
                                    forcing.kernel + "'");
    (void)b1.build(n_modes);
    (void)b2.build(n_modes);
}

namespace {

using nlohmann::json;

DelayDescriptor delay_from(const json& j) {
    DelayDescriptor d;
    d.kind = j.value("kind", d.kind);
    d.scale = j.value("scale", d.scale);
    return d;
}

json delay_to(const DelayDescriptor& d) {
    return {{"kind", d.kind}, {"scale", d.scale}};
}

ControlDescriptor control_from(const json& j) {
    ControlDescriptor c;
    c.kind = j.value("kind", c.kind);
    c.entries = j.value("entries", c.entries);
    c.rows = j.value("rows", c.rows);
    c.cols = j.value("cols", c.cols);
    return c;
}

json control_to(const ControlDescriptor& c) {
    json j = {{"kind", c.kind}};
    if (c.kind == "matrix") {
        j["entries"] = c.entries;
        j["rows"] = c.rows;
        j["cols"] = c.cols;
    }
    return j;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
    const json j = json::parse(text);
    Scenario s;
    s.alpha = j.value("alpha", s.alpha);
    s.n_modes = j.value("n_modes", s.n_modes);
    s.n_steps = j.value("n_steps", s.n_steps);
    s.horizon = j.value("horizon", s.horizon);
    s.p = j.value("p", s.p);
    s.q = j.value("q", s.q);
    s.lambda = j.value("lambda", s.lambda);
    s.tolerance = j.value("tolerance", s.tolerance);
    s.max_iterations = j.value("max_iterations", s.max_iterations);
    if (j.contains("state_delay")) s.state_delay = delay_from(j["state_delay"]);
    if (j.contains("forcing_delay"))
        s.forcing_delay = delay_from(j["forcing_delay"]);
    if (j.contains("reaction")) {
        s.reaction.kind = j["reaction"].value("kind", s.reaction.kind);
        s.reaction.scale = j["reaction"].value("scale", s.reaction.scale);
    }
    if (j.contains("nonlocal")) {
        for (const auto& t : j["nonlocal"])
            s.nonlocal.terms.push_back(
                {t.at("weight").get<double>(), t.at("time").get<double>()});
    }
    if (j.contains("forcing")) {
        const json& f = j["forcing"];
        s.forcing.kind = f.value("kind", s.forcing.kind);
        s.forcing.kernel = f.value("kernel", s.forcing.kernel);
        s.forcing.kernel_rate = f.value("kernel_rate", s.forcing.kernel_rate);
        s.forcing.band_lo = f.value("band_lo", s.forcing.band_lo);
        s.forcing.band_hi = f.value("band_hi", s.forcing.band_hi);
        s.forcing.selection = f.value("selection", s.forcing.selection);
        s.forcing.xi_scale = f.value("xi_scale", s.forcing.xi_scale);
        s.forcing.c1 = f.value("c1", s.forcing.c1);
        s.forcing.c2 = f.value("c2", s.forcing.c2);
    }
    if (j.contains("b1")) s.b1 = control_from(j["b1"]);
    if (j.contains("b2")) s.b2 = control_from(j["b2"]);
    s.u0_coeffs = j.value("u0", s.u0_coeffs);
    s.target_coeffs = j.value("target", s.target_coeffs);
    s.sweep_lambdas = j.value("sweep_lambdas", s.sweep_lambdas);
    s.validate();
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["alpha"] = s.alpha;
    j["n_modes"] = s.n_modes;
    j["n_steps"] = s.n_steps;
    j["horizon"] = s.horizon;
    j["p"] = s.p;
    j["q"] = s.q;
    j["lambda"] = s.lambda;
    j["tolerance"] = s.tolerance;
    j["max_iterations"] = s.max_iterations;
    j["state_delay"] = delay_to(s.state_delay);
    j["forcing_delay"] = delay_to(s.forcing_delay);
    j["reaction"] = {{"kind", s.reaction.kind}, {"scale", s.reaction.scale}};
    json nl = json::array();
    for (const auto& t : s.nonlocal.terms)
        nl.push_back({{"weight", t.weight}, {"time", t.time}});
    j["nonlocal"] = nl;
    j["forcing"] = {{"kind", s.forcing.kind},
                    {"kernel", s.forcing.kernel},
                    {"kernel_rate", s.forcing.kernel_rate},
                    {"band_lo", s.forcing.band_lo},
                    {"band_hi", s.forcing.band_hi},
                    {"selection", s.forcing.selection},
                    {"xi_scale", s.forcing.xi_scale},
                    {"c1", s.forcing.c1},
                    {"c2", s.forcing.c2}};
    j["b1"] = control_to(s.b1);
    j["b2"] = control_to(s.b2);
    j["u0"] = s.u0_coeffs;
    j["target"] = s.target_coeffs;
    j["sweep_lambdas"] = s.sweep_lambdas;
    return j.dump(2);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("load_scenario: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

}  // namespace fracreach
