#pragma once

#include <stdexcept>
#include <vector>

namespace fracreach {

// Uniform grid 0 = t_0 < t_1 < ... < t_{n_steps} = horizon.
struct TimeGrid {
    double horizon;
    int n_steps;

    TimeGrid(double a, int ns) : horizon(a), n_steps(ns) {
        if (!(a > 0.0))
            throw std::invalid_argument("TimeGrid: horizon must be positive");
        if (ns < 2)
            throw std::invalid_argument("TimeGrid: need at least 2 steps");
    }
    double h() const { return horizon / n_steps; }
    double node(int k) const { return horizon * k / n_steps; }
    int size() const { return n_steps + 1; }
};

// One scalar value per grid node.
struct SampledSignal {
    TimeGrid grid;
    std::vector<double> values;

    SampledSignal(const TimeGrid& g, std::vector<double> v)
        : grid(g), values(std::move(v)) {
        if (static_cast<int>(values.size()) != grid.size())
            throw std::invalid_argument(
                "SampledSignal: value count must match grid node count");
    }
};

}  // namespace fracreach
