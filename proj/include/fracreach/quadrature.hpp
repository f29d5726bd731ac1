#pragma once

#include "fracreach/special_functions.hpp"
#include "fracreach/time_grid.hpp"

#include <Eigen/Dense>

#include <vector>

namespace fracreach {

// Product-trapezoid weights for the weakly singular convolution
//   int_0^{t_k} (t_k - s)^{alpha-1} phi(s) ds  ~=  sum_{j<=k} rows[k][j] phi(t_j),
// exact whenever phi is piecewise linear on the grid.  The kernel power is
// integrated in closed form panel by panel, so the t = s endpoint needs no
// special treatment.  Row k holds k+1 entries; row 0 is the empty sum.
struct ConvolutionWeights {
    double alpha;
    TimeGrid grid;
    std::vector<std::vector<double>> rows;
};

ConvolutionWeights build_weights(const FractionalOrder& order,
                                 const TimeGrid& grid);

// sum_{j<=k} rows[k][j] * samples[j]; throws if k is outside the table.
double convolve(const ConvolutionWeights& w, const std::vector<double>& samples,
                int k);
Eigen::VectorXd convolve(const ConvolutionWeights& w,
                         const std::vector<Eigen::VectorXd>& samples, int k);

}  // namespace fracreach
