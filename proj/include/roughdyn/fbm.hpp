#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "roughdyn/grid.hpp"
#include "roughdyn/rough_path.hpp"

namespace roughdyn {

// Fractional Brownian sampling request.  Channels are independent; the path
// is anchored to zero at the first grid node.  Working range for the
// downstream estimates is H in (1/3, 1/2]; construction accepts any H in
// (0,1) and validation reports out-of-range use separately.
struct FbmSpec {
  double hurst = 0.4;
  int dim = 1;
  std::uint64_t seed = 0;
  TimeGrid grid;
  int lift_level = 6;  // dyadic refinement depth for the level-2 lift, <= 12

  void check() const;  // throws std::invalid_argument on malformed fields
};

// Exact draw of the node values ((n+1) x dim).  Uniform grids use circulant
// embedding of the increment covariance (FFT, exact in law); non-uniform
// grids fall back to a dense Cholesky factor of the path covariance, capped
// at 2048 steps.
Eigen::MatrixXd sample_fbm(const FbmSpec& spec);

// Sample on the 2^lift_level-refined grid, lift the refined polyline exactly,
// then restrict back to the requested nodes.  At lift_level 0 this coincides
// bitwise with lift_piecewise_linear(sample_fbm(spec)).
RoughPath sample_fbm_rough(const FbmSpec& spec, double p = 2.5);

}  // namespace roughdyn
