#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "roughdyn/grid.hpp"

namespace roughdyn {

// Level-2 rough path on a grid.  First level stores increments from the grid
// origin (row 0 is zero); second level stores the iterated integrals anchored
// at the origin, X_j = int_{t0}^{tj} (x_r - x_{t0}) (x) dx_r, so arbitrary
// pair increments are reconstructed through the Chen identity without O(n^2)
// storage.  Convention: XX(k,j) integrates component k against component j.
struct RoughPath {
  TimeGrid grid;
  int dim = 0;                          // driving dimension m
  double p = 2.5;                       // declared variation exponent, in (2,3)
  Eigen::MatrixXd x;                    // (n+1) x m, x.row(0) == 0
  std::vector<Eigen::MatrixXd> xx;      // per node, m x m, xx[0] == 0

  // Sampling provenance carried into serialization headers when present.
  std::optional<double> hurst;
  std::optional<std::uint64_t> seed;
  std::optional<int> lift_level;

  std::size_t nodes() const { return grid.size(); }

  Eigen::VectorXd first_increment(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd second_increment(std::size_t i, std::size_t j) const;
  std::pair<Eigen::VectorXd, Eigen::MatrixXd> increment(double s, double t) const;

  void validate() const;  // shape/anchoring invariants; throws std::invalid_argument
};

// Exact level-2 lift of the piecewise-linear interpolant of `samples`
// ((n+1) x m node values).  Per segment the cross term is
// x_{t0,u} (x) x_{u,v} + (1/2) x_{u,v} (x) x_{u,v}.
RoughPath lift_piecewise_linear(const TimeGrid& grid, const Eigen::MatrixXd& samples,
                                double p);

// Chen defect X_{s,t} - X_{s,u} - X_{u,t} - x_{s,u} (x) x_{u,t}; zero up to
// rounding for any path stored in anchored form.
Eigen::MatrixXd chen_defect(const RoughPath& rp, double s, double u, double t);

// Time shift: path t -> (x_{h+t} - x_h, X_{h,h+t}) on the grid nodes >= h,
// re-based so the output grid starts at 0 when h is a node.
RoughPath wiener_shift(const RoughPath& rp, double h);

// Restriction to a subset of node indices (must include 0 or re-anchors at
// the first kept node).  Used for dyadic coarsening studies.
RoughPath restrict_to_nodes(const RoughPath& rp, const std::vector<std::size_t>& keep);

}  // namespace roughdyn
