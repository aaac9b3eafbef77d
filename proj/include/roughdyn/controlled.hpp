#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "roughdyn/rough_path.hpp"

namespace roughdyn {

// Path controlled by a rough driver: value y_t (rows x cols) together with a
// derivative y'_t given as m slices (rows x cols), one per driving channel,
// so that y_{s,t} = sum_k x^k_{s,t} * slice_k(s) + R_{s,t}.
struct ControlledPath {
  std::shared_ptr<const RoughPath> driver;
  int rows = 0, cols = 0;
  std::vector<Eigen::MatrixXd> value;                  // per node
  std::vector<std::vector<Eigen::MatrixXd>> deriv;     // per node, m slices

  std::size_t nodes() const { return value.size(); }
  int channels() const { return driver ? driver->dim : 0; }

  Eigen::MatrixXd remainder_by_index(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd remainder(double s, double t) const;

  void validate() const;
};

// The driver viewed as a controlled path: value x_{t0,t} (m x 1), constant
// identity derivative, zero remainder.
ControlledPath controlled_driver(std::shared_ptr<const RoughPath> rp);

// y_t = base + W x_{t0,t} for a constant W (rows x m): constant derivative
// slices W.col(k), zero remainder.
ControlledPath controlled_affine_in_driver(std::shared_ptr<const RoughPath> rp,
                                           const Eigen::MatrixXd& W,
                                           const Eigen::VectorXd& base);

// Smooth coefficient y -> g(y) in R^{rows x cols} with derivative slices
// d/dy_l g (one rows x cols matrix per state coordinate) and declared bounds.
struct SmoothFunction {
  enum class Kind { C3Bounded, Affine, Constant };
  Kind kind = Kind::C3Bounded;
  int dim_in = 0;    // state dimension d
  int rows = 0, cols = 0;

  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> value;
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> jacobian;
  // Optional second derivative: slices [l][l2] -> rows x cols.
  std::function<std::vector<std::vector<Eigen::MatrixXd>>(const Eigen::VectorXd&)> hessian;

  double sup_norm = 0.0;    // |g|_inf (may be +inf for affine)
  double lipschitz = 0.0;   // C_g: max of first three derivative sup-norms

  // Affine structure when kind == Affine: g(y) = sum_l y_l * linear[l] + offset.
  std::vector<Eigen::MatrixXd> linear;
  Eigen::MatrixXd offset;

  Eigen::MatrixXd at_zero() const;
  void check() const;
};

SmoothFunction constant_coefficient(const Eigen::MatrixXd& G0);
SmoothFunction affine_coefficient(const std::vector<Eigen::MatrixXd>& slices,
                                  const Eigen::MatrixXd& G0);
// Scalar-friendly: d = m = 1, g(y) = c*y + g0.
SmoothFunction scalar_affine_coefficient(double c, double g0);
// Diagonal bounded coefficient g(y)_{ij} = c * sin(y_i) * [i == j], C_g = c.
SmoothFunction sin_coefficient(double c, int d, int m);

// g composed with a vector-valued controlled path (cols == 1):
// value g(y_t), derivative slice k = sum_l dg_l(y_t) * y'_k[l].
ControlledPath compose(const SmoothFunction& g, const ControlledPath& y);

// Sewing constant (1 - 2^{1-3/p})^{-1}; requires p in (2,3).
double sewing_constant(double p);

// Compensated Riemann sum over the partition nodes (default: every driver
// node in [a,b]): sum_u [ y_u x_{u,v} + sum_k slice_k(u) * X_{u,v}.row(k)^T ].
// Integrand must have cols == m; the definite value lives in R^rows.
Eigen::VectorXd rough_integral(const ControlledPath& y, double a, double b,
                               const std::vector<std::size_t>* partition = nullptr);

// Indefinite integral as a controlled path on [a,b]: value in R^{rows x 1},
// derivative slice k = column k of the integrand (the integrand itself).
ControlledPath indefinite_rough_integral(const ControlledPath& y, double a, double b);

}  // namespace roughdyn
