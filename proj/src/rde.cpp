#include "roughdyn/rde.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughdyn/errors.hpp"
#include "roughdyn/variation.hpp"

namespace roughdyn {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// 0/0 = 0 and a/0 = +inf: a zero denominator only happens when the matching
// numerator term is absent, and otherwise the bound should go trivially true.
double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return kInf;
  return num / den;
}

}  // namespace

LipschitzFunction zero_drift(int d) {
  LipschitzFunction f;
  f.value = [d](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(d).eval(); };
  f.lipschitz = 0.0;
  f.at_zero = Eigen::VectorXd::Zero(d);
  return f;
}

LipschitzFunction affine_drift(const Eigen::MatrixXd& F, const Eigen::VectorXd& f0) {
  if (F.rows() != F.cols() || F.rows() != f0.size())
    throw std::invalid_argument("affine drift needs square F matching f0");
  LipschitzFunction f;
  f.value = [F, f0](const Eigen::VectorXd& y) { return (F * y + f0).eval(); };
  f.lipschitz = F.jacobiSvd().singularValues().size() > 0
                    ? F.jacobiSvd().singularValues()(0)
                    : 0.0;
  f.at_zero = f0;
  return f;
}

LipschitzFunction tanh_drift(double c, int d, const Eigen::VectorXd& offset) {
  if (c < 0.0) throw std::invalid_argument("tanh drift scale must be nonnegative");
  if (offset.size() != d) throw std::invalid_argument("tanh drift offset size mismatch");
  LipschitzFunction f;
  f.value = [c, offset](const Eigen::VectorXd& y) {
    return (c * y.array().tanh().matrix() + offset).eval();
  };
  f.lipschitz = c;
  f.at_zero = offset;
  return f;
}

double RdeProblem::a_norm() const {
  if (A.size() == 0) return 0.0;
  return A.jacobiSvd().singularValues()(0);
}

void RdeProblem::check() const {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw std::invalid_argument("state matrix must be square and nonempty");
  if (!f.value) throw std::invalid_argument("drift needs a value function");
  if (f.at_zero.size() != A.rows()) throw std::invalid_argument("drift f(0) size mismatch");
  if (!(f.lipschitz >= 0.0)) throw std::invalid_argument("drift constant must be >= 0");
  g.check();
  if (g.dim_in != d() || g.rows != d())
    throw std::invalid_argument("diffusion must map the state space, d -> d x m");
}

Eigen::VectorXd Solution::at(double t) const { return y.row(grid.index_of(t)).transpose(); }

ControlledPath Solution::as_controlled(std::shared_ptr<const RoughPath> driver) const {
  if (!driver) throw std::invalid_argument("controlled view needs a driver");
  const std::size_t n = static_cast<std::size_t>(y.rows());
  if (first_driver_node + n > driver->nodes())
    throw std::invalid_argument("solution does not fit inside the driver grid");
  const double tol = 1e-9 * std::max(1.0, std::abs(grid.back()));
  if (std::abs(driver->grid[first_driver_node] - grid.front()) > tol ||
      std::abs(driver->grid[first_driver_node + n - 1] - grid.back()) > tol)
    throw std::invalid_argument("solution grid is not aligned with the driver grid");

  ControlledPath cp;
  cp.driver = driver;
  cp.rows = static_cast<int>(y.cols());
  cp.cols = 1;
  cp.value.resize(driver->nodes());
  cp.deriv.resize(driver->nodes());
  const int m = driver->dim;
  for (std::size_t i = 0; i < driver->nodes(); ++i) {
    const std::size_t local =
        i < first_driver_node ? 0
                              : std::min(i - first_driver_node, n - 1);
    cp.value[i] = y.row(local).transpose();
    std::vector<Eigen::MatrixXd> slices;
    slices.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) slices.push_back(gy[local].col(k));
    cp.deriv[i] = std::move(slices);
  }
  return cp;
}

namespace {

// Davie correction sum_l dg_l(y_u) * (g(y_u).row(l) * XX)^T.
Eigen::VectorXd level2_term(const std::vector<Eigen::MatrixXd>& jac,
                            const Eigen::MatrixXd& gyu, const Eigen::MatrixXd& xx) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(jac.empty() ? 0 : jac[0].rows());
  for (std::size_t l = 0; l < jac.size(); ++l)
    out += jac[l] * (gyu.row(static_cast<Eigen::Index>(l)) * xx).transpose();
  return out;
}

// Window boundaries at (roughly) unit spacing inside node range [i0, i1].
std::vector<std::pair<std::size_t, std::size_t>> unit_windows(const TimeGrid& grid,
                                                              std::size_t i0,
                                                              std::size_t i1) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& t = grid.points();
  std::size_t lo = i0;
  while (lo < i1) {
    const double target = std::min(t[lo] + 1.0, t[i1]);
    const double tol = 1e-9 * std::max(1.0, std::abs(target));
    std::size_t hi = lo + 1;
    while (hi < i1 && t[hi + 1] <= target + tol) ++hi;
    out.emplace_back(lo, hi);
    lo = hi;
  }
  return out;
}

UnitNormRecord window_record(const Eigen::MatrixXd& y, const std::vector<Eigen::MatrixXd>& gy,
                             const RoughPath& rp, std::size_t offset, std::size_t lo,
                             std::size_t hi, double gamma) {
  const double p = rp.p, q = p / 2.0;
  UnitNormRecord rec;
  rec.a = rp.grid[offset + lo];
  rec.b = rp.grid[offset + hi];
  const auto yvar = pvar_dp(lo, hi, [&](std::size_t i, std::size_t j) {
    return std::pow((y.row(static_cast<Eigen::Index>(j)) - y.row(static_cast<Eigen::Index>(i)))
                        .norm(),
                    p);
  });
  rec.pvar_y = std::pow(yvar.power_sum, 1.0 / p);
  const auto rvar = pvar_dp(lo, hi, [&](std::size_t i, std::size_t j) {
    const Eigen::VectorXd inc = rp.first_increment(offset + i, offset + j);
    const Eigen::VectorXd rem =
        (y.row(static_cast<Eigen::Index>(j)) - y.row(static_cast<Eigen::Index>(i))).transpose() -
        gy[i] * inc;
    return std::pow(rem.norm(), q);
  });
  rec.qvar_remainder = std::pow(rvar.power_sum, 1.0 / q);
  rec.combined = rec.pvar_y + rec.qvar_remainder;
  rec.rough_driver = rough_pvar_norm(rp, p, rec.a, rec.b).value;
  rec.greedy_count = static_cast<double>(greedy_times(rp, gamma, p, rec.a, rec.b).count);
  return rec;
}

Solution run_scheme(const RdeProblem& prob, const RoughPath& rp, const Eigen::VectorXd& y0,
                    double a, double b, const SolveOptions& opts) {
  prob.check();
  if (y0.size() != prob.d()) throw std::invalid_argument("initial value size mismatch");
  if (prob.m() != rp.dim) throw std::invalid_argument("diffusion columns must match driver dim");
  const auto [i0, i1] = rp.grid.locate(a, b);
  if (i1 <= i0) throw std::invalid_argument("empty solve interval");

  Solution sol;
  sol.first_driver_node = i0;
  {
    std::vector<double> nodes(rp.grid.points().begin() + static_cast<std::ptrdiff_t>(i0),
                              rp.grid.points().begin() + static_cast<std::ptrdiff_t>(i1) + 1);
    sol.grid = TimeGrid(std::move(nodes));
  }
  const std::size_t n = i1 - i0;
  const int d = prob.d();
  sol.y.resize(static_cast<Eigen::Index>(n) + 1, d);
  sol.gy.resize(n + 1);
  sol.y.row(0) = y0.transpose();
  sol.gy[0] = prob.g.value(y0);

  if (opts.warn_coarse_grid) {
    const double steps_per_unit = static_cast<double>(n) / std::max(b - a, 1e-300);
    if (steps_per_unit < 8.0)
      sol.warnings.push_back("grid has fewer than 8 steps per unit time; scheme error may dominate");
  }

  Eigen::VectorXd yu = y0;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t u = i0 + s, v = u + 1;
    const double dt = rp.grid[v] - rp.grid[u];
    const Eigen::MatrixXd& gyu = sol.gy[s];
    const auto jac = prob.g.jacobian(yu);
    const Eigen::VectorXd xinc = rp.first_increment(u, v);
    const Eigen::MatrixXd xx = rp.second_increment(u, v);
    Eigen::VectorXd ynext = yu + (prob.A * yu + prob.f.value(yu)) * dt + gyu * xinc +
                            level2_term(jac, gyu, xx);
    if (!ynext.allFinite() || ynext.norm() > opts.divergence_guard)
      throw DivergenceError("state norm exceeded " + std::to_string(opts.divergence_guard) +
                            " at t=" + std::to_string(rp.grid[v]));
    sol.y.row(static_cast<Eigen::Index>(s) + 1) = ynext.transpose();
    sol.gy[s + 1] = prob.g.value(ynext);
    yu = std::move(ynext);
  }

  if (opts.with_unit_norms) {
    const double gamma = default_gamma(sewing_constant(rp.p), prob.g.lipschitz);
    for (const auto& [lo, hi] : unit_windows(sol.grid, 0, n))
      sol.unit_norms.push_back(window_record(sol.y, sol.gy, rp, i0, lo, hi, gamma));
  }
  return sol;
}

}  // namespace

Solution solve(const RdeProblem& prob, const RoughPath& rp, const Eigen::VectorXd& y0,
               double a, double b, const SolveOptions& opts) {
  return run_scheme(prob, rp, y0, a, b, opts);
}

Solution solve_affine(const RdeProblem& prob, const RoughPath& rp, const Eigen::VectorXd& y0,
                      double a, double b, const SolveOptions& opts) {
  if (prob.g.kind != SmoothFunction::Kind::Affine &&
      prob.g.kind != SmoothFunction::Kind::Constant)
    throw std::invalid_argument("solve_affine needs an affine or constant diffusion");
  return run_scheme(prob, rp, y0, a, b, opts);
}

DifferenceSolution difference_solve(const RdeProblem& prob, const RoughPath& rp,
                                    const Eigen::VectorXd& y0_plus,
                                    const Eigen::VectorXd& y0_minus, double a, double b,
                                    const SolveOptions& opts) {
  DifferenceSolution out;
  out.plus = run_scheme(prob, rp, y0_plus, a, b, opts);
  out.minus = run_scheme(prob, rp, y0_minus, a, b, opts);
  out.z = out.plus.y - out.minus.y;
  if (opts.with_unit_norms) {
    const std::size_t n = static_cast<std::size_t>(out.z.rows()) - 1;
    std::vector<Eigen::MatrixXd> slope(n + 1);
    for (std::size_t i = 0; i <= n; ++i) slope[i] = out.plus.gy[i] - out.minus.gy[i];
    const double gamma = default_gamma(sewing_constant(rp.p), prob.g.lipschitz);
    for (const auto& [lo, hi] : unit_windows(out.plus.grid, 0, n))
      out.unit_norms.push_back(
          window_record(out.z, slope, rp, out.plus.first_driver_node, lo, hi, gamma));
  }
  return out;
}

Eigen::MatrixXd matrix_semigroup(const Eigen::MatrixXd& A, double t) {
  if (A.rows() != A.cols()) throw std::invalid_argument("semigroup needs a square matrix");
  return (t * A).exp();
}

double variation_of_constants_residual(const RdeProblem& prob, const RoughPath& rp,
                                       const Solution& sol) {
  if (!sol.grid.is_uniform())
    throw UnsupportedError("variation-of-constants residual needs a uniform grid");
  const std::size_t n = static_cast<std::size_t>(sol.y.rows()) - 1;
  const std::size_t off = sol.first_driver_node;
  const double dt = sol.grid.dt();
  const int d = prob.d();
  const Eigen::MatrixXd phi1 = matrix_semigroup(prob.A, dt);

  // Per-step local germ of the rough convolution before the Phi weight:
  // g(y_u) x_{u,v} + sum_l dg_l(y_u) (g(y_u).row(l) XX)^T, plus the trapezoid
  // half-weights of the drift.  Phi(t_c - t_u) then telescopes through the
  // recurrences T_c = phi1 (T_{c-1} + a_{c-1}), U_c = phi1 U_{c-1} + (dt/2) f_c.
  std::vector<Eigen::VectorXd> germ(n), fval(n + 1);
  for (std::size_t u = 0; u <= n; ++u)
    fval[u] = prob.f.value(sol.y.row(static_cast<Eigen::Index>(u)).transpose());
  for (std::size_t u = 0; u < n; ++u) {
    const Eigen::VectorXd yu = sol.y.row(static_cast<Eigen::Index>(u)).transpose();
    const auto jac = prob.g.jacobian(yu);
    germ[u] = sol.gy[u] * rp.first_increment(off + u, off + u + 1) +
              level2_term(jac, sol.gy[u], rp.second_increment(off + u, off + u + 1));
  }

  double worst = 0.0;
  Eigen::VectorXd t_acc = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd u_acc = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd p_acc = sol.y.row(0).transpose();
  for (std::size_t c = 1; c <= n; ++c) {
    t_acc = phi1 * (t_acc + germ[c - 1] + 0.5 * dt * fval[c - 1]);
    u_acc = phi1 * u_acc + 0.5 * dt * fval[c];
    p_acc = phi1 * p_acc;
    const Eigen::VectorXd voc = p_acc + t_acc + u_acc;
    worst = std::max(worst,
                     (sol.y.row(static_cast<Eigen::Index>(c)).transpose() - voc).norm());
  }
  return worst;
}

AprioriBounds apriori_bounds(const RdeProblem& prob, const RoughPath& rp,
                             const Eigen::VectorXd& y0, double a, double b,
                             const std::optional<Eigen::VectorXd>& y0_other) {
  SolveOptions opts;
  opts.with_unit_norms = false;
  const Solution sol = run_scheme(prob, rp, y0, a, b, opts);
  const std::size_t n = static_cast<std::size_t>(sol.y.rows()) - 1;
  const std::size_t off = sol.first_driver_node;

  const double p = rp.p, q = p / 2.0;
  const double c_p = sewing_constant(p);
  const double c_g = prob.g.lipschitz;
  const double c_f = prob.f.lipschitz;
  const double a_norm = prob.a_norm();
  const double big_l = a_norm + c_f;
  const double f0 = prob.f.at_zero.norm();
  const double len = b - a;

  AprioriBounds out;
  out.a = a;
  out.b = b;
  out.gamma = default_gamma(c_p, c_g);
  const auto greedy = greedy_times(rp, out.gamma, p, a, b);
  out.greedy_count = static_cast<double>(greedy.count);
  out.rough_driver = rough_pvar_norm(rp, p, a, b).value;
  const double n_big = out.greedy_count;
  const double n_frac = std::pow(n_big, (p - 1.0) / p);

  out.sup_lhs = sol.y.rowwise().norm().maxCoeff();
  const double bracket = y0.norm() + (safe_ratio(f0, big_l) + 1.0 / c_p) * n_big;
  out.sup_rhs = bracket * std::exp(4.0 * big_l * len);
  out.sup_ok = out.sup_lhs <= out.sup_rhs;

  const auto yvar = pvar_dp(0, n, [&](std::size_t i, std::size_t j) {
    return std::pow((sol.y.row(static_cast<Eigen::Index>(j)) -
                     sol.y.row(static_cast<Eigen::Index>(i)))
                        .norm(),
                    p);
  });
  const auto rvar = pvar_dp(0, n, [&](std::size_t i, std::size_t j) {
    const Eigen::VectorXd rem = (sol.y.row(static_cast<Eigen::Index>(j)) -
                                 sol.y.row(static_cast<Eigen::Index>(i)))
                                    .transpose() -
                                sol.gy[i] * rp.first_increment(off + i, off + j);
    return std::pow(rem.norm(), q);
  });
  out.pvar_lhs = y0.norm() + std::pow(yvar.power_sum, 1.0 / p) + std::pow(rvar.power_sum, 1.0 / q);
  out.pvar_rhs = out.sup_rhs * n_frac;
  out.pvar_ok = out.pvar_lhs <= out.pvar_rhs;

  if (prob.g.kind == SmoothFunction::Kind::Affine) {
    const double alpha = std::log(1.0 + 1.5 / c_p);
    const double m0 = (1.0 + 1.5 / c_p) * safe_ratio(prob.g.offset.norm(), c_g) +
                      safe_ratio(f0, c_f);
    out.m0 = m0;
    const double lin_bracket = y0.norm() + m0 * n_big;
    out.affine_pvar_rhs = lin_bracket * std::exp(4.0 * c_f * len + alpha * n_big) * n_frac;
    out.affine_sup_rhs = lin_bracket * std::exp(4.0 * c_f * len + big_l * n_big);
    out.affine_ok = out.pvar_lhs <= out.affine_pvar_rhs;
  } else {
    out.m0 = kNan;
    out.affine_pvar_rhs = kNan;
    out.affine_sup_rhs = kNan;
    out.affine_ok = true;
  }

  if (y0_other) {
    const Solution other = run_scheme(prob, rp, *y0_other, a, b, opts);
    const Eigen::MatrixXd z = other.y - sol.y;
    const auto zvar = pvar_dp(0, n, [&](std::size_t i, std::size_t j) {
      return std::pow((z.row(static_cast<Eigen::Index>(j)) -
                       z.row(static_cast<Eigen::Index>(i)))
                          .norm(),
                      p);
    });
    const auto zr = pvar_dp(0, n, [&](std::size_t i, std::size_t j) {
      const Eigen::VectorXd rem = (z.row(static_cast<Eigen::Index>(j)) -
                                   z.row(static_cast<Eigen::Index>(i)))
                                      .transpose() -
                                  (other.gy[i] - sol.gy[i]) *
                                      rp.first_increment(off + i, off + j);
      return std::pow(rem.norm(), q);
    });
    const double z0 = (*y0_other - y0).norm();
    out.diff_lhs = z0 + std::pow(zvar.power_sum, 1.0 / p) + std::pow(zr.power_sum, 1.0 / q);
    out.lambda_cap = 1.0 + 2.0 *
                                (std::max(y0.norm(), y0_other->norm()) +
                                 (safe_ratio(f0, c_f) + 1.0 / c_p) * n_big) *
                                std::exp(4.0 * big_l * len) * n_frac;
    out.diff_rhs = z0 * std::exp(4.0 * big_l * len) *
                   (1.0 + std::pow(8.0 * c_p * c_g * out.lambda_cap, p - 1.0) *
                              std::pow(out.rough_driver, p - 1.0));
    out.diff_ok = out.diff_lhs <= out.diff_rhs;
  } else {
    out.diff_lhs = kNan;
    out.diff_rhs = kNan;
    out.lambda_cap = kNan;
    out.diff_ok = true;
  }
  return out;
}

}  // namespace roughdyn
