#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roughdyn/rde.hpp"
#include "roughdyn/rough_path.hpp"

namespace roughdyn {

// a/b with the conventions used by the printed constants: 0/0 = 0 and
// a/0 = +inf for a > 0 (which makes the affected bound trivially true).
double ratio_or_zero(double a, double b);

// log(1 + 3/(2 c_p)), the per-window growth exponent of the affine estimate.
double alpha_constant(double c_p);

// (1 + 3/(2 c_p)) |g(0)| / |C|  +  |f(0)| / C_f for an affine coefficient.
double m0_constant(const RdeProblem& prob, double c_p);

// Exponential envelope |Phi(t)| <= c_a exp(-lambda_a t) fitted on a grid:
// lambda_a is the largest rate in a geometric sweep below the spectral
// abscissa whose envelope peaks strictly inside the check window; c_a is the
// peak (clamped >= 1).  Throws std::domain_error when A is not Hurwitz.
struct SemigroupConstants {
  double c_a = 1.0;
  double lambda_a = 0.0;
};
SemigroupConstants semigroup_constants(const Eigen::MatrixXd& A, double sweep_margin = 0.05,
                                       double t_check = 40.0, int grid_points = 4000);

// Bundle of constants feeding the stability estimates.
struct StabilityParams {
  double c_a = 1.0;
  double lambda_a = 0.0;
  double a_norm = 0.0;
  double c_f = 0.0;
  double c_g = 0.0;
  double p = 2.5;
  double c_p = 0.0;          // sewing constant at p
  double gamma_p = 0.0;      // ensemble driver-norm moment (p-th root)
  double gamma_se = 0.0;

  double L() const { return a_norm + c_f; }
  double L_f() const { return c_a * c_f; }
  double lambda() const { return lambda_a - L_f(); }
};

// Monte-Carlo moment of the rough p-var norm over [-1,1]:
// Gamma = (mean of norm^p)^{1/p}, with leave-one-out (jackknife) SE of the
// root statistic.  `sampler` yields one lifted draw per call index.
struct GammaEstimate {
  double value = 0.0;
  double se = 0.0;
  double mean_power = 0.0;
  double p = 0.0;
  int samples = 0;
};
GammaEstimate gamma_estimate(double hurst, int m, double p, int samples, std::uint64_t seed,
                             int steps_per_unit = 64, int lift_level = 0,
                             const std::function<RoughPath(std::uint64_t)>* sampler = nullptr);

// Time-average cross-validator: one long path, windows [-1-k, 1-k].
GammaEstimate gamma_time_average(double hurst, int m, double p, int windows,
                                 std::uint64_t seed, int steps_per_unit = 64,
                                 int lift_level = 0);

// kappa = 2 c_p c_a (1 + |A| len) max(c_g^2 norm^2, c_g norm).
double kappa_value(double rough_norm, double len, const StabilityParams& sp);
double kappa(const RoughPath& rp, double a, double b, const StabilityParams& sp);

// Lambda = 1 + 2 [ max|y_a| + (|f0|/C_f + 1/c_p) N ] e^{4L len} N^{(p-1)/p}.
double lambda_capital_value(double y_norm_max, double f0_norm, double n_greedy,
                            double len, const StabilityParams& sp);
double lambda_capital(const RdeProblem& prob, const RoughPath& rp, double a, double b,
                      const Eigen::VectorXd& y0_plus, const Eigen::VectorXd& y0_minus,
                      const StabilityParams& sp);

// One-window decay weights:
//   G = e^{lambda_a + 4L len} kappa N^{(p-1)/p} e^{alpha N}
//   H = m0 e^{lambda_a + 4L len} kappa e^{alpha N} (N^{(2p-1)/p} + 1).
struct GHWeights {
  double g = 0.0, h = 0.0;
  double kappa = 0.0, n = 0.0, alpha = 0.0, m0 = 0.0;
};
GHWeights gh_weights_value(double rough_norm, double n_greedy, double m0, double len,
                           const StabilityParams& sp);
GHWeights gh_weights(const RdeProblem& prob, const RoughPath& rp, double a, double b,
                     const StabilityParams& sp);

// Smallness conditions: margin = (lambda_a - c_a c_f) - prefactor *
// e^{lambda_a + 4L} (u^p + u) with u = 4 c_p c_g Gamma; prefactor is
// c_a/2 ("half") or c_a(1+|A|) ("general"/"linear-g").
struct CriterionResult {
  std::string kind;
  bool satisfied = false;
  double margin = 0.0;
  double lhs = 0.0, rhs = 0.0, u = 0.0;
};
CriterionResult criterion_check(const StabilityParams& sp, const std::string& kind);

// u_n <= max(a, u_0) prod_{k<n}(1+alpha_k) + sum_{k<n} beta_k prod_{j=k+1..n-1}(1+alpha_j);
// returns the bound sequence for n = 0..N (entry 0 is max(a, u_0)).
std::vector<double> discrete_gronwall(double a, double u0, const std::vector<double>& alphas,
                                      const std::vector<double>& betas);

// Truncated absorbing-radius series at shift granularity 1:
//   b = sup_eps sum_{k=1..K} e^{-lambda k} H_k prod_{j<k} (1 + G_j),
// windows [-k-eps, -k+1-eps]; b_hat = 1 + m0 e^{4L} b.
struct AbsorbingEstimate {
  double b = 0.0;
  double b_hat = 0.0;
  double m0 = 0.0;
  int horizon = 0;
  double eps_used = 0.0;
  std::vector<double> g_seq, h_seq;  // for the eps that attains the sup
};
AbsorbingEstimate absorbing_radius(const RdeProblem& prob, const RoughPath& rp,
                                   const StabilityParams& sp, int horizon,
                                   bool eps_sweep = false);

// Forward one-step difference bound: for integer n,
//   |z_n| e^{lambda n} <= c_a |z_0| + e^{lambda_a} sum_{k<n} e^{lambda k}
//                          kappa_k Lambda_k (|z_k| + [z,R]_{[k,k+1]}).
// Returns the RHS sequence for n = 0..N given per-window data.
std::vector<double> forward_difference_bound(double z0_norm, const std::vector<double>& z_norms,
                                             const std::vector<double>& kappas,
                                             const std::vector<double>& lambdas,
                                             const std::vector<double>& z_pvar_windows,
                                             const StabilityParams& sp);

}  // namespace roughdyn
