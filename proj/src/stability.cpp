#include "roughdyn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughdyn/controlled.hpp"
#include "roughdyn/fbm.hpp"
#include "roughdyn/variation.hpp"

namespace roughdyn {

double ratio_or_zero(double a, double b) {
  if (a == 0.0) return 0.0;
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  return a / b;
}

double alpha_constant(double c_p) {
  if (!(c_p > 0.0)) throw std::invalid_argument("sewing constant must be positive");
  return std::log(1.0 + 1.5 / c_p);
}

double m0_constant(const RdeProblem& prob, double c_p) {
  const double g0 = prob.g.at_zero().norm();
  const double f0 = prob.f.at_zero.norm();
  return (1.0 + 1.5 / c_p) * ratio_or_zero(g0, prob.g.lipschitz) +
         ratio_or_zero(f0, prob.f.lipschitz);
}

SemigroupConstants semigroup_constants(const Eigen::MatrixXd& A, double sweep_margin,
                                       double t_check, int grid_points) {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw std::invalid_argument("semigroup constants need a square matrix");
  if (!(sweep_margin > 0.0 && sweep_margin < 1.0))
    throw std::invalid_argument("sweep margin must lie in (0,1)");
  if (grid_points < 8) throw std::invalid_argument("check grid too small");

  const auto eigs = A.eigenvalues();
  double abscissa = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eigs.size(); ++i) abscissa = std::max(abscissa, eigs(i).real());
  if (!(abscissa < 0.0)) throw std::domain_error("state matrix must have a stable spectrum");
  const double rho = -abscissa;

  // |Phi(t)| on the check grid, computed once by stepping Phi(h).
  const double h = t_check / grid_points;
  const Eigen::MatrixXd step = matrix_semigroup(A, h);
  std::vector<double> norms(static_cast<std::size_t>(grid_points) + 1);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  for (int i = 0; i <= grid_points; ++i) {
    norms[static_cast<std::size_t>(i)] = phi.jacobiSvd().singularValues()(0);
    if (i < grid_points) phi = step * phi;
  }

  // Largest rate in the geometric sweep whose envelope |Phi(t)| e^{lam t}
  // peaks strictly before the end of the check window (so the bound is
  // certified by the decay beyond the peak, not truncated by it).
  double lam = (1.0 - sweep_margin) * rho;
  for (int round = 0; round < 512; ++round) {
    double peak = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
      const double env = norms[i] * std::exp(lam * h * static_cast<double>(i));
      if (env > peak) {
        peak = env;
        arg = i;
      }
    }
    if (arg + 1 < norms.size()) {
      SemigroupConstants out;
      out.lambda_a = lam;
      out.c_a = std::max(1.0, peak);
      return out;
    }
    lam *= 1.0 - sweep_margin;
  }
  throw std::domain_error("could not certify an exponential envelope on the check window");
}

namespace {

GammaEstimate root_moment(const std::vector<double>& powers, double p) {
  GammaEstimate est;
  est.p = p;
  est.samples = static_cast<int>(powers.size());
  if (powers.empty()) throw std::invalid_argument("moment estimate needs samples");
  double total = 0.0;
  for (double v : powers) total += v;
  const double n = static_cast<double>(powers.size());
  est.mean_power = total / n;
  est.value = std::pow(est.mean_power, 1.0 / p);
  if (powers.size() < 2) return est;
  // Jackknife on the p-th root statistic.
  std::vector<double> loo(powers.size());
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    loo[i] = std::pow((total - powers[i]) / (n - 1.0), 1.0 / p);
    loo_mean += loo[i];
  }
  loo_mean /= n;
  double ss = 0.0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  est.se = std::sqrt((n - 1.0) / n * ss);
  return est;
}

double window_power(const RoughPath& rp, double p, double a, double b) {
  const auto report = rough_pvar_norm(rp, p, a, b);
  return report.power_sum;
}

}  // namespace

GammaEstimate gamma_estimate(double hurst, int m, double p, int samples, std::uint64_t seed,
                             int steps_per_unit, int lift_level,
                             const std::function<RoughPath(std::uint64_t)>* sampler) {
  if (samples < 1) throw std::invalid_argument("moment estimate needs samples >= 1");
  std::vector<double> powers;
  powers.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    RoughPath rp;
    if (sampler != nullptr) {
      rp = (*sampler)(static_cast<std::uint64_t>(i));
    } else {
      FbmSpec spec;
      spec.hurst = hurst;
      spec.dim = m;
      spec.seed = seed + static_cast<std::uint64_t>(i);
      spec.grid = TimeGrid::uniform(-1.0, 1.0, 2 * steps_per_unit);
      spec.lift_level = lift_level;
      rp = sample_fbm_rough(spec, p);
    }
    powers.push_back(window_power(rp, p, rp.grid.front(), rp.grid.back()));
  }
  return root_moment(powers, p);
}

GammaEstimate gamma_time_average(double hurst, int m, double p, int windows,
                                 std::uint64_t seed, int steps_per_unit, int lift_level) {
  if (windows < 1) throw std::invalid_argument("time average needs windows >= 1");
  FbmSpec spec;
  spec.hurst = hurst;
  spec.dim = m;
  spec.seed = seed;
  spec.grid = TimeGrid::uniform(-1.0 - windows, 1.0, steps_per_unit * (windows + 2));
  spec.lift_level = lift_level;
  const RoughPath rp = sample_fbm_rough(spec, p);
  std::vector<double> powers;
  powers.reserve(static_cast<std::size_t>(windows));
  for (int k = 1; k <= windows; ++k)
    powers.push_back(window_power(rp, p, -1.0 - k, 1.0 - k));
  return root_moment(powers, p);
}

double kappa_value(double rough_norm, double len, const StabilityParams& sp) {
  const double a = sp.c_g * sp.c_g * rough_norm * rough_norm;
  const double b = sp.c_g * rough_norm;
  return 2.0 * sp.c_p * sp.c_a * (1.0 + sp.a_norm * len) * std::max(a, b);
}

double kappa(const RoughPath& rp, double a, double b, const StabilityParams& sp) {
  return kappa_value(rough_pvar_norm(rp, sp.p, a, b).value, b - a, sp);
}

double lambda_capital_value(double y_norm_max, double f0_norm, double n_greedy,
                            double len, const StabilityParams& sp) {
  const double bracket =
      y_norm_max + (ratio_or_zero(f0_norm, sp.c_f) + 1.0 / sp.c_p) * n_greedy;
  return 1.0 + 2.0 * bracket * std::exp(4.0 * sp.L() * len) *
                   std::pow(n_greedy, (sp.p - 1.0) / sp.p);
}

double lambda_capital(const RdeProblem& prob, const RoughPath& rp, double a, double b,
                      const Eigen::VectorXd& y0_plus, const Eigen::VectorXd& y0_minus,
                      const StabilityParams& sp) {
  const double gamma = default_gamma(sp.c_p, sp.c_g);
  const double n = static_cast<double>(greedy_times(rp, gamma, sp.p, a, b).count);
  return lambda_capital_value(std::max(y0_plus.norm(), y0_minus.norm()),
                              prob.f.at_zero.norm(), n, b - a, sp);
}

GHWeights gh_weights_value(double rough_norm, double n_greedy, double m0, double len,
                           const StabilityParams& sp) {
  GHWeights w;
  w.kappa = kappa_value(rough_norm, len, sp);
  w.n = n_greedy;
  w.alpha = alpha_constant(sp.c_p);
  w.m0 = m0;
  const double common = std::exp(sp.lambda_a + 4.0 * sp.L() * len + w.alpha * n_greedy);
  w.g = common * w.kappa * std::pow(n_greedy, (sp.p - 1.0) / sp.p);
  // kappa carries a factor c_g, m0 a factor 1/c_g; their product stays finite
  // as the noise is switched off, so a vanishing kappa wins over m0 = inf.
  w.h = (w.kappa == 0.0 || m0 == 0.0)
            ? 0.0
            : m0 * common * w.kappa * (std::pow(n_greedy, (2.0 * sp.p - 1.0) / sp.p) + 1.0);
  return w;
}

GHWeights gh_weights(const RdeProblem& prob, const RoughPath& rp, double a, double b,
                     const StabilityParams& sp) {
  const double rough = rough_pvar_norm(rp, sp.p, a, b).value;
  const double gamma = default_gamma(sp.c_p, sp.c_g);
  const double n = static_cast<double>(greedy_times(rp, gamma, sp.p, a, b).count);
  return gh_weights_value(rough, n, m0_constant(prob, sp.c_p), b - a, sp);
}

CriterionResult criterion_check(const StabilityParams& sp, const std::string& kind) {
  CriterionResult res;
  res.kind = kind;
  double prefactor = 0.0;
  if (kind == "half") {
    prefactor = 0.5 * sp.c_a;
  } else if (kind == "general" || kind == "linear-g") {
    prefactor = sp.c_a * (1.0 + sp.a_norm);
  } else {
    throw std::invalid_argument("unknown smallness criterion: " + kind);
  }
  res.u = 4.0 * sp.c_p * sp.c_g * sp.gamma_p;
  res.lhs = sp.lambda_a - sp.c_a * sp.c_f;
  res.rhs = prefactor * std::exp(sp.lambda_a + 4.0 * (sp.a_norm + sp.c_f)) *
            (std::pow(res.u, sp.p) + res.u);
  res.margin = res.lhs - res.rhs;
  res.satisfied = res.margin > 0.0;
  return res;
}

std::vector<double> discrete_gronwall(double a, double u0, const std::vector<double>& alphas,
                                      const std::vector<double>& betas) {
  if (alphas.size() != betas.size())
    throw std::invalid_argument("gronwall weights must have equal length");
  if (!(a >= 0.0) || !(u0 >= 0.0))
    throw std::invalid_argument("gronwall needs nonnegative data");
  std::vector<double> out;
  out.reserve(alphas.size() + 1);
  out.push_back(std::max(a, u0));
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (!(alphas[k] >= 0.0) || !(betas[k] >= 0.0))
      throw std::invalid_argument("gronwall needs nonnegative weights");
    out.push_back(out.back() * (1.0 + alphas[k]) + betas[k]);
  }
  return out;
}

AbsorbingEstimate absorbing_radius(const RdeProblem& prob, const RoughPath& rp,
                                   const StabilityParams& sp, int horizon,
                                   bool eps_sweep) {
  if (horizon < 1) throw std::invalid_argument("absorbing radius needs horizon >= 1");
  const double m0 = m0_constant(prob, sp.c_p);
  const double lambda = sp.lambda();

  std::vector<double> eps_grid{0.0};
  if (eps_sweep)
    for (int i = 1; i < 10; ++i) eps_grid.push_back(0.1 * i);

  AbsorbingEstimate best;
  best.m0 = m0;
  best.horizon = horizon;
  bool first = true;
  for (double eps : eps_grid) {
    double sum = 0.0, prod = 1.0;
    std::vector<double> gs, hs;
    gs.reserve(static_cast<std::size_t>(horizon));
    hs.reserve(static_cast<std::size_t>(horizon));
    for (int k = 1; k <= horizon; ++k) {
      const double wa = -static_cast<double>(k) - eps;
      const double wb = wa + 1.0;
      const GHWeights w = gh_weights(prob, rp, wa, wb, sp);
      gs.push_back(w.g);
      hs.push_back(w.h);
      sum += std::exp(-lambda * k) * w.h * prod;
      prod *= 1.0 + w.g;
    }
    if (first || sum > best.b) {
      best.b = sum;
      best.eps_used = eps;
      best.g_seq = std::move(gs);
      best.h_seq = std::move(hs);
      first = false;
    }
  }
  best.b_hat = best.b == 0.0 ? 1.0 : 1.0 + m0 * std::exp(4.0 * sp.L()) * best.b;
  return best;
}

std::vector<double> forward_difference_bound(double z0_norm, const std::vector<double>& z_norms,
                                             const std::vector<double>& kappas,
                                             const std::vector<double>& lambdas,
                                             const std::vector<double>& z_pvar_windows,
                                             const StabilityParams& sp) {
  const std::size_t n = kappas.size();
  if (lambdas.size() != n || z_pvar_windows.size() != n || z_norms.size() < n)
    throw std::invalid_argument("forward bound needs one record per window");
  const double lambda = sp.lambda();
  std::vector<double> out;
  out.reserve(n + 1);
  double sum = 0.0;
  out.push_back(sp.c_a * z0_norm);
  for (std::size_t k = 0; k < n; ++k) {
    sum += std::exp(lambda * static_cast<double>(k)) * kappas[k] * lambdas[k] *
           (z_norms[k] + z_pvar_windows[k]);
    out.push_back(sp.c_a * z0_norm + std::exp(sp.lambda_a) * sum);
  }
  return out;
}

}  // namespace roughdyn
