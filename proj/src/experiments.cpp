#include "roughdyn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughdyn/rng.hpp"
#include "roughdyn/variation.hpp"

namespace roughdyn {

Eigen::VectorXd equilibrium_point(const Eigen::MatrixXd& A, const LipschitzFunction& f,
                                  double tol, int max_iter) {
  if (A.rows() != A.cols()) throw std::invalid_argument("equilibrium needs a square matrix");
  const auto lu = A.partialPivLu();
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(A.rows());
  const double damping = 0.5;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd residual = A * mu + f.value(mu);
    if (residual.norm() <= tol * std::max(1.0, mu.norm())) return mu;
    mu -= damping * lu.solve(residual);
  }
  throw std::runtime_error("equilibrium solve did not converge");
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("line fit needs at least two points");
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("line fit needs distinct x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = syy - fit.slope * sxy;
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

std::vector<Eigen::VectorXd> sphere_points(int d, int count, double radius,
                                           std::uint64_t seed) {
  if (d < 1 || count < 1) throw std::invalid_argument("sphere points need d, count >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  if (d == 1) {
    for (int i = 0; i < count; ++i) {
      Eigen::VectorXd v(1);
      v(0) = (i % 2 == 0) ? radius : -radius;
      out.push_back(v);
    }
    return out;
  }
  if (d == 2) {
    for (int i = 0; i < count; ++i) {
      const double angle = 2.0 * 3.14159265358979323846 * i / count;
      Eigen::VectorXd v(2);
      v << radius * std::cos(angle), radius * std::sin(angle);
      out.push_back(v);
    }
    return out;
  }
  NormalStream ns(seed, 0xD1CEull);
  std::uint64_t idx = 0;
  while (out.size() < static_cast<std::size_t>(count)) {
    Eigen::VectorXd v(d);
    for (int k = 0; k < d; ++k) v(k) = ns(idx++);
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    out.push_back(radius / norm * v);
  }
  return out;
}

RdeProblem scale_diffusion(const RdeProblem& prob, double scale) {
  RdeProblem out = prob;
  switch (prob.g.kind) {
    case SmoothFunction::Kind::Constant:
      out.g = constant_coefficient(scale * prob.g.offset);
      break;
    case SmoothFunction::Kind::Affine: {
      std::vector<Eigen::MatrixXd> slices;
      slices.reserve(prob.g.linear.size());
      for (const auto& s : prob.g.linear) slices.push_back(scale * s);
      out.g = affine_coefficient(slices, scale * prob.g.offset);
      break;
    }
    case SmoothFunction::Kind::C3Bounded: {
      SmoothFunction g = prob.g;
      const auto value = prob.g.value;
      const auto jacobian = prob.g.jacobian;
      const auto hessian = prob.g.hessian;
      g.value = [value, scale](const Eigen::VectorXd& y) {
        return (scale * value(y)).eval();
      };
      g.jacobian = [jacobian, scale](const Eigen::VectorXd& y) {
        auto slices = jacobian(y);
        for (auto& s : slices) s *= scale;
        return slices;
      };
      if (hessian) {
        g.hessian = [hessian, scale](const Eigen::VectorXd& y) {
          auto h = hessian(y);
          for (auto& row : h)
            for (auto& s : row) s *= scale;
          return h;
        };
      }
      g.sup_norm = std::abs(scale) * prob.g.sup_norm;
      g.lipschitz = std::abs(scale) * prob.g.lipschitz;
      out.g = std::move(g);
      break;
    }
  }
  return out;
}

namespace {

RoughPath sample_noise(const NoiseFamily& noise, int m, double t0, double t1,
                       std::uint64_t seed) {
  FbmSpec spec;
  spec.hurst = noise.hurst;
  spec.dim = m;
  spec.seed = seed;
  const double len = t1 - t0;
  const auto steps = static_cast<std::int64_t>(std::llround(len * noise.steps_per_unit));
  spec.grid = TimeGrid::uniform(t0, t1, std::max<std::int64_t>(steps, 2));
  spec.lift_level = noise.lift_level;
  return sample_fbm_rough(spec, noise.p);
}

StabilityParams make_params(const RdeProblem& prob, const NoiseFamily& noise,
                            const GammaEstimate& gamma) {
  const SemigroupConstants sg = semigroup_constants(prob.A);
  StabilityParams sp;
  sp.c_a = sg.c_a;
  sp.lambda_a = sg.lambda_a;
  sp.a_norm = prob.a_norm();
  sp.c_f = prob.f.lipschitz;
  sp.c_g = prob.g.lipschitz;
  sp.p = noise.p;
  sp.c_p = sewing_constant(noise.p);
  sp.gamma_p = gamma.value;
  sp.gamma_se = gamma.se;
  return sp;
}

double ensemble_diameter(const std::vector<Eigen::VectorXd>& pts) {
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      diam = std::max(diam, (pts[i] - pts[j]).norm());
  return diam;
}

constexpr double kLogFloor = 1e-300;

}  // namespace

PullbackReport pullback_experiment(const RdeProblem& prob, const NoiseFamily& noise,
                                   const std::vector<double>& horizons, double ball_radius,
                                   int ensemble, const std::vector<std::uint64_t>& seeds,
                                   const std::optional<GammaEstimate>& gamma,
                                   int gamma_samples, std::uint64_t gamma_seed) {
  if (horizons.empty() || seeds.empty())
    throw std::invalid_argument("pullback experiment needs horizons and seeds");
  if (ensemble < 2) throw std::invalid_argument("pullback ensemble needs at least 2 starts");
  prob.check();

  PullbackReport report;
  report.horizons = horizons;
  report.ball_radius = ball_radius;
  report.ensemble = ensemble;
  report.gamma = gamma ? *gamma
                       : gamma_estimate(noise.hurst, prob.m(), noise.p, gamma_samples,
                                        gamma_seed, noise.steps_per_unit, noise.lift_level);
  const StabilityParams sp = make_params(prob, noise, report.gamma);
  report.criterion_half = criterion_check(sp, "half");
  report.criterion_general = criterion_check(sp, "general");
  const double u = report.criterion_general.u;
  const double g_hat = sp.c_a * std::exp(sp.lambda_a + 4.0 * sp.L()) *
                       (std::pow(u, sp.p) + u);
  report.rate_bound = -(sp.lambda() - g_hat);

  const double t_max = *std::max_element(horizons.begin(), horizons.end());
  SolveOptions opts;
  opts.with_unit_norms = false;

  for (const std::uint64_t seed : seeds) {
    PullbackSeedResult res;
    res.seed = seed;
    const RoughPath rp = sample_noise(noise, prob.m(), -t_max, 0.0, seed);
    const auto starts = sphere_points(prob.d(), ensemble, ball_radius, seed);
    for (const double horizon : horizons) {
      std::vector<Eigen::VectorXd> terminal;
      terminal.reserve(starts.size());
      for (const auto& y0 : starts) {
        const Solution sol = solve(prob, rp, y0, -horizon, 0.0, opts);
        terminal.push_back(sol.y.row(sol.y.rows() - 1).transpose());
      }
      res.diameters.push_back(ensemble_diameter(terminal));
      if (horizon == t_max) {
        res.terminal_diameter = res.diameters.back();
        for (const auto& v : terminal) res.max_terminal_norm = std::max(res.max_terminal_norm, v.norm());
      }
    }
    if (horizons.size() >= 2) {
      std::vector<double> logs;
      logs.reserve(res.diameters.size());
      for (double dia : res.diameters) logs.push_back(std::log(std::max(dia, kLogFloor)));
      res.rate = fit_line(horizons, logs).slope;
    }
    const int windows = static_cast<int>(std::floor(t_max + 1e-9));
    res.b_hat = absorbing_radius(prob, rp, sp, windows).b_hat;
    std::vector<double> ks, lognorms;
    for (int k = 1; k <= windows; ++k) {
      ks.push_back(static_cast<double>(k));
      lognorms.push_back(std::log(
          std::max(rough_pvar_norm(rp, sp.p, -static_cast<double>(k), 1.0 - k).value,
                   kLogFloor)));
    }
    if (ks.size() >= 2) res.tempered_slope = fit_line(ks, lognorms).slope;
    report.per_seed.push_back(std::move(res));
  }
  return report;
}

ForwardReport forward_experiment(const RdeProblem& prob, const NoiseFamily& noise,
                                 double horizon, const Eigen::VectorXd& z0_plus,
                                 const Eigen::VectorXd& z0_minus,
                                 const std::vector<std::uint64_t>& seeds) {
  if (!(horizon >= 1.0)) throw std::invalid_argument("forward experiment needs horizon >= 1");
  prob.check();
  GammaEstimate unused;  // the one-step bound does not involve the moment
  unused.p = noise.p;
  ForwardReport report;
  report.horizon = horizon;
  report.params = make_params(prob, noise, unused);
  const StabilityParams& sp = report.params;
  const double f0 = prob.f.at_zero.norm();
  const int windows = static_cast<int>(std::floor(horizon + 1e-9));

  for (const std::uint64_t seed : seeds) {
    ForwardSeedResult res;
    res.seed = seed;
    const RoughPath rp = sample_noise(noise, prob.m(), 0.0, horizon, seed);
    const DifferenceSolution diff =
        difference_solve(prob, rp, z0_plus, z0_minus, 0.0, horizon);

    std::vector<double> kappas, lambdas, zvars;
    for (int k = 0; k < windows && k < static_cast<int>(diff.unit_norms.size()); ++k) {
      const UnitNormRecord& rec = diff.unit_norms[static_cast<std::size_t>(k)];
      kappas.push_back(kappa_value(rec.rough_driver, rec.b - rec.a, sp));
      const std::size_t node = diff.plus.grid.index_of(rec.a);
      const double ymax = std::max(diff.plus.y.row(static_cast<Eigen::Index>(node)).norm(),
                                   diff.minus.y.row(static_cast<Eigen::Index>(node)).norm());
      lambdas.push_back(
          lambda_capital_value(ymax, f0, rec.greedy_count, rec.b - rec.a, sp));
      zvars.push_back(rec.combined);
    }
    for (int n = 0; n <= static_cast<int>(kappas.size()); ++n) {
      const std::size_t node = diff.plus.grid.index_of(static_cast<double>(n));
      res.z_norms.push_back(diff.z.row(static_cast<Eigen::Index>(node)).norm());
      res.lhs.push_back(res.z_norms.back() * std::exp(sp.lambda() * n));
    }
    res.bound_rhs = forward_difference_bound(res.z_norms.front(), res.z_norms, kappas,
                                             lambdas, zvars, sp);
    res.dominated = true;
    for (std::size_t n = 0; n < res.lhs.size(); ++n)
      if (res.lhs[n] > res.bound_rhs[n]) res.dominated = false;
    report.per_seed.push_back(std::move(res));
  }
  return report;
}

DriftReport equilibrium_drift(const RdeProblem& base, const NoiseFamily& noise,
                              const std::vector<double>& scales, double horizon,
                              double ball_radius, int ensemble,
                              const std::vector<std::uint64_t>& seeds,
                              double solver_tol) {
  if (scales.empty() || seeds.empty())
    throw std::invalid_argument("drift experiment needs scales and seeds");
  base.check();
  DriftReport report;
  report.horizon = horizon;
  report.mu_star = equilibrium_point(base.A, base.f, std::min(solver_tol, 1e-10));

  SolveOptions opts;
  opts.with_unit_norms = false;
  std::vector<RoughPath> drivers;
  std::vector<std::vector<Eigen::VectorXd>> starts_by_seed;
  drivers.reserve(seeds.size());
  for (const std::uint64_t seed : seeds) {
    drivers.push_back(sample_noise(noise, base.m(), -horizon, 0.0, seed));
    starts_by_seed.push_back(sphere_points(base.d(), ensemble, ball_radius, seed));
  }

  for (const double scale : scales) {
    const RdeProblem prob = scale_diffusion(base, scale);
    DriftRow row;
    row.g_scale = scale;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      std::vector<Eigen::VectorXd> terminal;
      terminal.reserve(starts_by_seed[s].size());
      for (const auto& y0 : starts_by_seed[s]) {
        const Solution sol = solve(prob, drivers[s], y0, -horizon, 0.0, opts);
        terminal.push_back(sol.y.row(sol.y.rows() - 1).transpose());
      }
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(base.d());
      for (const auto& v : terminal) centroid += v;
      centroid /= static_cast<double>(terminal.size());
      row.distances.push_back((centroid - report.mu_star).norm());
      if (ensemble_diameter(terminal) > 100.0 * solver_tol) row.contracted = false;
    }
    double total = 0.0;
    for (double v : row.distances) total += v;
    row.mean_distance = total / static_cast<double>(row.distances.size());
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace roughdyn
