// End-to-end acceptance checks for the library: each check exercises one
// user-visible guarantee at desk scale and prints a single PASS/FAIL line.
// Tolerances and fixture parameters are pinned here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "roughdyn/config.hpp"
#include "roughdyn/controlled.hpp"
#include "roughdyn/experiments.hpp"
#include "roughdyn/fbm.hpp"
#include "roughdyn/rde.hpp"
#include "roughdyn/rough_path.hpp"
#include "roughdyn/runner.hpp"
#include "roughdyn/stability.hpp"
#include "roughdyn/variation.hpp"

namespace fs = std::filesystem;
using namespace roughdyn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

RoughPath draw_lift(std::uint64_t seed, int dim, std::int64_t steps, double hurst,
                    int lift_level, double t0 = 0.0, double t1 = 1.0) {
  FbmSpec spec;
  spec.hurst = hurst;
  spec.dim = dim;
  spec.seed = seed;
  spec.grid = TimeGrid::uniform(t0, t1, steps);
  spec.lift_level = lift_level;
  return sample_fbm_rough(spec, 2.5);
}

// ---------------------------------------------------------------------------
// 1. Chen consistency of sampled lifts at refinement depth 6.

Outcome check_chen_relation() {
  constexpr double kTol = 1e-10;
  constexpr int kLifts = 100;
  constexpr int kTriplesPerLift = 10;
  std::mt19937_64 gen(20240801);
  double worst = 0.0;
  for (int s = 0; s < kLifts; ++s) {
    const RoughPath rp = draw_lift(1000 + static_cast<std::uint64_t>(s), 2, 256, 0.4, 6);
    std::uniform_int_distribution<std::size_t> pick(0, rp.nodes() - 1);
    for (int t = 0; t < kTriplesPerLift; ++t) {
      std::size_t i = pick(gen), u = pick(gen), k = pick(gen);
      if (i == u || u == k || i == k) {
        --t;
        continue;
      }
      if (i > u) std::swap(i, u);
      if (u > k) std::swap(u, k);
      if (i > u) std::swap(i, u);
      const double defect = chen_defect(rp, rp.grid[i], rp.grid[u], rp.grid[k]).norm();
      worst = std::max(worst, defect);
    }
  }
  return {worst <= kTol, "max defect over 1000 triples " + sci(worst) + " (tol 1e-10)"};
}

// ---------------------------------------------------------------------------
// 2. Variation DP against exhaustive partition enumeration, both levels.

double brute_force_power_sum(std::size_t last,
                             const std::function<double(std::size_t, std::size_t)>& weight) {
  // Enumerate every subset of interior nodes; accumulate left to right so the
  // float result is comparable bit-for-bit with a witness replay.
  const std::size_t interior = last - 1;
  double best = -1.0;
  for (std::uint64_t mask = 0; mask < (1ull << interior); ++mask) {
    double acc = 0.0;
    std::size_t prev = 0;
    for (std::size_t b = 0; b < interior; ++b) {
      if (mask & (1ull << b)) {
        acc += weight(prev, b + 1);
        prev = b + 1;
      }
    }
    acc += weight(prev, last);
    best = std::max(best, acc);
  }
  return best;
}

double replay_witness(const RoughPath& rp, const std::vector<double>& times,
                      const std::function<double(std::size_t, std::size_t)>& weight) {
  double acc = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k)
    acc += weight(rp.grid.index_of(times[k - 1]), rp.grid.index_of(times[k]));
  return acc;
}

Outcome check_variation_oracle() {
  constexpr int kTrials = 200;
  std::mt19937_64 gen(555);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> pdist(2.2, 2.8);
  int bad = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t steps = 3 + static_cast<std::size_t>(gen() % 10);  // 3..12
    const double p = pdist(gen);
    Eigen::MatrixXd samples(steps + 1, 2);
    samples.row(0).setZero();
    for (std::size_t i = 1; i <= steps; ++i)
      for (int j = 0; j < 2; ++j)
        samples(static_cast<Eigen::Index>(i), j) =
            samples(static_cast<Eigen::Index>(i - 1), j) + gauss(gen);
    const RoughPath rp =
        lift_piecewise_linear(TimeGrid::uniform(0.0, 1.0, static_cast<std::int64_t>(steps)),
                              samples, p);

    const auto w1 = [&](std::size_t i, std::size_t j) {
      return std::pow(rp.first_increment(i, j).norm(), p);
    };
    const auto w2 = [&](std::size_t i, std::size_t j) {
      return std::pow(rp.second_increment(i, j).norm(), p / 2.0);
    };

    const NormReport first = p_variation(rp, p, 0.0, 1.0);
    const NormReport second = q_variation_second_level(rp, p / 2.0, 0.0, 1.0);
    const double brute1 = brute_force_power_sum(steps, w1);
    const double brute2 = brute_force_power_sum(steps, w2);
    const bool ok = first.power_sum == brute1 && second.power_sum == brute2 &&
                    replay_witness(rp, first.witness, w1) == first.power_sum &&
                    replay_witness(rp, second.witness, w2) == second.power_sum;
    if (!ok) ++bad;
  }
  return {bad == 0, std::to_string(kTrials - bad) + "/" + std::to_string(kTrials) +
                        " paths match exhaustive enumeration exactly, both levels"};
}

// ---------------------------------------------------------------------------
// 3. Greedy exceedance count against its closed-form bound.

Outcome check_greedy_bound() {
  constexpr double kGammas[] = {0.3, 0.6, 1.2};
  constexpr int kSeeds = 170;
  int windows = 0, violations = 0;
  double worst_slack = 1e300;
  for (int s = 0; s < kSeeds; ++s) {
    const RoughPath rp = draw_lift(3000 + static_cast<std::uint64_t>(s), 2, 128, 0.4, 0);
    for (const double gamma : kGammas) {
      const GreedyPartition g = greedy_times(rp, gamma, 2.5, 0.0, 1.0);
      ++windows;
      if (static_cast<double>(g.count) > g.count_bound) ++violations;
      worst_slack = std::min(worst_slack, g.count_bound - static_cast<double>(g.count));
    }
  }
  return {violations == 0, "count <= 1 + gamma^-p * |x|^p on " +
                               std::to_string(windows - violations) + "/" +
                               std::to_string(windows) + " windows, min slack " +
                               sci(worst_slack)};
}

// ---------------------------------------------------------------------------
// 4. Integral exactness: scalar square identity and integration by parts.

ControlledPath channel_integrand(std::shared_ptr<const RoughPath> rp, int pick, int against) {
  // Row vector V_t = x^pick_t * e_against^T, so V x_{u,v} = x^pick_u x^against_{u,v}.
  ControlledPath y;
  y.driver = rp;
  y.rows = 1;
  y.cols = rp->dim;
  const std::size_t n = rp->nodes();
  y.value.resize(n);
  y.deriv.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(1, rp->dim);
    v(0, against) = rp->x(static_cast<Eigen::Index>(t), pick);
    y.value[t] = v;
    y.deriv[t].assign(static_cast<std::size_t>(rp->dim), Eigen::MatrixXd::Zero(1, rp->dim));
    y.deriv[t][static_cast<std::size_t>(pick)](0, against) = 1.0;
  }
  return y;
}

std::vector<std::size_t> strided_partition(std::size_t last, std::size_t stride) {
  std::vector<std::size_t> part;
  for (std::size_t i = 0; i < last; i += stride) part.push_back(i);
  part.push_back(last);
  return part;
}

Outcome check_integral_exactness() {
  constexpr double kSquareTol = 1e-12;
  constexpr double kIbpTol = 1e-6;

  // Scalar: compensated sums of x dx telescope to x^2/2 on every partition.
  auto scalar = std::make_shared<RoughPath>(draw_lift(7, 1, 256, 0.4, 0));
  const ControlledPath xs = controlled_driver(scalar);
  const double target = 0.5 * scalar->x(256, 0) * scalar->x(256, 0);
  double worst_sq = 0.0;
  for (std::size_t stride = 1; stride <= 256; stride *= 2) {
    const auto part = strided_partition(256, stride);
    const double val = rough_integral(xs, 0.0, 1.0, &part)(0);
    worst_sq = std::max(worst_sq, std::abs(val - target));
  }

  // Two channels: I12 + I21 - x1 x2 after four dyadic partition refinements.
  auto pair = std::make_shared<RoughPath>(draw_lift(8, 2, 256, 0.4, 6));
  const ControlledPath i12 = channel_integrand(pair, 0, 1);
  const ControlledPath i21 = channel_integrand(pair, 1, 0);
  const double prod = pair->x(256, 0) * pair->x(256, 1);
  double resid = 1e300;
  for (std::size_t stride = 256; stride >= 16; stride /= 2) {
    const auto part = strided_partition(256, stride);
    const double v12 = rough_integral(i12, 0.0, 1.0, &part)(0);
    const double v21 = rough_integral(i21, 0.0, 1.0, &part)(0);
    resid = std::abs(v12 + v21 - prod);
  }
  const bool pass = worst_sq <= kSquareTol && resid <= kIbpTol;
  return {pass, "square identity defect " + sci(worst_sq) + " (tol 1e-12), refined ibp residual " +
                    sci(resid) + " (tol 1e-6)"};
}

// ---------------------------------------------------------------------------
// 5. Scheme convergence order on the scalar geometric benchmark.

Outcome check_solver_order() {
  constexpr double kMinOrder = 0.2;
  constexpr double kMinR2 = 0.9;
  constexpr int kSeeds = 16;
  constexpr std::int64_t kFine = 4096;
  const std::vector<std::int64_t> levels{64, 128, 256, 512, 1024, 2048, 4096};

  RdeProblem prob;
  prob.A = Eigen::MatrixXd::Zero(1, 1);
  prob.f = zero_drift(1);
  prob.g = scalar_affine_coefficient(0.5, 0.0);
  SolveOptions opts;
  opts.with_unit_norms = false;
  opts.warn_coarse_grid = false;

  std::vector<double> mean_err(levels.size(), 0.0);
  for (int s = 0; s < kSeeds; ++s) {
    const RoughPath fine = draw_lift(4000 + static_cast<std::uint64_t>(s), 1, kFine, 0.4, 0);
    const double exact = std::exp(0.5 * fine.x(static_cast<Eigen::Index>(kFine), 0));
    for (std::size_t li = 0; li < levels.size(); ++li) {
      const std::size_t stride = static_cast<std::size_t>(kFine / levels[li]);
      const RoughPath coarse =
          restrict_to_nodes(fine, strided_partition(static_cast<std::size_t>(kFine), stride));
      const Solution sol = solve(prob, coarse, Eigen::VectorXd::Ones(1), 0.0, 1.0, opts);
      mean_err[li] += std::abs(sol.y(sol.y.rows() - 1, 0) - exact) / kSeeds;
    }
  }
  std::vector<double> lx, ly;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    lx.push_back(std::log(static_cast<double>(levels[li])));
    ly.push_back(std::log(mean_err[li]));
  }
  const LineFit fit = fit_line(lx, ly);
  const double order = -fit.slope;
  const bool pass = order >= kMinOrder && fit.r2 >= kMinR2;
  std::ostringstream os;
  os.precision(3);
  os << "order " << order << " (min 0.2), r2 " << fit.r2 << " (min 0.9), err " << sci(mean_err.front())
     << " -> " << sci(mean_err.back());
  return {pass, os.str()};
}

// ---------------------------------------------------------------------------
// 6. Flow-convolution residual decays under grid refinement (additive noise).

Outcome check_voc_residual() {
  constexpr double kFinalTol = 1e-4;
  const std::vector<std::int64_t> levels{256, 512, 1024, 2048, 4096};

  RdeProblem prob;
  prob.A = Eigen::MatrixXd(2, 2);
  prob.A << -1.0, 0.3, 0.0, -1.5;
  prob.f = zero_drift(2);
  Eigen::MatrixXd g0(2, 2);
  g0 << 0.10, 0.03, 0.00, 0.08;
  prob.g = constant_coefficient(g0);
  Eigen::VectorXd y0(2);
  y0 << 0.3, -0.2;
  SolveOptions opts;
  opts.with_unit_norms = false;
  opts.warn_coarse_grid = false;

  const RoughPath fine = draw_lift(314, 2, 4096, 0.4, 0);
  std::vector<double> resid;
  for (const auto n : levels) {
    const std::size_t stride = static_cast<std::size_t>(4096 / n);
    const RoughPath coarse = restrict_to_nodes(fine, strided_partition(4096, stride));
    const Solution sol = solve(prob, coarse, y0, 0.0, 1.0, opts);
    resid.push_back(variation_of_constants_residual(prob, coarse, sol));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < resid.size(); ++i)
    if (!(resid[i] < resid[i - 1])) monotone = false;
  const bool pass = monotone && resid.back() <= kFinalTol;
  return {pass, "residuals " + sci(resid.front()) + " -> " + sci(resid.back()) +
                    (monotone ? ", strictly decreasing" : ", NOT monotone") +
                    " (final tol 1e-4)"};
}

// ---------------------------------------------------------------------------
// 7. Pathwise growth bounds across coefficient families.

Outcome check_growth_bounds() {
  constexpr int kInstances = 200;
  int ok_count = 0;
  std::string first_bad;
  for (int inst = 0; inst < kInstances; ++inst) {
    std::mt19937_64 gen(6000 + static_cast<std::uint64_t>(inst));
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    RdeProblem prob;
    prob.A = Eigen::MatrixXd(2, 2);
    prob.A << -1.2 + 0.5 * u(gen), 0.5 * u(gen), 0.5 * u(gen), -1.2 + 0.5 * u(gen);
    if (inst % 2 == 0) {
      prob.f = zero_drift(2);
    } else {
      Eigen::VectorXd off(2);
      off << 0.2 * u(gen), 0.2 * u(gen);
      prob.f = tanh_drift(0.15, 2, off);
    }
    const int family = inst % 3;
    if (family == 0) {
      Eigen::MatrixXd g0(2, 2);
      g0 << 0.3 * u(gen), 0.3 * u(gen), 0.3 * u(gen), 0.3 * u(gen);
      prob.g = constant_coefficient(g0);
    } else if (family == 1) {
      std::vector<Eigen::MatrixXd> slices(2);
      for (auto& s : slices) {
        s = Eigen::MatrixXd(2, 2);
        s << 0.15 * u(gen), 0.15 * u(gen), 0.15 * u(gen), 0.15 * u(gen);
      }
      Eigen::MatrixXd off(2, 2);
      off << 0.3 * u(gen), 0.3 * u(gen), 0.3 * u(gen), 0.3 * u(gen);
      prob.g = affine_coefficient(slices, off);
    } else {
      prob.g = sin_coefficient(0.25, 2, 2);
    }

    const RoughPath rp = draw_lift(7000 + static_cast<std::uint64_t>(inst), 2, 128, 0.4, 0);
    Eigen::VectorXd y0(2);
    y0 << u(gen), u(gen);
    std::optional<Eigen::VectorXd> other;
    if (inst % 4 == 0) {
      Eigen::VectorXd y1 = y0;
      y1(0) += 0.5 * u(gen);
      y1(1) += 0.5 * u(gen);
      other = y1;
    }
    const AprioriBounds ab = apriori_bounds(prob, rp, y0, 0.0, 1.0, other);
    const bool ok = ab.sup_ok && ab.pvar_ok && ab.affine_ok && ab.diff_ok;
    if (ok) {
      ++ok_count;
    } else if (first_bad.empty()) {
      first_bad = " first violation at instance " + std::to_string(inst);
    }
  }
  return {ok_count == kInstances, std::to_string(ok_count) + "/" + std::to_string(kInstances) +
                                      " sampled instances satisfy every bound" + first_bad};
}

// ---------------------------------------------------------------------------
// 8. Discrete comparison sequence dominates the exact recursion, no tolerance.

Outcome check_gronwall() {
  constexpr int kTrials = 1000;
  std::mt19937_64 gen(86);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int bad = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(gen() % 50);
    std::vector<double> alphas(n), betas(n);
    for (auto& a : alphas) a = 0.5 * u01(gen);
    for (auto& b : betas) b = u01(gen);
    const double u0 = 2.0 * u01(gen);
    const double a0 = 2.0 * u01(gen);
    const bool exact = trial % 2 == 0;

    const std::vector<double> bound = discrete_gronwall(a0, u0, alphas, betas);
    double u = u0;
    bool dominated = u <= bound[0];
    for (std::size_t k = 0; k < n; ++k) {
      u = u * (1.0 + alphas[k]) + betas[k];
      if (!exact) u -= 0.3 * u01(gen) * u;  // consume slack, stays nonnegative
      if (!(u <= bound[k + 1])) dominated = false;
    }
    if (!dominated) ++bad;
  }
  return {bad == 0, std::to_string(kTrials - bad) + "/" + std::to_string(kTrials) +
                        " random recursions dominated with plain <="};
}

// ---------------------------------------------------------------------------
// 9. Smallness margins along a coefficient sweep.

Outcome check_criterion_sweep() {
  constexpr int kPoints = 20;
  constexpr double kMaxCg = 4e-4;
  StabilityParams sp;
  sp.c_a = 1.0;
  sp.lambda_a = 0.95;
  sp.a_norm = 1.0;
  sp.c_f = 0.02;
  sp.p = 2.5;
  sp.c_p = sewing_constant(2.5);
  sp.gamma_p = 2.0;

  bool pass = true;
  std::string note;
  for (const std::string kind : {"half", "general", "linear-g"}) {
    std::vector<double> margins;
    for (int i = 0; i < kPoints; ++i) {
      sp.c_g = kMaxCg * static_cast<double>(i) / (kPoints - 1);
      margins.push_back(criterion_check(sp, kind).margin);
    }
    sp.c_g = 0.0;
    bool decreasing = true;
    int flips = 0;
    for (int i = 1; i < kPoints; ++i) {
      if (!(margins[static_cast<std::size_t>(i)] < margins[static_cast<std::size_t>(i - 1)]))
        decreasing = false;
      if ((margins[static_cast<std::size_t>(i - 1)] > 0.0) !=
          (margins[static_cast<std::size_t>(i)] > 0.0))
        ++flips;
    }
    const bool zero_exact = margins[0] == sp.lambda_a - sp.c_a * sp.c_f;
    if (!(decreasing && flips == 1 && margins.front() > 0.0 && margins.back() < 0.0 &&
          zero_exact)) {
      pass = false;
      note += " " + kind + " failed";
    }
  }
  if (note.empty())
    note = "all three margin forms strictly decreasing, one sign change, exact zero-noise value";
  return {pass, note};
}

// ---------------------------------------------------------------------------
// 10. Pullback contraction of the linear scalar fixture under a valid margin.

Outcome check_pullback_contraction() {
  constexpr int kSeeds = 50;
  constexpr double kDiamTol = 1e-6;  // times ball radius 1
  RdeProblem prob;
  prob.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  prob.f = zero_drift(1);
  prob.g = scalar_affine_coefficient(2e-5, 0.0);

  NoiseFamily noise;  // H = 0.4, 64 steps per unit, level 0, p = 2.5
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= kSeeds; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  const PullbackReport rep =
      pullback_experiment(prob, noise, {5.0, 10.0, 15.0, 20.0}, 1.0, 2, seeds);

  int negative = 0, tiny = 0;
  for (const auto& ps : rep.per_seed) {
    if (ps.rate < 0.0) ++negative;
    if (ps.terminal_diameter <= kDiamTol) ++tiny;
  }
  const bool margin_ok = rep.criterion_general.satisfied;
  const bool pass = margin_ok && negative >= 48 && tiny >= 45;
  std::ostringstream os;
  os.precision(3);
  os << "margin " << rep.criterion_general.margin << " > 0, negative rate " << negative << "/"
     << kSeeds << " (need 48), terminal <= 1e-6 on " << tiny << "/" << kSeeds << " (need 45)";
  return {pass, os.str()};
}

// ---------------------------------------------------------------------------
// 11. Forward difference bound dominates the weighted distance pathwise.

Outcome check_forward_decay() {
  constexpr int kSeeds = 50;
  RdeProblem prob;
  prob.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  prob.f = zero_drift(1);
  prob.g = scalar_affine_coefficient(0.05, 0.1);

  NoiseFamily noise;
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= kSeeds; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  Eigen::VectorXd zp = Eigen::VectorXd::Constant(1, 0.5);
  Eigen::VectorXd zm = Eigen::VectorXd::Constant(1, -0.5);
  const ForwardReport rep = forward_experiment(prob, noise, 10.0, zp, zm, seeds);

  int dominated = 0;
  for (const auto& ps : rep.per_seed)
    if (ps.dominated) ++dominated;
  return {dominated == kSeeds, std::to_string(dominated) + "/" + std::to_string(kSeeds) +
                                   " runs dominated at every integer node"};
}

// ---------------------------------------------------------------------------
// 12. Ensemble limit drifts back to the deterministic equilibrium.

Outcome check_equilibrium_drift() {
  constexpr int kSeeds = 20;
  constexpr double kZeroTol = 1e-6;
  RdeProblem base;
  base.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  base.f = affine_drift(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 0.7));
  base.g = constant_coefficient(Eigen::MatrixXd::Constant(1, 1, 0.25));

  NoiseFamily noise;
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= kSeeds; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  const std::vector<double> scales{0.2, 0.1, 0.05, 0.025, 0.0};
  const DriftReport rep = equilibrium_drift(base, noise, scales, 20.0, 1.0, 4, seeds, 1e-8);

  int monotone = 0;
  for (int s = 0; s < kSeeds; ++s) {
    bool mono = true;
    for (std::size_t r = 1; r + 1 < rep.rows.size(); ++r)  // scales 0.2 .. 0.025
      if (!(rep.rows[r].distances[static_cast<std::size_t>(s)] <
            rep.rows[r - 1].distances[static_cast<std::size_t>(s)]))
        mono = false;
    if (mono) ++monotone;
  }
  const double zero_dist = rep.rows.back().mean_distance;
  const double mu_err = std::abs(rep.mu_star(0) - 0.7);
  const bool pass = monotone >= 18 && zero_dist <= kZeroTol && mu_err <= 1e-9;
  return {pass, "monotone on " + std::to_string(monotone) + "/20 seeds (need 18), zero-scale distance " +
                    sci(zero_dist) + " (tol 1e-6)"};
}

// ---------------------------------------------------------------------------
// 13. Reports replay byte-identically from their embedded configuration.

Outcome check_determinism() {
  const fs::path work = "/tmp/roughdyn_acceptance_rerun";
  fs::remove_all(work);
  const std::string text =
      "run.mode = solve\n"
      "run.seeds = 21, 22\n"
      "noise.hurst = 0.4\n"
      "noise.dim = 1\n"
      "noise.steps_per_unit = 64\n"
      "noise.t0 = 0\n"
      "noise.t1 = 2\n"
      "problem.dim = 1\n"
      "problem.a = -0.8\n"
      "problem.diffusion = scalar-affine\n"
      "problem.diffusion.c = 0.05\n"
      "problem.diffusion.offset = 0.1\n"
      "solve.y0 = 0.4\n";
  const ExperimentConfig cfg = ExperimentConfig::parse_text(text);
  run_experiment(cfg, (work / "a").string(), true, true);

  // Rebuild the configuration purely from the written report.
  std::ifstream in(work / "a" / "report.json");
  nlohmann::json report;
  in >> report;
  ExperimentConfig replay;
  for (const auto& [key, value] : report.at("config").items())
    replay.set(key, value.get<std::string>());
  run_experiment(replay, (work / "b").string(), true, true);

  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
  };
  int csvs = 0;
  bool identical = true;
  for (const auto& entry : fs::directory_iterator(work / "a")) {
    if (entry.path().extension() != ".csv") continue;
    ++csvs;
    if (slurp(entry.path()) != slurp(work / "b" / entry.path().filename())) identical = false;
  }
  const bool reports_match = slurp(work / "a" / "report.json") == slurp(work / "b" / "report.json");
  const bool pass = identical && reports_match && csvs >= 3;
  return {pass, std::to_string(csvs) + " csv files and report.json byte-identical on replay"};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Outcome (*fn)();
  };
  const Entry checks[] = {
      {"chen-relation", check_chen_relation},
      {"variation-oracle", check_variation_oracle},
      {"greedy-bound", check_greedy_bound},
      {"integral-exactness", check_integral_exactness},
      {"solver-order", check_solver_order},
      {"voc-residual", check_voc_residual},
      {"growth-bounds", check_growth_bounds},
      {"gronwall-domination", check_gronwall},
      {"criterion-sweep", check_criterion_sweep},
      {"pullback-contraction", check_pullback_contraction},
      {"forward-decay", check_forward_decay},
      {"equilibrium-drift", check_equilibrium_drift},
      {"determinism", check_determinism},
  };

  int failures = 0;
  int idx = 0;
  for (const auto& entry : checks) {
    ++idx;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      out = entry.fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const auto secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << "[" << (idx < 10 ? " " : "") << idx << "/13] " << entry.name << " ";
    while (line.str().size() < 34) line << '.';
    line.precision(1);
    line << (out.pass ? " PASS " : " FAIL ") << std::fixed << "(" << secs << "s)  "
         << out.detail;
    std::cout << line.str() << "\n";
    if (!out.pass) ++failures;
  }
  std::cout << (13 - failures) << "/13 acceptance checks passed\n";
  return failures == 0 ? 0 : 1;
}
