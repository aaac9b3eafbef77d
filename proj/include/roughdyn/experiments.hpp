#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roughdyn/fbm.hpp"
#include "roughdyn/rde.hpp"
#include "roughdyn/stability.hpp"

namespace roughdyn {

// Noise family shared by the experiment drivers; the absolute window is
// chosen per experiment.
struct NoiseFamily {
  double hurst = 0.4;
  int steps_per_unit = 64;
  int lift_level = 0;
  double p = 2.5;
};

// Damped fixed-point solve of A mu + f(mu) = 0.
Eigen::VectorXd equilibrium_point(const Eigen::MatrixXd& A, const LipschitzFunction& f,
                                  double tol = 1e-12, int max_iter = 100000);

struct PullbackSeedResult {
  std::uint64_t seed = 0;
  std::vector<double> diameters;       // per horizon, at time 0
  double rate = 0.0;                   // slope of log diameter vs horizon
  double terminal_diameter = 0.0;      // at the largest horizon
  double max_terminal_norm = 0.0;      // largest |y(0)| over the ensemble
  double b_hat = 0.0;                  // absorbing-radius estimate
  double tempered_slope = 0.0;         // trend of log(per-window rough norm)/k
};

struct PullbackReport {
  std::vector<double> horizons;
  double ball_radius = 1.0;
  int ensemble = 2;
  std::vector<PullbackSeedResult> per_seed;
  CriterionResult criterion_half;      // half-prefactor margin
  CriterionResult criterion_general;   // (1+|A|)-prefactor margin
  double rate_bound = 0.0;             // -(lambda - G_hat) comparison level
  GammaEstimate gamma;
};

PullbackReport pullback_experiment(const RdeProblem& prob, const NoiseFamily& noise,
                                   const std::vector<double>& horizons, double ball_radius,
                                   int ensemble, const std::vector<std::uint64_t>& seeds,
                                   const std::optional<GammaEstimate>& gamma = std::nullopt,
                                   int gamma_samples = 200, std::uint64_t gamma_seed = 9001);

struct ForwardSeedResult {
  std::uint64_t seed = 0;
  std::vector<double> z_norms;         // |z_n| at integer nodes 0..T
  std::vector<double> lhs;             // |z_n| e^{lambda n}
  std::vector<double> bound_rhs;       // one-step difference bound
  bool dominated = true;               // lhs <= rhs at every n
};

struct ForwardReport {
  double horizon = 0.0;
  std::vector<ForwardSeedResult> per_seed;
  StabilityParams params;
};

ForwardReport forward_experiment(const RdeProblem& prob, const NoiseFamily& noise,
                                 double horizon, const Eigen::VectorXd& z0_plus,
                                 const Eigen::VectorXd& z0_minus,
                                 const std::vector<std::uint64_t>& seeds);

struct DriftRow {
  double g_scale = 0.0;                // coefficient scale in the sweep
  std::vector<double> distances;       // per seed: |ensemble limit - mu*|
  double mean_distance = 0.0;
  bool contracted = true;              // ensemble collapsed at the horizon
};

struct DriftReport {
  Eigen::VectorXd mu_star;
  std::vector<DriftRow> rows;          // one per scale, in sweep order
  double horizon = 0.0;
};

// Scales the diffusion coefficient by each entry of `scales` (largest first
// by convention of the caller) and measures the pullback limit's distance to
// the deterministic equilibrium.
DriftReport equilibrium_drift(const RdeProblem& base, const NoiseFamily& noise,
                              const std::vector<double>& scales, double horizon,
                              double ball_radius, int ensemble,
                              const std::vector<std::uint64_t>& seeds,
                              double solver_tol = 1e-6);

// Least-squares slope (and intercept/r2) of y against x.
struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

// Evenly spread deterministic points on the radius-r sphere (d=1: +-r
// alternating; d=2: equal angles; d>=3: seeded normalized Gaussians).
std::vector<Eigen::VectorXd> sphere_points(int d, int count, double radius,
                                           std::uint64_t seed);

// Scale the diffusion coefficient of a problem (affine/constant kinds scale
// slices and offset; bounded kinds scale the wrapped values and constants).
RdeProblem scale_diffusion(const RdeProblem& prob, double scale);

}  // namespace roughdyn
