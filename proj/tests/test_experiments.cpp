#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "roughdyn/experiments.hpp"

using roughdyn::NoiseFamily;
using roughdyn::RdeProblem;

namespace {

RdeProblem contraction_no_noise() {
  RdeProblem prob;
  prob.A = -Eigen::MatrixXd::Identity(1, 1);
  prob.f = roughdyn::zero_drift(1);
  prob.g = roughdyn::constant_coefficient(Eigen::MatrixXd::Zero(1, 1));
  return prob;
}

}  // namespace

TEST_CASE("equilibrium solve inverts the drift balance") {
  const Eigen::MatrixXd A = -2.0 * Eigen::MatrixXd::Identity(2, 2);
  const auto f = roughdyn::affine_drift(Eigen::MatrixXd::Zero(2, 2),
                                        Eigen::Vector2d(1.0, -3.0));
  const Eigen::VectorXd mu = roughdyn::equilibrium_point(A, f);
  // A mu + f0 = 0 -> mu = f0 / 2.
  CHECK(mu(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(mu(1) == doctest::Approx(-1.5).epsilon(1e-10));
  const auto tanh_f = roughdyn::tanh_drift(0.5, 2, Eigen::VectorXd::Zero(2));
  const Eigen::VectorXd origin =
      roughdyn::equilibrium_point(-Eigen::MatrixXd::Identity(2, 2), tanh_f);
  CHECK(origin.norm() <= 1e-10);
}

TEST_CASE("line fit recovers exact affine data") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> ys = {1.5, 3.5, 5.5, 7.5};
  const auto fit = roughdyn::fit_line(xs, ys);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(fit.intercept == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS((void)roughdyn::fit_line({1.0}, {2.0}));
}

TEST_CASE("sphere starts sit on the sphere and spread out") {
  for (const int d : {1, 2, 5}) {
    const auto pts = roughdyn::sphere_points(d, 6, 0.75, 99);
    REQUIRE(pts.size() == 6);
    for (const auto& pt : pts) CHECK(pt.norm() == doctest::Approx(0.75).epsilon(1e-12));
    double maxgap = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        maxgap = std::max(maxgap, (pts[i] - pts[j]).norm());
    CHECK(maxgap > 0.75);  // not all clustered
  }
}

TEST_CASE("diffusion scaling acts on values and declared constants") {
  RdeProblem prob;
  prob.A = -Eigen::MatrixXd::Identity(2, 2);
  prob.f = roughdyn::zero_drift(2);
  std::vector<Eigen::MatrixXd> slices = {Eigen::MatrixXd::Identity(2, 2) * 0.4,
                                         Eigen::MatrixXd::Identity(2, 2) * 0.2};
  prob.g = roughdyn::affine_coefficient(slices, Eigen::MatrixXd::Ones(2, 2));
  const RdeProblem half = roughdyn::scale_diffusion(prob, 0.5);
  const Eigen::VectorXd y = Eigen::Vector2d(0.3, -0.7);
  CHECK((half.g.value(y) - 0.5 * prob.g.value(y)).norm() <= 1e-14);
  CHECK(half.g.lipschitz == doctest::Approx(0.5 * prob.g.lipschitz).epsilon(1e-13));
  const RdeProblem off = roughdyn::scale_diffusion(prob, 0.0);
  CHECK(off.g.value(y).norm() == 0.0);
  CHECK(off.g.lipschitz == 0.0);
}

TEST_CASE("noiseless pullback contracts at the scheme's exact rate") {
  const RdeProblem prob = contraction_no_noise();
  NoiseFamily noise;
  noise.hurst = 0.4;
  noise.steps_per_unit = 64;
  noise.lift_level = 0;
  const std::vector<double> horizons = {4.0, 6.0};
  const auto rep = roughdyn::pullback_experiment(prob, noise, horizons, 1.0, 2, {5},
                                                 std::nullopt, 20, 9001);
  REQUIRE(rep.per_seed.size() == 1);
  const auto& s = rep.per_seed[0];
  REQUIRE(s.diameters.size() == 2);
  // One Euler step multiplies by (1 - h) exactly; diameter = 2 (1-h)^{hT}.
  const double h = 1.0 / 64.0;
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    const double expected =
        2.0 * std::pow(1.0 - h, horizons[k] * 64.0);
    CHECK(s.diameters[k] == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(s.rate < 0.0);
  CHECK(s.terminal_diameter == doctest::Approx(s.diameters.back()).epsilon(1e-12));
}

TEST_CASE("absorbing estimate collapses to its floor without noise") {
  const RdeProblem prob = contraction_no_noise();
  NoiseFamily noise;
  const auto rep = roughdyn::pullback_experiment(prob, noise, {4.0}, 1.0, 2, {3},
                                                 std::nullopt, 20, 9001);
  CHECK(rep.per_seed[0].b_hat == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rep.criterion_half.satisfied);  // u = 0
  CHECK(rep.criterion_general.satisfied);
}

TEST_CASE("forward experiment with identical starts is identically zero") {
  RdeProblem prob;
  prob.A = -Eigen::MatrixXd::Identity(1, 1);
  prob.f = roughdyn::zero_drift(1);
  prob.g = roughdyn::scalar_affine_coefficient(0.2, 0.1);
  NoiseFamily noise;
  const Eigen::VectorXd z0 = Eigen::VectorXd::Ones(1) * 0.4;
  const auto rep = roughdyn::forward_experiment(prob, noise, 3.0, z0, z0, {1, 2});
  for (const auto& seed_run : rep.per_seed) {
    CHECK(seed_run.dominated);
    for (const double zn : seed_run.z_norms) CHECK(zn == 0.0);
    for (const double l : seed_run.lhs) CHECK(l == 0.0);
  }
}

TEST_CASE("forward experiment domination on a mild fixture") {
  RdeProblem prob;
  prob.A = -Eigen::MatrixXd::Identity(1, 1);
  prob.f = roughdyn::zero_drift(1);
  prob.g = roughdyn::scalar_affine_coefficient(0.05, 0.1);
  NoiseFamily noise;
  const auto rep = roughdyn::forward_experiment(prob, noise, 5.0,
                                                Eigen::VectorXd::Ones(1) * 0.5,
                                                Eigen::VectorXd::Zero(1), {11, 12, 13});
  for (const auto& seed_run : rep.per_seed) CHECK(seed_run.dominated);
}

TEST_CASE("drift sweep distances scale with a constant coefficient") {
  RdeProblem prob;
  prob.A = -Eigen::MatrixXd::Identity(1, 1);
  prob.f = roughdyn::zero_drift(1);
  prob.g = roughdyn::constant_coefficient(Eigen::MatrixXd::Ones(1, 1) * 0.5);
  NoiseFamily noise;
  const std::vector<double> scales = {0.2, 0.1};
  // Horizon long enough that the noise-free ensemble gap e^{-T} sits well
  // below the contraction threshold of 100 * solver_tol.
  const auto rep =
      roughdyn::equilibrium_drift(prob, noise, scales, 16.0, 1.0, 4, {21, 22}, 1e-8);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.mu_star.norm() <= 1e-8);
  // Additive response is linear in the scale: halving the scale halves the
  // distance for each seed.
  for (std::size_t s = 0; s < rep.rows[0].distances.size(); ++s) {
    const double ratio = rep.rows[1].distances[s] / rep.rows[0].distances[s];
    CHECK(ratio == doctest::Approx(0.5).epsilon(1e-6));
  }
  CHECK(rep.rows[0].contracted);
  CHECK(rep.rows[1].contracted);
}

TEST_CASE("drift sweep at zero scale lands on the deterministic equilibrium") {
  RdeProblem prob;
  prob.A = -Eigen::MatrixXd::Identity(1, 1);
  prob.f = roughdyn::affine_drift(Eigen::MatrixXd::Zero(1, 1),
                                  Eigen::VectorXd::Ones(1) * 0.7);
  prob.g = roughdyn::constant_coefficient(Eigen::MatrixXd::Ones(1, 1) * 0.3);
  NoiseFamily noise;
  const auto rep =
      roughdyn::equilibrium_drift(prob, noise, {0.0}, 20.0, 1.0, 4, {31}, 1e-6);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.mu_star(0) == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(rep.rows[0].mean_distance <= 1e-6);
}
