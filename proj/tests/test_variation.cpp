#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "roughdyn/controlled.hpp"
#include "roughdyn/fbm.hpp"
#include "roughdyn/rng.hpp"
#include "roughdyn/rough_path.hpp"
#include "roughdyn/variation.hpp"

using roughdyn::NormalStream;
using roughdyn::RoughPath;
using roughdyn::TimeGrid;

namespace {

RoughPath lift_values(const std::vector<double>& vals, double p) {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, vals.size() - 1);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vals.size()), 1);
  for (std::size_t i = 0; i < vals.size(); ++i)
    m(static_cast<Eigen::Index>(i), 0) = vals[i];
  return roughdyn::lift_piecewise_linear(grid, m, p);
}

// Exhaustive first-level power sum over all partitions of the node range.
double brute_power_sum(const RoughPath& rp, double p) {
  const std::size_t n = rp.nodes();
  const std::size_t interior = n - 2;
  double best = 0.0;
  for (std::size_t mask = 0; mask < (1ull << interior); ++mask) {
    std::vector<std::size_t> part = {0};
    for (std::size_t b = 0; b < interior; ++b)
      if (mask & (1ull << b)) part.push_back(b + 1);
    part.push_back(n - 1);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < part.size(); ++k)
      acc += std::pow(rp.first_increment(part[k], part[k + 1]).norm(), p);
    best = std::max(best, acc);
  }
  return best;
}

}  // namespace

TEST_CASE("dynamic program equals exhaustive search on small paths") {
  const NormalStream noise(555, 0);
  std::uint64_t idx = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4 + (trial % 9);  // 4..12 nodes
    std::vector<double> vals = {0.0};
    for (std::size_t i = 1; i < n; ++i) vals.push_back(vals.back() + noise(idx++));
    const double p = 2.1 + 0.08 * (trial % 10);
    const RoughPath rp = lift_values(vals, p);
    const auto rep = roughdyn::p_variation(rp, p, 0.0, 1.0);
    const double brute = brute_power_sum(rp, p);
    CHECK(rep.power_sum == doctest::Approx(brute).epsilon(1e-12));
    CHECK(rep.value == doctest::Approx(std::pow(brute, 1.0 / p)).epsilon(1e-12));
  }
}

TEST_CASE("witness replays to the reported power sum") {
  const NormalStream noise(777, 1);
  std::uint64_t idx = 0;
  std::vector<double> vals = {0.0};
  for (int i = 0; i < 30; ++i) vals.push_back(vals.back() + noise(idx++));
  const RoughPath rp = lift_values(vals, 2.5);
  const auto rep = roughdyn::p_variation(rp, 2.5, 0.0, 1.0);
  REQUIRE(rep.witness.size() >= 2);
  CHECK(rep.witness.front() == 0.0);
  CHECK(rep.witness.back() == 1.0);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < rep.witness.size(); ++k) {
    const auto [x, xx] = rp.increment(rep.witness[k], rep.witness[k + 1]);
    acc += std::pow(x.norm(), 2.5);
  }
  CHECK(acc == rep.power_sum);  // bitwise replay of the maximizer
}

TEST_CASE("unit zigzag at p = 2: all singletons win") {
  // The declared exponent on the lift stays inside (2,3); the norm query may
  // use any p >= 1.
  const RoughPath rp = lift_values({0.0, 1.0, 0.0, 1.0}, 2.5);
  const auto rep = roughdyn::p_variation(rp, 2.0, 0.0, 1.0);
  CHECK(rep.power_sum == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(rep.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  REQUIRE(rep.witness.size() == 4);
  CHECK(rep.witness[0] == doctest::Approx(0.0));
  CHECK(rep.witness[1] == doctest::Approx(1.0 / 3.0));
  CHECK(rep.witness[2] == doctest::Approx(2.0 / 3.0));
  CHECK(rep.witness[3] == doctest::Approx(1.0));
}

TEST_CASE("linear path: combined level norm has a closed form") {
  std::vector<double> vals;
  for (int i = 0; i <= 50; ++i) vals.push_back(i / 50.0);
  const RoughPath rp = lift_values(vals, 2.5);
  const auto first = roughdyn::p_variation(rp, 2.5, 0.0, 1.0);
  CHECK(first.value == doctest::Approx(1.0).epsilon(1e-13));
  const auto second = roughdyn::q_variation_second_level(rp, 1.25, 0.0, 1.0);
  // Single-block partition dominates: |1/2|^{1.25}.
  CHECK(second.power_sum == doctest::Approx(std::pow(0.5, 1.25)).epsilon(1e-13));
  const auto rough = roughdyn::rough_pvar_norm(rp, 2.5, 0.0, 1.0);
  CHECK(rough.value == doctest::Approx(1.1507213244476882).epsilon(1e-13));
}

TEST_CASE("power sums are superadditive over subintervals") {
  const NormalStream noise(901, 2);
  std::uint64_t idx = 0;
  std::vector<double> vals = {0.0};
  for (int i = 0; i < 40; ++i) vals.push_back(vals.back() + 0.3 * noise(idx++));
  const RoughPath rp = lift_values(vals, 2.5);
  const double whole = roughdyn::p_variation(rp, 2.5, 0.0, 1.0).power_sum;
  const double left = roughdyn::p_variation(rp, 2.5, 0.0, 0.5).power_sum;
  const double right = roughdyn::p_variation(rp, 2.5, 0.5, 1.0).power_sum;
  CHECK(whole >= left + right - 1e-12);
}

TEST_CASE("greedy partition on a three-node ramp") {
  // Increments of size 1 at each of the two steps; threshold below 1 means
  // every step exceeds: two steps, times are all three nodes.
  const RoughPath rp = lift_values({0.0, 1.0, 2.0}, 2.5);
  const auto part = roughdyn::greedy_times(rp, 0.9, 2.5, 0.0, 1.0);
  CHECK(part.count == 2);
  REQUIRE(part.times.size() == 3);
  CHECK(part.times[0] == doctest::Approx(0.0));
  CHECK(part.times[1] == doctest::Approx(0.5));
  CHECK(part.times[2] == doctest::Approx(1.0));
}

TEST_CASE("greedy count respects the power-sum bound") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    roughdyn::FbmSpec spec;
    spec.hurst = 0.35 + 0.02 * static_cast<double>(seed % 8);
    spec.dim = 1 + static_cast<int>(seed % 2);
    spec.seed = seed;
    spec.grid = TimeGrid::uniform(0.0, 1.0, 128);
    spec.lift_level = 0;
    const RoughPath rp = roughdyn::sample_fbm_rough(spec, 2.5);
    for (const double gamma : {0.2, 0.5, 1.0}) {
      const auto part = roughdyn::greedy_times(rp, gamma, 2.5, 0.0, 1.0);
      CHECK(static_cast<double>(part.count) <= part.count_bound + 1e-9);
      CHECK(part.times.front() == doctest::Approx(0.0));
      CHECK(part.times.back() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("infinite threshold yields a single step") {
  const RoughPath rp = lift_values({0.0, 1.0, 2.0, 3.0}, 2.5);
  const double gamma = roughdyn::default_gamma(roughdyn::sewing_constant(2.5), 0.0);
  CHECK(std::isinf(gamma));
  const auto part = roughdyn::greedy_times(rp, gamma, 2.5, 0.0, 1.0);
  CHECK(part.count == 1);
  REQUIRE(part.times.size() == 2);
  CHECK(part.times[0] == doctest::Approx(0.0));
  CHECK(part.times[1] == doctest::Approx(1.0));
}

TEST_CASE("default threshold formula") {
  CHECK(roughdyn::default_gamma(8.0, 0.5) == doctest::Approx(1.0 / 16.0));
  CHECK(std::isinf(roughdyn::default_gamma(8.0, 0.0)));
}
