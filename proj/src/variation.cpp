#include "roughdyn/variation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace roughdyn {

PvarResult pvar_dp(std::size_t first, std::size_t last,
                   const std::function<double(std::size_t, std::size_t)>& weight) {
  if (last < first) throw std::invalid_argument("pvar_dp needs last >= first");
  const std::size_t k = last - first;
  PvarResult res;
  if (k == 0) {
    res.witness = {first};
    return res;
  }
  // best[j]: optimal power sum over partitions of [first, first+j] that use
  // grid nodes and end at first+j; accumulation is left-to-right so a witness
  // replay reproduces the value bit-for-bit.
  std::vector<double> best(k + 1, 0.0);
  std::vector<std::size_t> arg(k + 1, 0);
  for (std::size_t j = 1; j <= k; ++j) {
    double b = -std::numeric_limits<double>::infinity();
    std::size_t a = 0;
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = best[i] + weight(first + i, first + j);
      if (cand > b) {
        b = cand;
        a = i;
      }
    }
    best[j] = b;
    arg[j] = a;
  }
  res.power_sum = best[k];
  std::vector<std::size_t> w;
  for (std::size_t j = k; j > 0; j = arg[j]) w.push_back(first + j);
  w.push_back(first);
  res.witness.assign(w.rbegin(), w.rend());
  return res;
}

namespace {

std::vector<double> witness_times(const RoughPath& rp, const std::vector<std::size_t>& idx) {
  std::vector<double> t;
  t.reserve(idx.size());
  for (const auto i : idx) t.push_back(rp.grid[i]);
  return t;
}

}  // namespace

NormReport p_variation(const RoughPath& rp, double p, double a, double b) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  const auto [i0, i1] = rp.grid.locate(a, b);
  const auto res = pvar_dp(i0, i1, [&](std::size_t i, std::size_t j) {
    return std::pow(rp.first_increment(i, j).norm(), p);
  });
  NormReport r;
  r.kind = "pvar-first";
  r.exponent = p;
  r.power_sum = res.power_sum;
  r.value = std::pow(res.power_sum, 1.0 / p);
  r.a = a;
  r.b = b;
  r.witness = witness_times(rp, res.witness);
  return r;
}

NormReport q_variation_second_level(const RoughPath& rp, double q, double a, double b) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  const auto [i0, i1] = rp.grid.locate(a, b);
  const auto res = pvar_dp(i0, i1, [&](std::size_t i, std::size_t j) {
    return std::pow(rp.second_increment(i, j).norm(), q);
  });
  NormReport r;
  r.kind = "qvar-second";
  r.exponent = q;
  r.power_sum = res.power_sum;
  r.value = std::pow(res.power_sum, 1.0 / q);
  r.a = a;
  r.b = b;
  r.witness = witness_times(rp, res.witness);
  return r;
}

NormReport rough_pvar_norm(const RoughPath& rp, double p, double a, double b) {
  if (!(p > 2.0 && p < 3.0)) throw std::invalid_argument("rough norm needs p in (2,3)");
  const NormReport first = p_variation(rp, p, a, b);
  const NormReport second = q_variation_second_level(rp, p / 2.0, a, b);
  NormReport r;
  r.kind = "rough-pvar";
  r.exponent = p;
  r.power_sum = first.power_sum + second.power_sum;
  r.value = std::pow(r.power_sum, 1.0 / p);
  r.a = a;
  r.b = b;
  return r;
}

double holder_norm(const RoughPath& rp, double alpha, double a, double b) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0,1]");
  const auto [i0, i1] = rp.grid.locate(a, b);
  double best = 0.0;
  for (std::size_t i = i0; i < i1; ++i) {
    for (std::size_t j = i + 1; j <= i1; ++j) {
      const double dt = rp.grid[j] - rp.grid[i];
      best = std::max(best, rp.first_increment(i, j).norm() / std::pow(dt, alpha));
    }
  }
  return best;
}

double default_gamma(double c_p, double c_g) {
  if (!(c_p > 0.0)) throw std::invalid_argument("c_p must be positive");
  if (c_g < 0.0) throw std::invalid_argument("c_g must be nonnegative");
  if (c_g == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (4.0 * c_p * c_g);
}

GreedyPartition greedy_times(const RoughPath& rp, double gamma, double p, double a, double b) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const auto [i0, i1] = rp.grid.locate(a, b);
  const double q = p / 2.0;

  GreedyPartition out;
  out.gamma = gamma;
  out.p = p;
  out.times.push_back(rp.grid[i0]);

  std::size_t anchor = i0;
  const double threshold = std::isinf(gamma) ? std::numeric_limits<double>::infinity()
                                             : std::pow(gamma, p);
  while (anchor < i1) {
    // Incremental DP from the current anchor on both levels; stop at the
    // first node whose combined power sum reaches gamma^p.
    const std::size_t len = i1 - anchor;
    std::vector<double> best1(len + 1, 0.0), best2(len + 1, 0.0);
    std::size_t stop = i1;
    bool crossed = false;
    for (std::size_t j = 1; j <= len && !crossed; ++j) {
      double b1 = -std::numeric_limits<double>::infinity();
      double b2 = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < j; ++i) {
        const double c1 =
            best1[i] + std::pow(rp.first_increment(anchor + i, anchor + j).norm(), p);
        const double c2 =
            best2[i] + std::pow(rp.second_increment(anchor + i, anchor + j).norm(), q);
        if (c1 > b1) b1 = c1;
        if (c2 > b2) b2 = c2;
      }
      best1[j] = b1;
      best2[j] = b2;
      if (b1 + b2 >= threshold) {
        stop = anchor + j;
        crossed = true;
      }
    }
    anchor = crossed ? stop : i1;
    out.times.push_back(rp.grid[anchor]);
  }

  out.count = static_cast<std::int64_t>(out.times.size()) - 1;
  const NormReport whole = rough_pvar_norm(rp, p, a, b);
  out.count_bound =
      std::isinf(gamma) ? 1.0 : 1.0 + std::pow(gamma, -p) * whole.power_sum;
  return out;
}

}  // namespace roughdyn
