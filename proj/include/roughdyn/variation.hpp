#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roughdyn/rough_path.hpp"

namespace roughdyn {

// Result of a variation-norm computation over [a, b].
struct NormReport {
  std::string kind;                    // "pvar-first" | "qvar-second" | "rough-pvar" | "holder"
  double exponent = 0.0;               // p, q, or alpha
  double value = 0.0;
  double power_sum = 0.0;              // sup of the power sum (value^exponent where applicable)
  double a = 0.0, b = 0.0;
  std::vector<double> witness;         // maximizing partition times (empty for combined kinds)
};

// Exact discrete p-variation by dynamic programming over grid partitions:
// V(j) = max_{i<j} V(i) + |x_{ti,tj}|^p, with witness backtracking.
NormReport p_variation(const RoughPath& rp, double p, double a, double b);

// Same DP on Chen-reconstructed pair increments of the second level
// (Frobenius norm), exponent q = p/2 by convention of the caller.
NormReport q_variation_second_level(const RoughPath& rp, double q, double a, double b);

// Combined rough norm ( sup-sum_p(first) + sup-sum_{p/2}(second) )^{1/p}.
NormReport rough_pvar_norm(const RoughPath& rp, double p, double a, double b);

// max_{s<t} |x_{s,t}| / (t-s)^alpha over grid pairs in [a, b].
double holder_norm(const RoughPath& rp, double alpha, double a, double b);

// Generic partition DP over an arbitrary increment weight; exposed so state
// paths and remainders reuse the exact same optimizer.
// weight(i, j) must return |increment over (node i, node j)|^exponent.
struct PvarResult {
  double power_sum = 0.0;
  std::vector<std::size_t> witness;    // node indices, first..last
};
PvarResult pvar_dp(std::size_t first, std::size_t last,
                   const std::function<double(std::size_t, std::size_t)>& weight);

// Greedy exceedance times: tau_0 = a, tau_{i+1} = first grid node t > tau_i
// with rough p-var norm over [tau_i, t] >= gamma (capped at b).
struct GreedyPartition {
  double gamma = 0.0;
  double p = 0.0;
  std::vector<double> times;           // tau_0 .. tau_N
  std::int64_t count = 0;              // N = number of steps
  double count_bound = 0.0;            // 1 + gamma^{-p} * rough_norm^p over [a,b]
};
GreedyPartition greedy_times(const RoughPath& rp, double gamma, double p, double a, double b);

// gamma = 1 / (4 c_p c_g); +inf when c_g == 0 (no exceedance possible).
double default_gamma(double c_p, double c_g);

}  // namespace roughdyn
