#include "roughdyn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace roughdyn {
namespace {

bool detect_uniform(const std::vector<double>& t) {
  if (t.size() < 3) return true;
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-12 * std::max(1.0, std::abs(t.back() - t.front())))
      return false;
  }
  return true;
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> points) : t_(std::move(points)) {
  if (t_.size() < 2) throw std::invalid_argument("grid needs at least 2 nodes");
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
    if (!std::isfinite(t_[i])) throw std::invalid_argument("grid nodes must be finite");
  }
  if (!std::isfinite(t_.front())) throw std::invalid_argument("grid nodes must be finite");
  uniform_ = detect_uniform(t_);
  dt_ = (t_.back() - t_.front()) / static_cast<double>(t_.size() - 1);
}

TimeGrid TimeGrid::uniform(double t0, double t1, std::int64_t n_steps) {
  if (!(t1 > t0)) throw std::invalid_argument("uniform grid needs t1 > t0");
  if (n_steps < 1) throw std::invalid_argument("uniform grid needs n_steps >= 1");
  std::vector<double> t(static_cast<std::size_t>(n_steps) + 1);
  const double h = (t1 - t0) / static_cast<double>(n_steps);
  for (std::int64_t i = 0; i <= n_steps; ++i) t[static_cast<std::size_t>(i)] = t0 + h * static_cast<double>(i);
  t.back() = t1;
  return TimeGrid(std::move(t));
}

std::size_t TimeGrid::index_of(double time) const {
  const auto it = std::lower_bound(t_.begin(), t_.end(), time);
  std::size_t best = static_cast<std::size_t>(std::distance(t_.begin(), it));
  if (best == t_.size()) best = t_.size() - 1;
  if (best > 0 && std::abs(t_[best - 1] - time) < std::abs(t_[best] - time)) --best;
  const double tol = 1e-9 * std::max({1.0, std::abs(time), dt_});
  if (std::abs(t_[best] - time) > tol)
    throw std::out_of_range("time " + std::to_string(time) + " is not a grid node");
  return best;
}

bool TimeGrid::contains(double time) const {
  try {
    (void)index_of(time);
    return true;
  } catch (const std::out_of_range&) {
    return false;
  }
}

std::pair<std::size_t, std::size_t> TimeGrid::locate(double a, double b) const {
  if (!(b > a)) throw std::invalid_argument("interval needs b > a");
  const std::size_t i0 = index_of(a), i1 = index_of(b);
  return {i0, i1};
}

TimeGrid TimeGrid::subsample(std::size_t stride) const {
  if (stride == 0) throw std::invalid_argument("stride must be positive");
  std::vector<double> keep;
  for (std::size_t i = 0; i < t_.size(); i += stride) keep.push_back(t_[i]);
  if (keep.back() != t_.back()) keep.push_back(t_.back());
  return TimeGrid(std::move(keep));
}

}  // namespace roughdyn
