#pragma once

#include <cstdint>
#include <vector>

namespace roughdyn {

// Strictly increasing time grid.  Uniformity is detected once and cached so
// samplers can pick the fast path.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> points);

  static TimeGrid uniform(double t0, double t1, std::int64_t n_steps);

  const std::vector<double>& points() const { return t_; }
  std::size_t size() const { return t_.size(); }          // number of nodes
  std::int64_t steps() const { return static_cast<std::int64_t>(t_.size()) - 1; }
  double operator[](std::size_t i) const { return t_[i]; }
  double front() const { return t_.front(); }
  double back() const { return t_.back(); }
  double span() const { return t_.back() - t_.front(); }

  bool is_uniform() const { return uniform_; }
  double dt() const { return dt_; }  // mean spacing; exact spacing when uniform

  // Nearest node within a relative tolerance; throws std::out_of_range when
  // the time is not a grid node.
  std::size_t index_of(double time) const;
  bool contains(double time) const;

  // Index range [i0, i1] covering [a, b]; both ends must be nodes.
  std::pair<std::size_t, std::size_t> locate(double a, double b) const;

  // Sub-grid keeping every `stride`-th node starting at index i0 (always
  // keeps the last node of the selected range).
  TimeGrid subsample(std::size_t stride) const;

 private:
  std::vector<double> t_;
  bool uniform_ = false;
  double dt_ = 0.0;
};

}  // namespace roughdyn
