#include "roughdyn/rough_path.hpp"

#include <cmath>
#include <stdexcept>

namespace roughdyn {

Eigen::VectorXd RoughPath::first_increment(std::size_t i, std::size_t j) const {
  return (x.row(j) - x.row(i)).transpose();
}

Eigen::MatrixXd RoughPath::second_increment(std::size_t i, std::size_t j) const {
  // Chen re-anchoring: X_{i,j} = X_{0,j} - X_{0,i} - x_{0,i} (x) x_{i,j}.
  const Eigen::VectorXd base = x.row(i).transpose();
  const Eigen::VectorXd inc = first_increment(i, j);
  return xx[j] - xx[i] - base * inc.transpose();
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> RoughPath::increment(double s, double t) const {
  const std::size_t i = grid.index_of(s), j = grid.index_of(t);
  if (j < i) throw std::invalid_argument("increment needs s <= t");
  return {first_increment(i, j), second_increment(i, j)};
}

void RoughPath::validate() const {
  if (dim < 1) throw std::invalid_argument("rough path dimension must be >= 1");
  if (!(p > 2.0 && p < 3.0)) throw std::invalid_argument("declared p must lie in (2,3)");
  const auto n = grid.size();
  if (static_cast<std::size_t>(x.rows()) != n || x.cols() != dim)
    throw std::invalid_argument("first level shape mismatch");
  if (xx.size() != n) throw std::invalid_argument("second level length mismatch");
  if (x.row(0).norm() != 0.0) throw std::invalid_argument("first level must be anchored at 0");
  if (xx[0].norm() != 0.0) throw std::invalid_argument("second level must be anchored at 0");
  for (const auto& m : xx)
    if (m.rows() != dim || m.cols() != dim)
      throw std::invalid_argument("second level shape mismatch");
}

RoughPath lift_piecewise_linear(const TimeGrid& grid, const Eigen::MatrixXd& samples,
                                double p) {
  if (static_cast<std::size_t>(samples.rows()) != grid.size())
    throw std::invalid_argument("samples rows must match grid nodes");
  const int m = static_cast<int>(samples.cols());
  if (m < 1) throw std::invalid_argument("need at least one channel");
  if (!(p > 2.0 && p < 3.0)) throw std::invalid_argument("declared p must lie in (2,3)");

  RoughPath rp;
  rp.grid = grid;
  rp.dim = m;
  rp.p = p;
  const std::size_t n = grid.size();
  rp.x.resize(n, m);
  rp.x.row(0).setZero();
  rp.xx.assign(n, Eigen::MatrixXd::Zero(m, m));
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t j = 1; j < n; ++j) {
    const Eigen::VectorXd inc = (samples.row(j) - samples.row(j - 1)).transpose();
    const Eigen::VectorXd base = rp.x.row(j - 1).transpose();
    acc += base * inc.transpose() + 0.5 * (inc * inc.transpose());
    rp.x.row(j) = rp.x.row(j - 1) + inc.transpose();
    rp.xx[j] = acc;
  }
  return rp;
}

Eigen::MatrixXd chen_defect(const RoughPath& rp, double s, double u, double t) {
  const std::size_t i = rp.grid.index_of(s), k = rp.grid.index_of(u), j = rp.grid.index_of(t);
  if (!(i <= k && k <= j)) throw std::invalid_argument("need s <= u <= t");
  const Eigen::MatrixXd whole = rp.second_increment(i, j);
  const Eigen::MatrixXd left = rp.second_increment(i, k);
  const Eigen::MatrixXd right = rp.second_increment(k, j);
  const Eigen::VectorXd a = rp.first_increment(i, k);
  const Eigen::VectorXd b = rp.first_increment(k, j);
  return whole - left - right - a * b.transpose();
}

RoughPath wiener_shift(const RoughPath& rp, double h) {
  std::size_t ih;
  try {
    ih = rp.grid.index_of(h);
  } catch (const std::out_of_range&) {
    throw std::domain_error("shift origin is outside the grid support");
  }
  const std::size_t n = rp.grid.size();
  const double t_h = rp.grid[ih];
  std::vector<double> pts;
  pts.reserve(n - ih);
  for (std::size_t j = ih; j < n; ++j) pts.push_back(rp.grid[j] - t_h);
  if (pts.size() < 2) throw std::domain_error("shift leaves fewer than two nodes");

  RoughPath out;
  out.grid = TimeGrid(std::move(pts));
  out.dim = rp.dim;
  out.p = rp.p;
  out.hurst = rp.hurst;
  out.seed = rp.seed;
  out.lift_level = rp.lift_level;
  const std::size_t k = out.grid.size();
  out.x.resize(k, rp.dim);
  out.xx.assign(k, Eigen::MatrixXd::Zero(rp.dim, rp.dim));
  for (std::size_t j = 0; j < k; ++j) {
    out.x.row(j) = rp.x.row(ih + j) - rp.x.row(ih);
    out.xx[j] = rp.second_increment(ih, ih + j);
  }
  return out;
}

RoughPath restrict_to_nodes(const RoughPath& rp, const std::vector<std::size_t>& keep) {
  if (keep.size() < 2) throw std::invalid_argument("restriction needs at least two nodes");
  for (std::size_t i = 1; i < keep.size(); ++i)
    if (keep[i] <= keep[i - 1]) throw std::invalid_argument("restriction indices must increase");
  if (keep.back() >= rp.grid.size()) throw std::invalid_argument("restriction index out of range");

  const std::size_t base = keep.front();
  std::vector<double> pts;
  pts.reserve(keep.size());
  for (const auto i : keep) pts.push_back(rp.grid[i]);

  RoughPath out;
  out.grid = TimeGrid(std::move(pts));
  out.dim = rp.dim;
  out.p = rp.p;
  out.hurst = rp.hurst;
  out.seed = rp.seed;
  out.lift_level = rp.lift_level;
  out.x.resize(keep.size(), rp.dim);
  out.xx.assign(keep.size(), Eigen::MatrixXd::Zero(rp.dim, rp.dim));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    out.x.row(j) = rp.x.row(keep[j]) - rp.x.row(base);
    out.xx[j] = rp.second_increment(base, keep[j]);
  }
  return out;
}

}  // namespace roughdyn
