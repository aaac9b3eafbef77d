#include "roughdyn/controlled.hpp"

#include <cmath>
#include <stdexcept>

namespace roughdyn {

Eigen::MatrixXd ControlledPath::remainder_by_index(std::size_t i, std::size_t j) const {
  if (j < i) throw std::invalid_argument("remainder needs s <= t");
  Eigen::MatrixXd r = value[j] - value[i];
  const Eigen::VectorXd inc = driver->first_increment(i, j);
  for (int k = 0; k < channels(); ++k) r -= inc(k) * deriv[i][static_cast<std::size_t>(k)];
  return r;
}

Eigen::MatrixXd ControlledPath::remainder(double s, double t) const {
  return remainder_by_index(driver->grid.index_of(s), driver->grid.index_of(t));
}

void ControlledPath::validate() const {
  if (!driver) throw std::invalid_argument("controlled path needs a driver");
  if (value.size() != driver->nodes() || deriv.size() != driver->nodes())
    throw std::invalid_argument("controlled path must cover every driver node");
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i].rows() != rows || value[i].cols() != cols)
      throw std::invalid_argument("controlled value shape mismatch");
    if (deriv[i].size() != static_cast<std::size_t>(driver->dim))
      throw std::invalid_argument("derivative must have one slice per channel");
    for (const auto& s : deriv[i])
      if (s.rows() != rows || s.cols() != cols)
        throw std::invalid_argument("derivative slice shape mismatch");
  }
}

ControlledPath controlled_driver(std::shared_ptr<const RoughPath> rp) {
  ControlledPath cp;
  cp.driver = rp;
  cp.rows = rp->dim;
  cp.cols = 1;
  cp.value.reserve(rp->nodes());
  cp.deriv.reserve(rp->nodes());
  std::vector<Eigen::MatrixXd> slices;
  for (int k = 0; k < rp->dim; ++k) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(rp->dim, 1);
    e(k, 0) = 1.0;
    slices.push_back(e);
  }
  for (std::size_t i = 0; i < rp->nodes(); ++i) {
    cp.value.push_back(rp->x.row(i).transpose());
    cp.deriv.push_back(slices);
  }
  return cp;
}

ControlledPath controlled_affine_in_driver(std::shared_ptr<const RoughPath> rp,
                                           const Eigen::MatrixXd& W,
                                           const Eigen::VectorXd& base) {
  if (W.cols() != rp->dim) throw std::invalid_argument("W must have one column per channel");
  if (base.size() != W.rows()) throw std::invalid_argument("base size must match W rows");
  ControlledPath cp;
  cp.driver = rp;
  cp.rows = static_cast<int>(W.rows());
  cp.cols = 1;
  std::vector<Eigen::MatrixXd> slices;
  for (int k = 0; k < rp->dim; ++k) slices.push_back(W.col(k));
  for (std::size_t i = 0; i < rp->nodes(); ++i) {
    cp.value.push_back(base + W * rp->x.row(i).transpose());
    cp.deriv.push_back(slices);
  }
  return cp;
}

Eigen::MatrixXd SmoothFunction::at_zero() const {
  if (kind == Kind::Affine || kind == Kind::Constant) return offset;
  return value(Eigen::VectorXd::Zero(dim_in));
}

void SmoothFunction::check() const {
  if (dim_in < 1 || rows < 1 || cols < 1)
    throw std::invalid_argument("coefficient dimensions must be positive");
  if (!value || !jacobian) throw std::invalid_argument("coefficient needs value and jacobian");
  if (kind == Kind::Affine) {
    if (linear.size() != static_cast<std::size_t>(dim_in))
      throw std::invalid_argument("affine coefficient needs one slice per state coordinate");
    for (const auto& s : linear)
      if (s.rows() != rows || s.cols() != cols)
        throw std::invalid_argument("affine slice shape mismatch");
  }
}

SmoothFunction constant_coefficient(const Eigen::MatrixXd& G0) {
  SmoothFunction g;
  g.kind = SmoothFunction::Kind::Constant;
  g.dim_in = static_cast<int>(G0.rows());
  g.rows = static_cast<int>(G0.rows());
  g.cols = static_cast<int>(G0.cols());
  g.offset = G0;
  g.sup_norm = G0.norm();
  g.lipschitz = 0.0;
  g.value = [G0](const Eigen::VectorXd&) { return G0; };
  const std::vector<Eigen::MatrixXd> zero_slices(
      static_cast<std::size_t>(G0.rows()), Eigen::MatrixXd::Zero(G0.rows(), G0.cols()));
  g.jacobian = [zero_slices](const Eigen::VectorXd&) { return zero_slices; };
  return g;
}

SmoothFunction affine_coefficient(const std::vector<Eigen::MatrixXd>& slices,
                                  const Eigen::MatrixXd& G0) {
  if (slices.empty()) throw std::invalid_argument("affine coefficient needs slices");
  SmoothFunction g;
  g.kind = SmoothFunction::Kind::Affine;
  g.dim_in = static_cast<int>(slices.size());
  g.rows = static_cast<int>(G0.rows());
  g.cols = static_cast<int>(G0.cols());
  g.linear = slices;
  g.offset = G0;
  g.sup_norm = std::numeric_limits<double>::infinity();
  // Lipschitz constant of y -> sum y_l C_l in Frobenius geometry.
  double sq = 0.0;
  for (const auto& s : slices) sq += s.squaredNorm();
  g.lipschitz = std::sqrt(sq);
  auto lin = slices;
  auto off = G0;
  g.value = [lin, off](const Eigen::VectorXd& y) {
    Eigen::MatrixXd v = off;
    for (std::size_t l = 0; l < lin.size(); ++l) v += y(static_cast<int>(l)) * lin[l];
    return v;
  };
  g.jacobian = [lin](const Eigen::VectorXd&) { return lin; };
  g.hessian = [lin, off](const Eigen::VectorXd&) {
    const std::size_t d = lin.size();
    return std::vector<std::vector<Eigen::MatrixXd>>(
        d, std::vector<Eigen::MatrixXd>(d, Eigen::MatrixXd::Zero(off.rows(), off.cols())));
  };
  g.check();
  return g;
}

SmoothFunction scalar_affine_coefficient(double c, double g0) {
  Eigen::MatrixXd slice(1, 1), off(1, 1);
  slice << c;
  off << g0;
  return affine_coefficient({slice}, off);
}

SmoothFunction sin_coefficient(double c, int d, int m) {
  if (c < 0.0) throw std::invalid_argument("sin coefficient scale must be nonnegative");
  SmoothFunction g;
  g.kind = SmoothFunction::Kind::C3Bounded;
  g.dim_in = d;
  g.rows = d;
  g.cols = m;
  g.sup_norm = c * std::sqrt(static_cast<double>(std::min(d, m)));
  g.lipschitz = c;
  g.value = [c, d, m](const Eigen::VectorXd& y) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d, m);
    for (int i = 0; i < std::min(d, m); ++i) v(i, i) = c * std::sin(y(i));
    return v;
  };
  g.jacobian = [c, d, m](const Eigen::VectorXd& y) {
    std::vector<Eigen::MatrixXd> slices(static_cast<std::size_t>(d),
                                        Eigen::MatrixXd::Zero(d, m));
    for (int i = 0; i < std::min(d, m); ++i) slices[static_cast<std::size_t>(i)](i, i) = c * std::cos(y(i));
    return slices;
  };
  g.hessian = [c, d, m](const Eigen::VectorXd& y) {
    std::vector<std::vector<Eigen::MatrixXd>> h(
        static_cast<std::size_t>(d),
        std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(d, m)));
    for (int i = 0; i < std::min(d, m); ++i) h[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)](i, i) = -c * std::sin(y(i));
    return h;
  };
  return g;
}

ControlledPath compose(const SmoothFunction& g, const ControlledPath& y) {
  if (y.cols != 1) throw std::invalid_argument("compose needs a vector-valued controlled path");
  if (g.dim_in != y.rows) throw std::invalid_argument("coefficient input dim mismatch");
  const int m = y.channels();
  ControlledPath out;
  out.driver = y.driver;
  out.rows = g.rows;
  out.cols = g.cols;
  out.value.reserve(y.nodes());
  out.deriv.reserve(y.nodes());
  for (std::size_t t = 0; t < y.nodes(); ++t) {
    const Eigen::VectorXd state = y.value[t].col(0);
    out.value.push_back(g.value(state));
    const auto jac = g.jacobian(state);
    std::vector<Eigen::MatrixXd> slices;
    slices.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(g.rows, g.cols);
      for (int l = 0; l < g.dim_in; ++l)
        s += jac[static_cast<std::size_t>(l)] * y.deriv[t][static_cast<std::size_t>(k)](l, 0);
      slices.push_back(std::move(s));
    }
    out.deriv.push_back(std::move(slices));
  }
  return out;
}

double sewing_constant(double p) {
  if (!(p > 2.0 && p < 3.0)) throw std::domain_error("sewing constant needs p in (2,3)");
  return 1.0 / (1.0 - std::pow(2.0, 1.0 - 3.0 / p));
}

namespace {

std::vector<std::size_t> default_partition(const RoughPath& rp, double a, double b) {
  const auto [i0, i1] = rp.grid.locate(a, b);
  std::vector<std::size_t> part;
  part.reserve(i1 - i0 + 1);
  for (std::size_t i = i0; i <= i1; ++i) part.push_back(i);
  return part;
}

// Germ over [u,v]: y_u x_{u,v} + sum_k slice_k(u) X_{u,v}.row(k)^T; the X
// contraction pairs slice channel k (differentiation direction) with the
// integrand row of X and the value column with the integrator index.
Eigen::VectorXd germ(const ControlledPath& y, std::size_t u, std::size_t v) {
  const auto& rp = *y.driver;
  const Eigen::VectorXd xinc = rp.first_increment(u, v);
  const Eigen::MatrixXd xx = rp.second_increment(u, v);
  Eigen::VectorXd out = y.value[u] * xinc;
  for (int k = 0; k < rp.dim; ++k)
    out += y.deriv[u][static_cast<std::size_t>(k)] * xx.row(k).transpose();
  return out;
}

}  // namespace

Eigen::VectorXd rough_integral(const ControlledPath& y, double a, double b,
                               const std::vector<std::size_t>* partition) {
  if (y.cols != y.channels())
    throw std::invalid_argument("integrand must map channels: cols must equal driver dim");
  std::vector<std::size_t> part;
  if (partition == nullptr) {
    part = default_partition(*y.driver, a, b);
  } else {
    part = *partition;
    if (part.size() < 2) throw std::invalid_argument("partition needs at least two nodes");
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(y.rows);
  for (std::size_t s = 0; s + 1 < part.size(); ++s) acc += germ(y, part[s], part[s + 1]);
  return acc;
}

ControlledPath indefinite_rough_integral(const ControlledPath& y, double a, double b) {
  if (y.cols != y.channels())
    throw std::invalid_argument("integrand must map channels: cols must equal driver dim");
  const auto part = default_partition(*y.driver, a, b);
  ControlledPath out;
  out.driver = y.driver;
  out.rows = y.rows;
  out.cols = 1;
  out.value.assign(y.nodes(), Eigen::MatrixXd::Zero(y.rows, 1));
  out.deriv.assign(y.nodes(), std::vector<Eigen::MatrixXd>(
                                  static_cast<std::size_t>(y.channels()),
                                  Eigen::MatrixXd::Zero(y.rows, 1)));
  // Nodes outside [a,b] carry the clamped boundary value; derivative is the
  // integrand itself (slice k = integrand column k).
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(y.rows);
  for (std::size_t idx = 0; idx < part.size(); ++idx) {
    const std::size_t node = part[idx];
    if (idx > 0) acc += germ(y, part[idx - 1], node);
    out.value[node] = acc;
    for (int k = 0; k < y.channels(); ++k)
      out.deriv[node][static_cast<std::size_t>(k)] = y.value[node].col(k);
  }
  for (std::size_t i = 0; i < part.front(); ++i) {
    out.value[i].setZero();
    for (int k = 0; k < y.channels(); ++k)
      out.deriv[i][static_cast<std::size_t>(k)] = y.value[i].col(k);
  }
  for (std::size_t i = part.back() + 1; i < y.nodes(); ++i) {
    out.value[i] = out.value[part.back()];
    for (int k = 0; k < y.channels(); ++k)
      out.deriv[i][static_cast<std::size_t>(k)] = y.value[i].col(k);
  }
  return out;
}

}  // namespace roughdyn
