#include "roughdyn/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "roughdyn/errors.hpp"
#include "roughdyn/rng.hpp"

namespace roughdyn {
namespace {

// FFTW planning mutates global tables; execution is thread-safe.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(in.size());
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(n, src, dst, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

// Stationary increment covariance at lag k for step dt:
//   dt^{2H} / 2 * (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
double fgn_autocov(std::int64_t k, double dt, double hurst) {
  const double tw = 2.0 * hurst;
  const double kk = static_cast<double>(k < 0 ? -k : k);
  return 0.5 * std::pow(dt, tw) *
         (std::pow(kk + 1.0, tw) - 2.0 * std::pow(kk, tw) + std::pow(std::abs(kk - 1.0), tw));
}

// Exact draw of n stationary increments by circulant embedding of the
// autocovariance (eigenvalues via FFT; nonnegative for this covariance).
std::vector<double> circulant_increments(std::int64_t n, double dt, double hurst,
                                         const NormalStream& z) {
  const std::int64_t two_n = 2 * n;
  std::vector<std::complex<double>> row(static_cast<std::size_t>(two_n));
  for (std::int64_t k = 0; k <= n; ++k) row[static_cast<std::size_t>(k)] = fgn_autocov(k, dt, hurst);
  for (std::int64_t k = 1; k < n; ++k)
    row[static_cast<std::size_t>(two_n - k)] = row[static_cast<std::size_t>(k)];

  const auto eig = dft(row);
  double max_eig = 0.0;
  for (const auto& e : eig) max_eig = std::max(max_eig, e.real());
  std::vector<double> lam(static_cast<std::size_t>(two_n));
  for (std::int64_t k = 0; k < two_n; ++k) {
    const double v = eig[static_cast<std::size_t>(k)].real();
    if (v < -1e-9 * std::max(1.0, max_eig))
      throw SamplerError(
          "circulant embedding is not PSD; fall back to a non-uniform grid (dense "
          "Cholesky, <= 2048 steps)");
    lam[static_cast<std::size_t>(k)] = std::max(v, 0.0);
  }

  std::vector<std::complex<double>> w(static_cast<std::size_t>(two_n));
  const double n2 = static_cast<double>(two_n);
  w[0] = std::sqrt(lam[0] / n2) * z(0);
  w[static_cast<std::size_t>(n)] = std::sqrt(lam[static_cast<std::size_t>(n)] / n2) * z(1);
  for (std::int64_t k = 1; k < n; ++k) {
    const double scale = std::sqrt(lam[static_cast<std::size_t>(k)] / (2.0 * n2));
    const double a = z(static_cast<std::uint64_t>(2 * k));
    const double b = z(static_cast<std::uint64_t>(2 * k + 1));
    w[static_cast<std::size_t>(k)] = std::complex<double>(scale * a, scale * b);
    w[static_cast<std::size_t>(two_n - k)] = std::complex<double>(scale * a, -scale * b);
  }

  const auto out = dft(w);
  std::vector<double> inc(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) inc[static_cast<std::size_t>(j)] = out[static_cast<std::size_t>(j)].real();
  return inc;
}

// Dense exact draw of node values (relative to the first node) through the
// path covariance 0.5 (|s|^{2H} + |t|^{2H} - |t-s|^{2H}) in shifted time.
std::vector<double> cholesky_values(const TimeGrid& grid, double hurst, const NormalStream& z) {
  const std::int64_t n = grid.steps();
  if (n > 2048)
    throw SamplerError("dense fBm fallback is capped at 2048 steps; use a uniform grid");
  const double tw = 2.0 * hurst;
  Eigen::MatrixXd cov(n, n);
  const double t0 = grid.front();
  for (std::int64_t i = 0; i < n; ++i) {
    const double si = grid[static_cast<std::size_t>(i + 1)] - t0;
    for (std::int64_t j = 0; j <= i; ++j) {
      const double sj = grid[static_cast<std::size_t>(j + 1)] - t0;
      const double v = 0.5 * (std::pow(si, tw) + std::pow(sj, tw) - std::pow(std::abs(si - sj), tw));
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw SamplerError("fBm path covariance failed Cholesky factorization");
  Eigen::VectorXd xi(n);
  for (std::int64_t i = 0; i < n; ++i) xi(i) = z(static_cast<std::uint64_t>(i));
  Eigen::VectorXd vals = llt.matrixL() * xi;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = vals(i);
  return out;
}

TimeGrid refine_dyadic(const TimeGrid& grid, int level) {
  if (level == 0) return grid;
  const std::int64_t factor = std::int64_t{1} << level;
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(grid.steps() * factor) + 1);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double u = grid[j], v = grid[j + 1];
    for (std::int64_t k = 0; k < factor; ++k)
      pts.push_back(u + (v - u) * (static_cast<double>(k) / static_cast<double>(factor)));
  }
  pts.push_back(grid.back());
  return TimeGrid(std::move(pts));
}

}  // namespace

void FbmSpec::check() const {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::invalid_argument("hurst must lie in (0,1)");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (lift_level < 0 || lift_level > 12)
    throw std::invalid_argument("lift_level must lie in [0,12]");
  if (grid.size() < 2) throw std::invalid_argument("grid must have at least 2 nodes");
}

Eigen::MatrixXd sample_fbm(const FbmSpec& spec) {
  spec.check();
  const std::int64_t n = spec.grid.steps();
  Eigen::MatrixXd values(spec.grid.size(), spec.dim);
  values.row(0).setZero();
  for (int c = 0; c < spec.dim; ++c) {
    const NormalStream z(spec.seed, static_cast<std::uint64_t>(c));
    if (spec.grid.is_uniform()) {
      const auto inc = circulant_increments(n, spec.grid.dt(), spec.hurst, z);
      double acc = 0.0;
      for (std::int64_t j = 0; j < n; ++j) {
        acc += inc[static_cast<std::size_t>(j)];
        values(j + 1, c) = acc;
      }
    } else {
      const auto vals = cholesky_values(spec.grid, spec.hurst, z);
      for (std::int64_t j = 0; j < n; ++j) values(j + 1, c) = vals[static_cast<std::size_t>(j)];
    }
  }
  return values;
}

RoughPath sample_fbm_rough(const FbmSpec& spec, double p) {
  spec.check();
  const TimeGrid fine = refine_dyadic(spec.grid, spec.lift_level);
  FbmSpec fine_spec = spec;
  fine_spec.grid = fine;
  const Eigen::MatrixXd samples = sample_fbm(fine_spec);
  RoughPath lifted = lift_piecewise_linear(fine, samples, p);
  const std::int64_t stride = std::int64_t{1} << spec.lift_level;
  std::vector<std::size_t> keep;
  keep.reserve(spec.grid.size());
  for (std::size_t j = 0; j < fine.size(); j += static_cast<std::size_t>(stride)) keep.push_back(j);
  RoughPath rp = restrict_to_nodes(lifted, keep);
  rp.grid = spec.grid;  // identical times up to final-ulp construction noise
  rp.hurst = spec.hurst;
  rp.seed = spec.seed;
  rp.lift_level = spec.lift_level;
  return rp;
}

}  // namespace roughdyn
