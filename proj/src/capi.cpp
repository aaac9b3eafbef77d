#include "roughdyn.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "roughdyn/config.hpp"
#include "roughdyn/controlled.hpp"
#include "roughdyn/errors.hpp"
#include "roughdyn/fbm.hpp"
#include "roughdyn/rough_path.hpp"
#include "roughdyn/runner.hpp"
#include "roughdyn/serialize.hpp"
#include "roughdyn/variation.hpp"

using roughdyn::RoughPath;
using roughdyn::TimeGrid;

struct rd_grid {
  TimeGrid grid;
};
struct rd_rough_path {
  RoughPath rp;
};
struct rd_config {
  roughdyn::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

rd_status fail(rd_status s, const char* what) {
  g_last_error = what ? what : "";
  return s;
}

template <typename Fn>
rd_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RD_OK;
  } catch (const roughdyn::UnsupportedError& e) {
    return fail(RD_ERR_UNSUPPORTED, e.what());
  } catch (const roughdyn::SamplerError& e) {
    return fail(RD_ERR_SAMPLER, e.what());
  } catch (const roughdyn::DivergenceError& e) {
    return fail(RD_ERR_DIVERGENCE, e.what());
  } catch (const roughdyn::ConfigError& e) {
    return fail(RD_ERR_CONFIG, e.what());
  } catch (const roughdyn::IoError& e) {
    return fail(RD_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(RD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(RD_ERR_DOMAIN, e.what());
  } catch (const std::out_of_range& e) {
    return fail(RD_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::exception& e) {
    return fail(RD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RD_ERR_INTERNAL, "unknown failure");
  }
}

rd_status require(bool ok, const char* what) {
  return ok ? RD_OK : fail(RD_ERR_INVALID_ARGUMENT, what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* rd_status_name(rd_status s) {
  switch (s) {
    case RD_OK: return "ok";
    case RD_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case RD_ERR_DOMAIN: return "domain";
    case RD_ERR_OUT_OF_RANGE: return "out-of-range";
    case RD_ERR_UNSUPPORTED: return "unsupported";
    case RD_ERR_SAMPLER: return "sampler";
    case RD_ERR_DIVERGENCE: return "divergence";
    case RD_ERR_CONFIG: return "config";
    case RD_ERR_IO: return "io";
    case RD_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* rd_last_error(void) { return g_last_error.c_str(); }

const char* rd_version(void) { return "0.1.0"; }

rd_status rd_grid_uniform(double t0, double t1, int64_t n_steps, rd_grid** out) {
  if (rd_status s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] {
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    *out = new rd_grid{TimeGrid::uniform(t0, t1, static_cast<std::size_t>(n_steps))};
  });
}

rd_status rd_grid_from_points(const double* points, int64_t n_points, rd_grid** out) {
  if (rd_status s = require(out != nullptr && points != nullptr, "NULL argument"))
    return s;
  return guarded([&] {
    if (n_points < 2) throw std::invalid_argument("need at least two grid points");
    std::vector<double> pts(points, points + n_points);
    *out = new rd_grid{TimeGrid(std::move(pts))};
  });
}

int64_t rd_grid_nodes(const rd_grid* g) {
  return g ? static_cast<int64_t>(g->grid.size()) : 0;
}

rd_status rd_grid_point(const rd_grid* g, int64_t i, double* out) {
  if (rd_status s = require(g != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] {
    if (i < 0 || i >= static_cast<int64_t>(g->grid.size()))
      throw std::out_of_range("grid index out of range");
    *out = g->grid[static_cast<std::size_t>(i)];
  });
}

void rd_grid_free(rd_grid* g) { delete g; }

rd_status rd_fbm_sample(const rd_grid* g, int dim, double hurst, uint64_t seed,
                        double* out_values) {
  if (rd_status s = require(g != nullptr && out_values != nullptr, "NULL argument"))
    return s;
  return guarded([&] {
    roughdyn::FbmSpec spec;
    spec.hurst = hurst;
    spec.dim = dim;
    spec.seed = seed;
    spec.grid = g->grid;
    spec.lift_level = 0;
    spec.check();
    const Eigen::MatrixXd vals = roughdyn::sample_fbm(spec);
    for (Eigen::Index i = 0; i < vals.rows(); ++i)
      for (Eigen::Index j = 0; j < vals.cols(); ++j)
        out_values[i * vals.cols() + j] = vals(i, j);
  });
}

rd_status rd_fbm_rough(const rd_grid* g, int dim, double hurst, uint64_t seed,
                       int lift_level, double p, rd_rough_path** out) {
  if (rd_status s = require(g != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] {
    roughdyn::FbmSpec spec;
    spec.hurst = hurst;
    spec.dim = dim;
    spec.seed = seed;
    spec.grid = g->grid;
    spec.lift_level = lift_level;
    spec.check();
    *out = new rd_rough_path{roughdyn::sample_fbm_rough(spec, p)};
  });
}

rd_status rd_lift_linear(const rd_grid* g, int dim, const double* values, double p,
                         rd_rough_path** out) {
  if (rd_status s =
          require(g != nullptr && values != nullptr && out != nullptr, "NULL argument"))
    return s;
  return guarded([&] {
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    const Eigen::Index n = static_cast<Eigen::Index>(g->grid.size());
    Eigen::MatrixXd vals(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) vals(i, j) = values[i * dim + j];
    *out = new rd_rough_path{roughdyn::lift_piecewise_linear(g->grid, vals, p)};
  });
}

void rd_rough_path_free(rd_rough_path* rp) { delete rp; }

int rd_rough_path_dim(const rd_rough_path* rp) { return rp ? rp->rp.dim : 0; }

int64_t rd_rough_path_nodes(const rd_rough_path* rp) {
  return rp ? static_cast<int64_t>(rp->rp.nodes()) : 0;
}

double rd_rough_path_p(const rd_rough_path* rp) { return rp ? rp->rp.p : 0.0; }

rd_status rd_rough_path_increment(const rd_rough_path* rp, double s, double t,
                                  double* x_out, double* xx_out) {
  if (rd_status st = require(rp != nullptr, "NULL rough path")) return st;
  return guarded([&] {
    const auto [x, xx] = rp->rp.increment(s, t);
    if (x_out)
      for (Eigen::Index i = 0; i < x.size(); ++i) x_out[i] = x(i);
    if (xx_out)
      for (Eigen::Index i = 0; i < xx.rows(); ++i)
        for (Eigen::Index j = 0; j < xx.cols(); ++j) xx_out[i * xx.cols() + j] = xx(i, j);
  });
}

rd_status rd_rough_path_chen_defect(const rd_rough_path* rp, double s, double u, double t,
                                    double* xx_out) {
  if (rd_status st = require(rp != nullptr && xx_out != nullptr, "NULL argument"))
    return st;
  return guarded([&] {
    const Eigen::MatrixXd defect = roughdyn::chen_defect(rp->rp, s, u, t);
    for (Eigen::Index i = 0; i < defect.rows(); ++i)
      for (Eigen::Index j = 0; j < defect.cols(); ++j)
        xx_out[i * defect.cols() + j] = defect(i, j);
  });
}

rd_status rd_rough_path_shift(const rd_rough_path* rp, double h, rd_rough_path** out) {
  if (rd_status st = require(rp != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] { *out = new rd_rough_path{roughdyn::wiener_shift(rp->rp, h)}; });
}

rd_status rd_rough_path_save(const rd_rough_path* rp, const char* path, int hex_exact) {
  if (rd_status st = require(rp != nullptr && path != nullptr, "NULL argument")) return st;
  return guarded([&] { roughdyn::save_roughpath(rp->rp, path, hex_exact != 0); });
}

rd_status rd_rough_path_load(const char* path, rd_rough_path** out) {
  if (rd_status st = require(path != nullptr && out != nullptr, "NULL argument"))
    return st;
  return guarded([&] { *out = new rd_rough_path{roughdyn::load_roughpath(path)}; });
}

rd_status rd_pvar_first(const rd_rough_path* rp, double p, double a, double b,
                        double* out) {
  if (rd_status st = require(rp != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] { *out = roughdyn::p_variation(rp->rp, p, a, b).value; });
}

rd_status rd_qvar_second(const rd_rough_path* rp, double q, double a, double b,
                         double* out) {
  if (rd_status st = require(rp != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] {
    *out = roughdyn::q_variation_second_level(rp->rp, q, a, b).value;
  });
}

rd_status rd_rough_pvar(const rd_rough_path* rp, double p, double a, double b,
                        double* out) {
  if (rd_status st = require(rp != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] { *out = roughdyn::rough_pvar_norm(rp->rp, p, a, b).value; });
}

rd_status rd_holder_norm(const rd_rough_path* rp, double alpha, double a, double b,
                         double* out) {
  if (rd_status st = require(rp != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] { *out = roughdyn::holder_norm(rp->rp, alpha, a, b); });
}

rd_status rd_greedy_times(const rd_rough_path* rp, double gamma, double p, double a,
                          double b, int64_t* count, double* count_bound, double* times_out,
                          int64_t times_cap, int64_t* times_len) {
  if (rd_status st = require(rp != nullptr, "NULL rough path")) return st;
  return guarded([&] {
    const roughdyn::GreedyPartition part = roughdyn::greedy_times(rp->rp, gamma, p, a, b);
    if (count) *count = part.count;
    if (count_bound) *count_bound = part.count_bound;
    int64_t written = 0;
    if (times_out) {
      for (const double t : part.times) {
        if (written >= times_cap) break;
        times_out[written++] = t;
      }
    }
    if (times_len) *times_len = times_out ? written
                                          : static_cast<int64_t>(part.times.size());
  });
}

double rd_sewing_constant(double p) {
  double out = std::nan("");
  guarded([&] { out = roughdyn::sewing_constant(p); });
  return out;
}

double rd_default_gamma(double c_p, double c_g) {
  return roughdyn::default_gamma(c_p, c_g);
}

rd_status rd_config_parse_file(const char* path, rd_config** out) {
  if (rd_status st = require(path != nullptr && out != nullptr, "NULL argument"))
    return st;
  return guarded([&] {
    *out = new rd_config{roughdyn::ExperimentConfig::parse_file(path)};
  });
}

rd_status rd_config_parse_text(const char* text, rd_config** out) {
  if (rd_status st = require(text != nullptr && out != nullptr, "NULL argument"))
    return st;
  return guarded([&] {
    *out = new rd_config{roughdyn::ExperimentConfig::parse_text(text)};
  });
}

rd_status rd_config_set(rd_config* cfg, const char* key, const char* value) {
  if (rd_status st =
          require(cfg != nullptr && key != nullptr && value != nullptr, "NULL argument"))
    return st;
  return guarded([&] { cfg->cfg.set(key, value); });
}

void rd_config_free(rd_config* cfg) { delete cfg; }

rd_status rd_validate(const rd_config* cfg, char** report_json) {
  if (rd_status st = require(cfg != nullptr && report_json != nullptr, "NULL argument"))
    return st;
  return guarded([&] {
    *report_json = dup_string(roughdyn::validate_report_json(cfg->cfg));
  });
}

rd_status rd_run(const rd_config* cfg, const char* out_dir, int force, int no_timestamp,
                 char** report_json) {
  if (rd_status st = require(cfg != nullptr && out_dir != nullptr, "NULL argument"))
    return st;
  return guarded([&] {
    const roughdyn::RunResult res =
        roughdyn::run_experiment(cfg->cfg, out_dir, force != 0, no_timestamp != 0);
    if (report_json) *report_json = dup_string(res.report_json);
  });
}

void rd_string_free(char* s) { delete[] s; }

} /* extern "C" */
