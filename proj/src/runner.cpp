#include "roughdyn/runner.hpp"

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>

#include "json.hpp"
#include "roughdyn/errors.hpp"
#include "roughdyn/fbm.hpp"
#include "roughdyn/serialize.hpp"
#include "roughdyn/variation.hpp"

namespace roughdyn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

TimeGrid window_grid(double a, double b, int steps_per_unit) {
  const auto steps =
      std::max<std::int64_t>(2, std::llround((b - a) * steps_per_unit));
  return TimeGrid::uniform(a, b, static_cast<std::size_t>(steps));
}

RoughPath draw_noise(const NoiseFamily& noise, int dim, std::uint64_t seed, double a,
                     double b) {
  FbmSpec spec;
  spec.hurst = noise.hurst;
  spec.dim = dim;
  spec.seed = seed;
  spec.grid = window_grid(a, b, noise.steps_per_unit);
  spec.lift_level = noise.lift_level;
  return sample_fbm_rough(spec, noise.p);
}

json finite_or_sentinel(double v) {
  if (std::isfinite(v)) return json(v);
  if (std::isnan(v)) return json("nan");
  return json(v > 0 ? "inf" : "-inf");
}

// Collects written artifacts; the report embeds relative names only so two
// runs into different directories stay byte-identical.
struct Sink {
  fs::path dir;
  std::vector<std::string> names;
  std::vector<std::string> paths;

  void write(const std::string& name, const std::string& content) {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    out << content;
    if (!out) throw IoError("short write on " + p.string());
    names.push_back(name);
    paths.push_back(p.string());
  }

  void csv(const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) {
    write(name, csv_body(header, rows));
  }
};

std::string seed_tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

json norm_json(const NormReport& r) { return json::parse(normreport_to_json(r)); }

StabilityParams assemble_params(const RdeProblem& prob, double p,
                                const GammaEstimate& gamma) {
  const SemigroupConstants sg = semigroup_constants(prob.A);
  StabilityParams sp;
  sp.c_a = sg.c_a;
  sp.lambda_a = sg.lambda_a;
  sp.a_norm = prob.a_norm();
  sp.c_f = prob.f.lipschitz;
  sp.c_g = prob.g.lipschitz;
  sp.p = p;
  sp.c_p = sewing_constant(p);
  sp.gamma_p = gamma.value;
  sp.gamma_se = gamma.se;
  return sp;
}

json criterion_json(const CriterionResult& c) {
  return json{{"kind", c.kind},         {"satisfied", c.satisfied},
              {"margin", c.margin},     {"lhs", c.lhs},
              {"rhs", c.rhs},           {"u", c.u}};
}

void run_sample(const ExperimentConfig& cfg, Sink& sink, json& results,
                std::vector<std::string>& stages) {
  const NoiseFamily noise = cfg.build_noise();
  const int dim = static_cast<int>(cfg.get_int("noise.dim", 1));
  const double t0 = cfg.get_double("noise.t0", 0.0);
  const double t1 = cfg.get_double("noise.t1", 1.0);
  const bool hex = cfg.get_int("output.hex", 1) != 0;
  json per_seed = json::array();
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header = {"seed", "t"};
  for (int c = 0; c < dim; ++c) header.push_back("x" + std::to_string(c));
  for (const auto seed : cfg.seeds()) {
    stages.push_back("sample " + seed_tag(seed));
    const RoughPath rp = draw_noise(noise, dim, seed, t0, t1);
    sink.write("path_" + seed_tag(seed) + ".json", roughpath_to_json(rp, hex));
    for (std::size_t i = 0; i < rp.nodes(); ++i) {
      std::vector<double> row = {static_cast<double>(seed), rp.grid[i]};
      for (int c = 0; c < dim; ++c) row.push_back(rp.x(static_cast<Eigen::Index>(i), c));
      rows.push_back(std::move(row));
    }
    per_seed.push_back(json{{"seed", seed},
                            {"nodes", rp.nodes()},
                            {"dim", rp.dim},
                            {"sup_increment", rp.x.rowwise().norm().maxCoeff()}});
  }
  sink.csv("samples.csv", header, rows);
  results["per_seed"] = per_seed;
}

void run_lift(const ExperimentConfig& cfg, Sink& sink, json& results,
              std::vector<std::string>& stages) {
  const NoiseFamily noise = cfg.build_noise();
  const int dim = static_cast<int>(cfg.get_int("noise.dim", 1));
  const double t0 = cfg.get_double("noise.t0", 0.0);
  const double t1 = cfg.get_double("noise.t1", 1.0);
  const bool hex = cfg.get_int("output.hex", 1) != 0;
  std::vector<std::vector<double>> rows;
  for (const auto seed : cfg.seeds()) {
    stages.push_back("lift " + seed_tag(seed));
    const RoughPath rp = draw_noise(noise, dim, seed, t0, t1);
    sink.write("path_" + seed_tag(seed) + ".json", roughpath_to_json(rp, hex));
    double worst = 0.0;
    const std::size_t n = rp.nodes();
    const std::size_t stride = std::max<std::size_t>(1, n / 12);
    for (std::size_t i = 0; i + 2 < n; i += stride)
      for (std::size_t u = i + 1; u + 1 < n; u += stride)
        for (std::size_t j = u + 1; j < n; j += stride)
          worst = std::max(worst,
                           chen_defect(rp, rp.grid[i], rp.grid[u], rp.grid[j]).norm());
    rows.push_back({static_cast<double>(seed), static_cast<double>(n), worst});
  }
  sink.csv("lift.csv", {"seed", "nodes", "max_chen_defect"}, rows);
  results["paths"] = rows.size();
}

void run_norms(const ExperimentConfig& cfg, Sink& sink, json& results,
               std::vector<std::string>& stages) {
  const NoiseFamily noise = cfg.build_noise();
  const int dim = static_cast<int>(cfg.get_int("noise.dim", 1));
  const double a = cfg.get_double("interval.a", cfg.get_double("noise.t0", 0.0));
  const double b = cfg.get_double("interval.b", cfg.get_double("noise.t1", 1.0));
  std::vector<std::vector<double>> rows;
  for (const auto seed : cfg.seeds()) {
    stages.push_back("norms " + seed_tag(seed));
    const RoughPath rp = draw_noise(noise, dim, seed, a, b);
    const NormReport first = p_variation(rp, noise.p, a, b);
    const NormReport second = q_variation_second_level(rp, noise.p / 2.0, a, b);
    const NormReport rough = rough_pvar_norm(rp, noise.p, a, b);
    const double holder = holder_norm(rp, 1.0 / noise.p, a, b);
    json doc = json::array({norm_json(first), norm_json(second), norm_json(rough)});
    sink.write("norms_" + seed_tag(seed) + ".json", doc.dump(2) + "\n");
    rows.push_back({static_cast<double>(seed), noise.p, first.value, second.value,
                    rough.value, holder});
  }
  sink.csv("norms.csv", {"seed", "p", "first_pvar", "second_qvar", "rough", "holder"},
           rows);
  results["paths"] = rows.size();
}

void run_greedy(const ExperimentConfig& cfg, Sink& sink, json& results,
                std::vector<std::string>& stages) {
  const NoiseFamily noise = cfg.build_noise();
  const int dim = static_cast<int>(cfg.get_int("noise.dim", 1));
  const double a = cfg.get_double("interval.a", cfg.get_double("noise.t0", 0.0));
  const double b = cfg.get_double("interval.b", cfg.get_double("noise.t1", 1.0));
  const double c_p = sewing_constant(noise.p);
  double gamma;
  if (cfg.has("tol.gamma")) {
    gamma = cfg.tolerance("gamma", 0.0);
  } else if (cfg.has("problem.dim")) {
    gamma = default_gamma(c_p, cfg.build_problem().g.lipschitz);
  } else {
    gamma = default_gamma(c_p, 1.0);  // unit coefficient scale by convention
  }
  std::vector<std::vector<double>> rows;
  for (const auto seed : cfg.seeds()) {
    stages.push_back("greedy " + seed_tag(seed));
    const RoughPath rp = draw_noise(noise, dim, seed, a, b);
    const GreedyPartition part = greedy_times(rp, gamma, noise.p, a, b);
    sink.write("greedy_" + seed_tag(seed) + ".json", greedy_to_json(part));
    rows.push_back({static_cast<double>(seed), part.gamma,
                    static_cast<double>(part.count), part.count_bound});
  }
  sink.csv("greedy.csv", {"seed", "gamma", "count", "count_bound"}, rows);
  results["gamma"] = finite_or_sentinel(gamma);
}

void run_solve(const ExperimentConfig& cfg, Sink& sink, json& results,
               std::vector<std::string>& stages) {
  const NoiseFamily noise = cfg.build_noise();
  const RdeProblem prob = cfg.build_problem();
  const double a = cfg.get_double("interval.a", cfg.get_double("noise.t0", 0.0));
  const double b = cfg.get_double("interval.b", cfg.get_double("noise.t1", 1.0));
  const auto y0_vals = cfg.get_doubles("solve.y0");
  if (static_cast<int>(y0_vals.size()) != prob.d())
    throw ConfigError("solve.y0 needs problem.dim entries");
  Eigen::VectorXd y0(prob.d());
  for (int i = 0; i < prob.d(); ++i) y0(i) = y0_vals[static_cast<std::size_t>(i)];

  json per_seed = json::array();
  std::vector<std::vector<double>> window_rows;
  for (const auto seed : cfg.seeds()) {
    stages.push_back("solve " + seed_tag(seed));
    const RoughPath rp = draw_noise(noise, prob.m(), seed, a, b);
    const Solution sol = solve(prob, rp, y0, a, b);

    std::vector<std::string> header = {"t"};
    for (int i = 0; i < prob.d(); ++i) header.push_back("y" + std::to_string(i));
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < sol.grid.size(); ++k) {
      std::vector<double> row = {sol.grid[k]};
      for (int i = 0; i < prob.d(); ++i)
        row.push_back(sol.y(static_cast<Eigen::Index>(k), i));
      rows.push_back(std::move(row));
    }
    sink.csv("trajectory_" + seed_tag(seed) + ".csv", header, rows);

    for (const auto& rec : sol.unit_norms)
      window_rows.push_back({static_cast<double>(seed), rec.a, rec.b, rec.pvar_y,
                             rec.qvar_remainder, rec.combined, rec.rough_driver,
                             rec.greedy_count});

    const AprioriBounds bounds = apriori_bounds(prob, rp, y0, a, b);
    json entry{{"seed", seed},
               {"final_norm", sol.y.row(sol.y.rows() - 1).norm()},
               {"warnings", sol.warnings},
               {"sup_ok", bounds.sup_ok},
               {"pvar_ok", bounds.pvar_ok},
               {"affine_ok", bounds.affine_ok},
               {"sup_lhs", bounds.sup_lhs},
               {"sup_rhs", bounds.sup_rhs},
               {"pvar_lhs", bounds.pvar_lhs},
               {"pvar_rhs", bounds.pvar_rhs},
               {"greedy_count", bounds.greedy_count}};
    per_seed.push_back(std::move(entry));
  }
  sink.csv("windows.csv",
           {"seed", "a", "b", "pvar_y", "qvar_remainder", "combined", "rough_driver",
            "greedy_count"},
           window_rows);
  results["per_seed"] = per_seed;
  results["scheme"] = "drift-euler+level-2";
}

void run_criterion(const ExperimentConfig& cfg, Sink& sink, json& results,
                   std::vector<std::string>& stages) {
  const NoiseFamily noise = cfg.build_noise();
  const RdeProblem prob = cfg.build_problem();
  const auto seeds = cfg.seeds();
  const int samples = static_cast<int>(cfg.get_int("experiment.gamma_samples", 200));
  const std::uint64_t gamma_seed = static_cast<std::uint64_t>(
      cfg.get_int("experiment.gamma_seed", static_cast<std::int64_t>(seeds[0])));
  stages.push_back("gamma-estimate");
  const GammaEstimate gamma =
      gamma_estimate(noise.hurst, prob.m(), noise.p, samples, gamma_seed,
                     noise.steps_per_unit, noise.lift_level);
  const StabilityParams sp = assemble_params(prob, noise.p, gamma);

  stages.push_back("criteria");
  std::vector<CriterionResult> checks = {criterion_check(sp, "half"),
                                         criterion_check(sp, "general")};
  if (prob.g.kind == SmoothFunction::Kind::Affine ||
      prob.g.kind == SmoothFunction::Kind::Constant)
    checks.push_back(criterion_check(sp, "linear-g"));

  std::vector<std::vector<double>> rows;
  json doc = json::array();
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    rows.push_back({static_cast<double>(i), c.lhs, c.rhs, c.u, c.margin,
                    c.satisfied ? 1.0 : 0.0});
    doc.push_back(criterion_json(c));
  }
  sink.csv("criterion.csv", {"kind_index", "lhs", "rhs", "u", "margin", "satisfied"},
           rows);
  results["checks"] = doc;
  results["gamma"] = json{{"value", gamma.value},
                          {"se", gamma.se},
                          {"samples", gamma.samples},
                          {"p", gamma.p}};
  results["params"] = json{{"c_a", sp.c_a},     {"lambda_a", sp.lambda_a},
                           {"a_norm", sp.a_norm}, {"c_f", sp.c_f},
                           {"c_g", sp.c_g},     {"c_p", sp.c_p},
                           {"lambda", sp.lambda()}};
}

void run_pullback(const ExperimentConfig& cfg, Sink& sink, json& results,
                  std::vector<std::string>& stages) {
  const NoiseFamily noise = cfg.build_noise();
  const RdeProblem prob = cfg.build_problem();
  const auto horizons = cfg.get_doubles("experiment.horizons");
  const double radius = cfg.get_double("experiment.ball_radius", 1.0);
  const int ensemble = static_cast<int>(cfg.get_int("experiment.ensemble", 8));
  const int samples = static_cast<int>(cfg.get_int("experiment.gamma_samples", 200));
  const std::uint64_t gamma_seed =
      static_cast<std::uint64_t>(cfg.get_int("experiment.gamma_seed", 9001));
  stages.push_back("pullback");
  const PullbackReport rep =
      pullback_experiment(prob, noise, horizons, radius, ensemble, cfg.seeds(),
                          std::nullopt, samples, gamma_seed);

  std::vector<std::vector<double>> rows;
  json per_seed = json::array();
  for (const auto& s : rep.per_seed) {
    for (std::size_t h = 0; h < rep.horizons.size(); ++h)
      rows.push_back({static_cast<double>(s.seed), rep.horizons[h], s.diameters[h]});
    per_seed.push_back(json{{"seed", s.seed},
                            {"rate", s.rate},
                            {"terminal_diameter", s.terminal_diameter},
                            {"max_terminal_norm", s.max_terminal_norm},
                            {"b_hat", s.b_hat},
                            {"tempered_slope", s.tempered_slope}});
  }
  sink.csv("pullback.csv", {"seed", "horizon", "diameter"}, rows);
  results["per_seed"] = per_seed;
  results["criterion_half"] = criterion_json(rep.criterion_half);
  results["criterion_general"] = criterion_json(rep.criterion_general);
  results["rate_bound"] = rep.rate_bound;
  results["gamma"] = json{{"value", rep.gamma.value}, {"se", rep.gamma.se}};
  results["ensemble"] = rep.ensemble;
  results["ball_radius"] = rep.ball_radius;
}

void run_forward(const ExperimentConfig& cfg, Sink& sink, json& results,
                 std::vector<std::string>& stages) {
  const NoiseFamily noise = cfg.build_noise();
  const RdeProblem prob = cfg.build_problem();
  const double horizon = cfg.require_double("experiment.horizon");
  const auto plus_vals = cfg.get_doubles("experiment.z0_plus");
  if (static_cast<int>(plus_vals.size()) != prob.d())
    throw ConfigError("experiment.z0_plus needs problem.dim entries");
  Eigen::VectorXd z0_plus(prob.d());
  for (int i = 0; i < prob.d(); ++i) z0_plus(i) = plus_vals[static_cast<std::size_t>(i)];
  Eigen::VectorXd z0_minus = Eigen::VectorXd::Zero(prob.d());
  const auto minus_vals = cfg.get_doubles("experiment.z0_minus");
  if (static_cast<int>(minus_vals.size()) == prob.d())
    for (int i = 0; i < prob.d(); ++i)
      z0_minus(i) = minus_vals[static_cast<std::size_t>(i)];
  else if (!minus_vals.empty())
    throw ConfigError("experiment.z0_minus needs problem.dim entries");

  stages.push_back("forward");
  const ForwardReport rep =
      forward_experiment(prob, noise, horizon, z0_plus, z0_minus, cfg.seeds());
  std::vector<std::vector<double>> rows;
  bool all_dominated = true;
  json per_seed = json::array();
  for (const auto& s : rep.per_seed) {
    for (std::size_t n = 0; n < s.z_norms.size(); ++n)
      rows.push_back({static_cast<double>(s.seed), static_cast<double>(n), s.z_norms[n],
                      s.lhs[n], s.bound_rhs[n], s.dominated ? 1.0 : 0.0});
    all_dominated = all_dominated && s.dominated;
    per_seed.push_back(json{{"seed", s.seed}, {"dominated", s.dominated}});
  }
  sink.csv("forward.csv", {"seed", "n", "z_norm", "lhs", "rhs", "dominated"}, rows);
  results["per_seed"] = per_seed;
  results["all_dominated"] = all_dominated;
  results["horizon"] = rep.horizon;
}

void run_drift(const ExperimentConfig& cfg, Sink& sink, json& results,
               std::vector<std::string>& stages) {
  const NoiseFamily noise = cfg.build_noise();
  const RdeProblem prob = cfg.build_problem();
  const auto scales = cfg.get_doubles("experiment.scales");
  const double horizon = cfg.get_double("experiment.horizon", 20.0);
  const double radius = cfg.get_double("experiment.ball_radius", 1.0);
  const int ensemble = static_cast<int>(cfg.get_int("experiment.ensemble", 8));
  const double solver_tol = cfg.tolerance("solver", 1e-6);

  stages.push_back("drift-sweep");
  const DriftReport rep = equilibrium_drift(prob, noise, scales, horizon, radius,
                                            ensemble, cfg.seeds(), solver_tol);
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<double>> summary;
  const auto seeds = cfg.seeds();
  for (const auto& row : rep.rows) {
    for (std::size_t s = 0; s < row.distances.size(); ++s)
      rows.push_back({row.g_scale, static_cast<double>(seeds[s]), row.distances[s],
                      row.contracted ? 1.0 : 0.0});
    summary.push_back({row.g_scale, row.mean_distance, row.contracted ? 1.0 : 0.0});
  }
  sink.csv("drift.csv", {"scale", "seed", "distance", "contracted"}, rows);
  sink.csv("drift_summary.csv", {"scale", "mean_distance", "contracted"}, summary);
  json mu = json::array();
  for (int i = 0; i < rep.mu_star.size(); ++i) mu.push_back(rep.mu_star(i));
  results["mu_star"] = mu;
  results["horizon"] = rep.horizon;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                         bool force, bool no_timestamp) {
  const ValidationReport vr = validate_config(cfg);
  if (!vr.ok()) {
    std::string msg = "config invalid:";
    for (const auto& e : vr.errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }

  Sink sink;
  sink.dir = fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(sink.dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir);
  if (fs::exists(sink.dir / "report.json") && !force)
    throw IoError("output directory already holds report.json (use force to overwrite)");

  RunResult result;
  result.stages.push_back("validate");
  const std::string mode = cfg.mode();
  json results = json::object();
  if (mode == "sample")
    run_sample(cfg, sink, results, result.stages);
  else if (mode == "lift")
    run_lift(cfg, sink, results, result.stages);
  else if (mode == "norms")
    run_norms(cfg, sink, results, result.stages);
  else if (mode == "greedy")
    run_greedy(cfg, sink, results, result.stages);
  else if (mode == "solve")
    run_solve(cfg, sink, results, result.stages);
  else if (mode == "criterion")
    run_criterion(cfg, sink, results, result.stages);
  else if (mode == "pullback")
    run_pullback(cfg, sink, results, result.stages);
  else if (mode == "forward")
    run_forward(cfg, sink, results, result.stages);
  else if (mode == "drift")
    run_drift(cfg, sink, results, result.stages);
  else
    throw ConfigError("run.mode '" + mode + "' is not a known mode");

  json report;
  report["kind"] = "experiment-report";
  report["version"] = 1;
  report["mode"] = mode;
  report["digest"] = cfg.digest();
  json config = json::object();
  for (const auto& [k, v] : cfg.entries()) config[k] = v;
  report["config"] = config;
  if (!vr.warnings.empty()) report["warnings"] = vr.warnings;
  if (!no_timestamp) {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    report["generated_at"] = buf;
  }
  report["results"] = results;
  report["files"] = sink.names;

  result.report_json = report.dump(2) + "\n";
  sink.write("report.json", result.report_json);
  result.files = sink.paths;
  result.stages.push_back("report");
  return result;
}

std::string validate_report_json(const ExperimentConfig& cfg) {
  const ValidationReport vr = validate_config(cfg);
  json derived = json::object();
  for (const auto& [k, v] : vr.derived) derived[k] = finite_or_sentinel(v);
  json doc{{"kind", "validation-report"},
           {"ok", vr.ok()},
           {"errors", vr.errors},
           {"warnings", vr.warnings},
           {"derived", derived},
           {"digest", cfg.digest()}};
  return doc.dump(2) + "\n";
}

}  // namespace roughdyn
