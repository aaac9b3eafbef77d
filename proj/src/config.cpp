#include "roughdyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "roughdyn/controlled.hpp"
#include "roughdyn/errors.hpp"
#include "roughdyn/rng.hpp"
#include "roughdyn/serialize.hpp"
#include "roughdyn/stability.hpp"
#include "roughdyn/variation.hpp"

namespace roughdyn {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

const std::vector<std::string> kKnownKeys = {
    "run.mode",
    "run.seeds",
    "run.p",
    "noise.hurst",
    "noise.steps_per_unit",
    "noise.lift_level",
    "noise.dim",
    "noise.t0",
    "noise.t1",
    "problem.dim",
    "problem.a",
    "problem.drift",
    "problem.drift.scale",
    "problem.drift.offset",
    "problem.drift.matrix",
    "problem.diffusion",
    "problem.diffusion.m",
    "problem.diffusion.c",
    "problem.diffusion.offset",
    "problem.diffusion.slices",
    "experiment.horizons",
    "experiment.horizon",
    "experiment.ball_radius",
    "experiment.ensemble",
    "experiment.scales",
    "experiment.z0_plus",
    "experiment.z0_minus",
    "experiment.gamma_samples",
    "experiment.gamma_seed",
    "experiment.eps_sweep",
    "interval.a",
    "interval.b",
    "solve.y0",
    "output.hex",
};

bool key_is_known(const std::string& key) {
  if (key.rfind("tol.", 0) == 0 && key.size() > 4) return true;
  return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end();
}

std::string vocabulary() {
  std::string out;
  for (const auto& k : kKnownKeys) {
    if (!out.empty()) out += ", ";
    out += k;
  }
  out += ", tol.*";
  return out;
}

std::string scalar_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten_json(const nlohmann::json& node, const std::string& prefix,
                  std::map<std::string, std::string>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      flatten_json(it.value(), key, out);
    }
    return;
  }
  if (node.is_array()) {
    std::string joined;
    for (const auto& v : node) {
      if (!joined.empty()) joined += ",";
      if (v.is_object() || v.is_array())
        throw ConfigError("config arrays must hold scalars: " + prefix);
      joined += scalar_to_string(v);
    }
    out[prefix] = joined;
    return;
  }
  out[prefix] = scalar_to_string(node);
}

double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || trim(end).size() > 0)
    throw ConfigError("key " + key + " is not a number: '" + text + "'");
  return v;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  ExperimentConfig cfg;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    std::map<std::string, std::string> flat;
    flatten_json(doc, "", flat);
    for (const auto& [k, v] : flat) cfg.set(k, v);
    return cfg;
  }
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + " is not key=value: '" + line + "'");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

const std::vector<std::string>& ExperimentConfig::known_keys() { return kKnownKeys; }

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!key_is_known(key))
    throw ConfigError("unknown config key '" + key + "'; valid keys: " + vocabulary());
  kv_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::string ExperimentConfig::require_string(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing required config key: " + key);
  return it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : parse_double(key, it->second);
}

double ExperimentConfig::require_double(const std::string& key) const {
  return parse_double(key, require_string(key));
}

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  char* end = nullptr;
  const long long v = std::strtoll(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || trim(end).size() > 0)
    throw ConfigError("key " + key + " is not an integer: '" + it->second + "'");
  return v;
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return {};
  std::vector<double> out;
  for (const auto& piece : split(it->second, ','))
    if (!piece.empty()) out.push_back(parse_double(key, piece));
  return out;
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  const auto it = kv_.find("run.seeds");
  if (it == kv_.end())
    throw ConfigError("missing run.seeds: seeds are always explicit, never clock-derived");
  std::vector<std::uint64_t> out;
  for (const auto& piece : split(it->second, ',')) {
    if (piece.empty()) continue;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(piece.c_str(), &end, 10);
    if (end == piece.c_str() || trim(end).size() > 0)
      throw ConfigError("run.seeds entry is not a nonnegative integer: '" + piece + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("run.seeds must list at least one seed");
  return out;
}

std::string ExperimentConfig::mode() const { return require_string("run.mode"); }

RdeProblem ExperimentConfig::build_problem() const {
  const int d = static_cast<int>(get_int("problem.dim", 0));
  if (d < 1) throw ConfigError("problem.dim must be a positive integer");

  RdeProblem prob;
  const auto a_vals = get_doubles("problem.a");
  if (a_vals.size() == static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
    prob.A.resize(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) prob.A(i, j) = a_vals[static_cast<std::size_t>(i * d + j)];
  } else if (a_vals.size() == 1) {
    prob.A = a_vals[0] * Eigen::MatrixXd::Identity(d, d);
  } else {
    throw ConfigError("problem.a needs 1 or dim*dim entries (row-major)");
  }

  const std::string drift = get_string("problem.drift", "zero");
  if (drift == "zero") {
    prob.f = zero_drift(d);
  } else if (drift == "affine") {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(d, d);
    const auto f_vals = get_doubles("problem.drift.matrix");
    if (f_vals.size() == static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) F(i, j) = f_vals[static_cast<std::size_t>(i * d + j)];
    } else if (!f_vals.empty()) {
      throw ConfigError("problem.drift.matrix needs dim*dim entries");
    }
    Eigen::VectorXd f0 = Eigen::VectorXd::Zero(d);
    const auto off = get_doubles("problem.drift.offset");
    if (off.size() == static_cast<std::size_t>(d)) {
      for (int i = 0; i < d; ++i) f0(i) = off[static_cast<std::size_t>(i)];
    } else if (!off.empty()) {
      throw ConfigError("problem.drift.offset needs dim entries");
    }
    prob.f = affine_drift(F, f0);
  } else if (drift == "tanh") {
    Eigen::VectorXd f0 = Eigen::VectorXd::Zero(d);
    const auto off = get_doubles("problem.drift.offset");
    if (off.size() == static_cast<std::size_t>(d))
      for (int i = 0; i < d; ++i) f0(i) = off[static_cast<std::size_t>(i)];
    else if (!off.empty())
      throw ConfigError("problem.drift.offset needs dim entries");
    prob.f = tanh_drift(require_double("problem.drift.scale"), d, f0);
  } else {
    throw ConfigError("problem.drift must be zero | affine | tanh");
  }

  const std::string diffusion = require_string("problem.diffusion");
  const int m = static_cast<int>(get_int("problem.diffusion.m", 1));
  if (m < 1) throw ConfigError("problem.diffusion.m must be a positive integer");
  const auto offset_vals = get_doubles("problem.diffusion.offset");
  Eigen::MatrixXd G0 = Eigen::MatrixXd::Zero(d, m);
  if (offset_vals.size() == static_cast<std::size_t>(d) * static_cast<std::size_t>(m)) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < m; ++j) G0(i, j) = offset_vals[static_cast<std::size_t>(i * m + j)];
  } else if (!offset_vals.empty()) {
    throw ConfigError("problem.diffusion.offset needs dim*m entries (row-major)");
  }

  if (diffusion == "constant") {
    prob.g = constant_coefficient(G0);
  } else if (diffusion == "scalar-affine") {
    if (d != 1 || m != 1) throw ConfigError("scalar-affine diffusion needs dim = m = 1");
    prob.g = scalar_affine_coefficient(require_double("problem.diffusion.c"),
                                       G0(0, 0));
  } else if (diffusion == "affine") {
    const auto vals = get_doubles("problem.diffusion.slices");
    const std::size_t per = static_cast<std::size_t>(d) * static_cast<std::size_t>(m);
    if (vals.size() != per * static_cast<std::size_t>(d))
      throw ConfigError("problem.diffusion.slices needs dim*dim*m entries ([l][i][j])");
    std::vector<Eigen::MatrixXd> slices;
    for (int l = 0; l < d; ++l) {
      Eigen::MatrixXd s(d, m);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < m; ++j)
          s(i, j) = vals[static_cast<std::size_t>(l) * per +
                         static_cast<std::size_t>(i * m + j)];
      slices.push_back(std::move(s));
    }
    prob.g = affine_coefficient(slices, G0);
  } else if (diffusion == "sin") {
    prob.g = sin_coefficient(require_double("problem.diffusion.c"), d, m);
  } else {
    throw ConfigError("problem.diffusion must be constant | scalar-affine | affine | sin");
  }
  prob.check();
  return prob;
}

NoiseFamily ExperimentConfig::build_noise() const {
  NoiseFamily noise;
  noise.hurst = get_double("noise.hurst", 0.4);
  noise.steps_per_unit = static_cast<int>(get_int("noise.steps_per_unit", 64));
  noise.lift_level = static_cast<int>(get_int("noise.lift_level", 0));
  noise.p = get_double("run.p", 2.5);
  return noise;
}

double ExperimentConfig::tolerance(const std::string& name, double fallback) const {
  return get_double("tol." + name, fallback);
}

std::string ExperimentConfig::digest() const { return config_digest(kv_); }

namespace {

bool mode_needs_problem(const std::string& mode) {
  return mode == "solve" || mode == "criterion" || mode == "pullback" ||
         mode == "forward" || mode == "drift";
}

// Spot-audit a declared Lipschitz constant on a few seeded state pairs.
template <typename Fn>
double worst_quotient(const Fn& fn, int d, double declared) {
  NormalStream ns(0x5EEDull, 0);
  double worst = 0.0;
  std::uint64_t idx = 0;
  for (int trial = 0; trial < 8; ++trial) {
    Eigen::VectorXd a(d), b(d);
    for (int i = 0; i < d; ++i) a(i) = ns(idx++);
    for (int i = 0; i < d; ++i) b(i) = a(i) + 0.25 * ns(idx++);
    const double dy = (b - a).norm();
    if (dy < 1e-12) continue;
    worst = std::max(worst, fn(a, b) / dy);
  }
  (void)declared;
  return worst;
}

}  // namespace

ValidationReport validate_config(const ExperimentConfig& cfg) {
  ValidationReport rep;
  std::string mode;
  try {
    mode = cfg.mode();
  } catch (const ConfigError& e) {
    rep.errors.push_back(e.what());
    return rep;
  }
  const std::vector<std::string> modes = {"sample",  "lift",    "norms",
                                          "greedy",  "solve",   "criterion",
                                          "pullback", "forward", "drift"};
  if (std::find(modes.begin(), modes.end(), mode) == modes.end()) {
    rep.errors.push_back("run.mode '" + mode + "' is not a known mode");
    return rep;
  }
  try {
    (void)cfg.seeds();
  } catch (const ConfigError& e) {
    rep.errors.push_back(e.what());
  }

  const double p = cfg.get_double("run.p", 2.5);
  if (!(p > 2.0 && p < 3.0)) {
    rep.errors.push_back("run.p must lie in (2,3) for a level-2 setting");
  } else {
    rep.derived["c_p"] = sewing_constant(p);
  }

  const double hurst = cfg.get_double("noise.hurst", 0.4);
  if (!(hurst > 0.0 && hurst < 1.0)) {
    rep.errors.push_back("noise.hurst must lie in (0,1)");
  } else if (!(hurst > 1.0 / 3.0 && hurst <= 0.5)) {
    rep.warnings.push_back(
        "noise.hurst outside (1/3, 1/2]: the level-2 stability estimates target that band");
  }
  if (p > 2.0 && p < 3.0 && hurst > 0.0 && hurst < 1.0 && p + 1e-12 < 1.0 / hurst)
    rep.warnings.push_back("run.p should be at least 1/hurst for the declared regularity");

  const std::int64_t spu = cfg.get_int("noise.steps_per_unit", 64);
  if (spu < 1)
    rep.errors.push_back("noise.steps_per_unit must be >= 1");
  else if (spu < 8)
    rep.warnings.push_back("noise.steps_per_unit < 8: scheme error may dominate estimates");
  const std::int64_t lift = cfg.get_int("noise.lift_level", 0);
  if (lift < 0 || lift > 12) rep.errors.push_back("noise.lift_level must lie in [0,12]");

  if (mode_needs_problem(mode) || cfg.has("problem.dim")) {
    try {
      const RdeProblem prob = cfg.build_problem();
      rep.derived["a_norm"] = prob.a_norm();
      rep.derived["c_f"] = prob.f.lipschitz;
      rep.derived["c_g"] = prob.g.lipschitz;
      rep.derived["L"] = prob.a_norm() + prob.f.lipschitz;
      if (p > 2.0 && p < 3.0)
        rep.derived["gamma"] = default_gamma(sewing_constant(p), prob.g.lipschitz);

      const double worst_f = worst_quotient(
          [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
            return (prob.f.value(b) - prob.f.value(a)).norm();
          },
          prob.d(), prob.f.lipschitz);
      if (worst_f > prob.f.lipschitz * (1.0 + 1e-9) + 1e-12)
        rep.warnings.push_back("declared drift constant looks too small on sampled states");
      const double worst_g = worst_quotient(
          [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
            return (prob.g.value(b) - prob.g.value(a)).norm();
          },
          prob.d(), prob.g.lipschitz);
      if (worst_g > prob.g.lipschitz * (1.0 + 1e-9) + 1e-12)
        rep.warnings.push_back("declared diffusion constant looks too small on sampled states");

      if (mode == "criterion" || mode == "pullback" || mode == "forward" ||
          mode == "drift") {
        try {
          const SemigroupConstants sg = semigroup_constants(prob.A);
          rep.derived["c_a"] = sg.c_a;
          rep.derived["lambda_a"] = sg.lambda_a;
          rep.derived["L_f"] = sg.c_a * prob.f.lipschitz;
          if (!(sg.lambda_a > sg.c_a * prob.f.lipschitz))
            rep.warnings.push_back(
                "lambda_a <= c_a*c_f: the decay budget is exhausted by the drift");
        } catch (const std::domain_error& e) {
          rep.errors.push_back(std::string("state matrix: ") + e.what());
        }
      }
    } catch (const std::exception& e) {
      rep.errors.push_back(std::string("problem: ") + e.what());
    }
  }

  if (mode == "solve") {
    const auto y0 = cfg.get_doubles("solve.y0");
    const auto d = cfg.get_int("problem.dim", 0);
    if (y0.empty())
      rep.errors.push_back("solve mode needs solve.y0");
    else if (static_cast<std::int64_t>(y0.size()) != d)
      rep.errors.push_back("solve.y0 needs problem.dim entries");
  }
  if (mode == "pullback" && cfg.get_doubles("experiment.horizons").empty())
    rep.errors.push_back("pullback mode needs experiment.horizons");
  if (mode == "drift" && cfg.get_doubles("experiment.scales").empty())
    rep.errors.push_back("drift mode needs experiment.scales");
  if (mode == "forward" && !cfg.has("experiment.horizon"))
    rep.errors.push_back("forward mode needs experiment.horizon");

  const double ia = cfg.get_double("interval.a", cfg.get_double("noise.t0", 0.0));
  const double ib = cfg.get_double("interval.b", cfg.get_double("noise.t1", 1.0));
  if (!(ib > ia)) rep.errors.push_back("interval.b must exceed interval.a");
  return rep;
}

}  // namespace roughdyn
