#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roughdyn/experiments.hpp"
#include "roughdyn/rde.hpp"

namespace roughdyn {

// Flat key=value experiment configuration ("#" comments; JSON objects with
// the same dotted keys, possibly nested, are accepted as an alternative).
// Unknown keys are a parse error that lists the valid vocabulary.  Seeds are
// always explicit: nothing defaults to wall-clock state.
class ExperimentConfig {
 public:
  static ExperimentConfig parse_text(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);
  static const std::vector<std::string>& known_keys();

  void set(const std::string& key, const std::string& value);  // validates key
  bool has(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;  // comma list
  std::vector<std::uint64_t> seeds() const;                       // run.seeds

  std::string mode() const;                 // run.mode (must be present)
  RdeProblem build_problem() const;         // problem.* keys
  NoiseFamily build_noise() const;          // noise.* + run.p
  double tolerance(const std::string& name, double fallback) const;  // tol.*

  std::string digest() const;

 private:
  std::map<std::string, std::string> kv_;
};

// Static checks: Hurwitz drift, parameter ranges, declared-constant
// spot-audit via sampled difference quotients.  Warnings never fail the run.
struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::map<std::string, double> derived;  // c_p, gamma, L, L_f, |A|, ...
  bool ok() const { return errors.empty(); }
};
ValidationReport validate_config(const ExperimentConfig& cfg);

}  // namespace roughdyn
