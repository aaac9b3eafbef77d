#pragma once

#include <string>
#include <vector>

#include "roughdyn/config.hpp"

namespace roughdyn {

// Executes one experiment described by `cfg` into `out_dir` (created as
// needed; existing output files abort unless `force`).  Every report embeds
// the resolved key=value map and its digest so a run can be replayed
// byte-identically; the timestamp is the only non-deterministic field and is
// dropped when `no_timestamp`.
struct RunResult {
  std::string report_json;                       // also written to report.json
  std::vector<std::string> files;                // paths written, in order
  std::vector<std::string> stages;               // one line per stage
};

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                         bool force, bool no_timestamp);

// Validation as a JSON document (errors, warnings, derived constants).
std::string validate_report_json(const ExperimentConfig& cfg);

}  // namespace roughdyn
