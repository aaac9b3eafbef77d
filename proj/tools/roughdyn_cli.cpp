// Command-line front end; talks to the library through the C interface only.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roughdyn.h"

namespace {

int exit_code_for(rd_status s) {
  // Only configuration and filesystem problems are process failures; numeric
  // outcomes (divergence, domain issues) are reported but exit clean so sweep
  // scripts can keep going.
  return (s == RD_ERR_CONFIG || s == RD_ERR_IO) ? 2 : 0;
}

int report_failure(rd_status s) {
  std::fprintf(stderr, "error (%s): %s\n", rd_status_name(s), rd_last_error());
  return exit_code_for(s);
}

bool apply_pair(rd_config* cfg, const std::string& pair, const std::string& prefix) {
  const std::size_t eq = pair.find('=');
  if (eq == std::string::npos || eq == 0) {
    std::fprintf(stderr, "error (config): expected KEY=VALUE, got '%s'\n", pair.c_str());
    return false;
  }
  std::string key = pair.substr(0, eq);
  if (!prefix.empty() && key.rfind(prefix, 0) != 0) key = prefix + key;
  const rd_status s = rd_config_set(cfg, key.c_str(), pair.substr(eq + 1).c_str());
  if (s != RD_OK) {
    std::fprintf(stderr, "error (%s): %s\n", rd_status_name(s), rd_last_error());
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rough-path sampling, norms, and asymptotic-stability experiments"};
  app.fallthrough();
  app.set_version_flag("--version", rd_version());

  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> seeds, tols, sets;
  bool force = false;
  bool no_timestamp = false;
  app.add_option("--config", config_path, "experiment config file (key=value or JSON)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_flag("--force", force, "overwrite an existing report.json");
  app.add_flag("--no-timestamp", no_timestamp,
               "omit the timestamp so reruns are byte-identical");
  app.add_option("--seed", seeds, "seed override, repeatable (replaces run.seeds)");
  app.add_option("--tol", tols, "tolerance override NAME=VALUE, repeatable");
  app.add_option("--set", sets, "config override KEY=VALUE, repeatable");

  const struct {
    const char* name;
    const char* help;
  } kModes[] = {
      {"sample", "draw fractional Brownian paths and their level-2 lifts"},
      {"lift", "lift sampled paths and report multiplicativity defects"},
      {"norms", "discrete variation norms of sampled drivers"},
      {"greedy", "greedy exceedance partitions of sampled drivers"},
      {"solve", "integrate the differential model along sampled drivers"},
      {"criterion", "evaluate the smallness conditions for a model"},
      {"pullback", "pullback contraction experiment"},
      {"forward", "forward difference-domination experiment"},
      {"drift", "equilibrium drift sweep across coefficient scales"},
      {"validate", "check a config and print derived constants"},
  };
  for (const auto& m : kModes) app.add_subcommand(m.name, m.help);
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);
  const std::string mode = app.get_subcommands().front()->get_name();

  rd_config* cfg = nullptr;
  rd_status st = config_path.empty() ? rd_config_parse_text("", &cfg)
                                     : rd_config_parse_file(config_path.c_str(), &cfg);
  if (st != RD_OK) return report_failure(st) ? 2 : 2;  // parse failures always fail

  if (mode != "validate") {
    if (rd_config_set(cfg, "run.mode", mode.c_str()) != RD_OK) {
      report_failure(RD_ERR_CONFIG);
      rd_config_free(cfg);
      return 2;
    }
  }
  if (!seeds.empty()) {
    std::string joined;
    for (const auto& s : seeds) {
      if (!joined.empty()) joined += ",";
      joined += s;
    }
    if (rd_config_set(cfg, "run.seeds", joined.c_str()) != RD_OK) {
      report_failure(RD_ERR_CONFIG);
      rd_config_free(cfg);
      return 2;
    }
  }
  for (const auto& t : tols)
    if (!apply_pair(cfg, t, "tol.")) {
      rd_config_free(cfg);
      return 2;
    }
  for (const auto& s : sets)
    if (!apply_pair(cfg, s, "")) {
      rd_config_free(cfg);
      return 2;
    }

  int code = 0;
  if (mode == "validate") {
    char* report = nullptr;
    st = rd_validate(cfg, &report);
    if (st != RD_OK) {
      code = report_failure(st) ? 2 : 2;
    } else {
      std::fputs(report, stdout);
      if (std::string(report).find("\"ok\": false") != std::string::npos) code = 2;
      rd_string_free(report);
    }
  } else {
    char* report = nullptr;
    st = rd_run(cfg, out_dir.c_str(), force ? 1 : 0, no_timestamp ? 1 : 0, &report);
    if (st != RD_OK) {
      code = report_failure(st);
    } else {
      std::fputs(report, stdout);
      rd_string_free(report);
    }
  }
  rd_config_free(cfg);
  return code;
}
