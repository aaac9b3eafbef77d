#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roughdyn/rough_path.hpp"
#include "roughdyn/variation.hpp"

namespace roughdyn {

// Bit-exact double <-> text: C99 hexadecimal floating literals.
std::string hex_double(double v);
double parse_hex_double(const std::string& s);

// Shortest-precision decimal that round-trips a double (%.17g trimmed).
std::string decimal_double(double v);

// Columnar rough-path document: header (dim, p, optional hurst/seed/lift
// level), column names, rows (t, x..., anchored X... row-major).  `hex` picks
// the bit-exact encoding; decimal round-trips too but hex is the guarantee.
std::string roughpath_to_json(const RoughPath& rp, bool hex);
RoughPath roughpath_from_json(const std::string& text);
void save_roughpath(const RoughPath& rp, const std::string& path, bool hex);
RoughPath load_roughpath(const std::string& path);

std::string normreport_to_json(const NormReport& r);
std::string greedy_to_json(const GreedyPartition& g);

// CSV with a fixed header row; all numerics via decimal_double so reruns are
// byte-identical.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::string csv_body(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

// FNV-1a 64-bit over canonical sorted key=value lines; hex digest.
std::uint64_t fnv1a64(const std::string& data);
std::string config_digest(const std::map<std::string, std::string>& kv);

}  // namespace roughdyn
