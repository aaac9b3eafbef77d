#include "roughdyn/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "roughdyn/errors.hpp"

namespace roughdyn {

namespace {

bool same_bits(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  std::uint64_t ba = 0, bb = 0;
  std::memcpy(&ba, &a, sizeof(double));
  std::memcpy(&bb, &b, sizeof(double));
  return ba == bb;
}

}  // namespace

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_hex_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw IoError("not a floating-point literal: " + s);
  return v;
}

std::string decimal_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (same_bits(std::strtod(buf, nullptr), v)) return buf;
  }
  return buf;
}

namespace {

using nlohmann::json;

std::string encode(double v, bool hex) { return hex ? hex_double(v) : decimal_double(v); }

}  // namespace

std::string roughpath_to_json(const RoughPath& rp, bool hex) {
  json doc;
  doc["kind"] = "rough-path";
  doc["version"] = 1;
  doc["dim"] = rp.dim;
  doc["p"] = encode(rp.p, hex);
  doc["encoding"] = hex ? "hex" : "decimal";
  if (rp.hurst) doc["hurst"] = encode(*rp.hurst, hex);
  if (rp.seed) doc["seed"] = *rp.seed;
  if (rp.lift_level) doc["lift_level"] = *rp.lift_level;

  json columns = json::array();
  columns.push_back("t");
  for (int k = 0; k < rp.dim; ++k) columns.push_back("x" + std::to_string(k));
  for (int k = 0; k < rp.dim; ++k)
    for (int j = 0; j < rp.dim; ++j)
      columns.push_back("xx" + std::to_string(k) + "_" + std::to_string(j));
  doc["columns"] = columns;

  json rows = json::array();
  for (std::size_t i = 0; i < rp.nodes(); ++i) {
    json row = json::array();
    row.push_back(encode(rp.grid[i], hex));
    for (int k = 0; k < rp.dim; ++k) row.push_back(encode(rp.x(static_cast<Eigen::Index>(i), k), hex));
    for (int k = 0; k < rp.dim; ++k)
      for (int j = 0; j < rp.dim; ++j) row.push_back(encode(rp.xx[i](k, j), hex));
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

RoughPath roughpath_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("rough-path document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("kind", "") != "rough-path")
    throw IoError("not a rough-path document");

  RoughPath rp;
  rp.dim = doc.at("dim").get<int>();
  if (rp.dim < 1) throw IoError("rough-path document has a bad dimension");
  rp.p = parse_hex_double(doc.at("p").get<std::string>());
  if (doc.contains("hurst")) rp.hurst = parse_hex_double(doc["hurst"].get<std::string>());
  if (doc.contains("seed")) rp.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("lift_level")) rp.lift_level = doc["lift_level"].get<int>();

  const auto& rows = doc.at("rows");
  if (!rows.is_array() || rows.size() < 2) throw IoError("rough-path document needs rows");
  const std::size_t n = rows.size();
  const std::size_t width = 1 + static_cast<std::size_t>(rp.dim) +
                            static_cast<std::size_t>(rp.dim) * static_cast<std::size_t>(rp.dim);
  std::vector<double> times;
  times.reserve(n);
  rp.x.resize(static_cast<Eigen::Index>(n), rp.dim);
  rp.xx.assign(n, Eigen::MatrixXd::Zero(rp.dim, rp.dim));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != width) throw IoError("rough-path row width mismatch");
    std::size_t c = 0;
    times.push_back(parse_hex_double(row[c++].get<std::string>()));
    for (int k = 0; k < rp.dim; ++k)
      rp.x(static_cast<Eigen::Index>(i), k) = parse_hex_double(row[c++].get<std::string>());
    for (int k = 0; k < rp.dim; ++k)
      for (int j = 0; j < rp.dim; ++j)
        rp.xx[i](k, j) = parse_hex_double(row[c++].get<std::string>());
  }
  rp.grid = TimeGrid(std::move(times));
  rp.validate();
  return rp;
}

void save_roughpath(const RoughPath& rp, const std::string& path, bool hex) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << roughpath_to_json(rp, hex);
  if (!out) throw IoError("write failed: " + path);
}

RoughPath load_roughpath(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return roughpath_from_json(buf.str());
}

std::string normreport_to_json(const NormReport& r) {
  json doc;
  doc["kind"] = r.kind;
  doc["exponent"] = r.exponent;
  doc["value"] = r.value;
  doc["power_sum"] = r.power_sum;
  doc["a"] = r.a;
  doc["b"] = r.b;
  doc["witness"] = r.witness;
  return doc.dump(2) + "\n";
}

std::string greedy_to_json(const GreedyPartition& g) {
  json doc;
  if (std::isinf(g.gamma))
    doc["gamma"] = "inf";
  else
    doc["gamma"] = g.gamma;
  doc["p"] = g.p;
  doc["count"] = g.count;
  doc["count_bound"] = g.count_bound;
  doc["times"] = g.times;
  return doc.dump(2) + "\n";
}

std::string csv_body(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::invalid_argument("csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << decimal_double(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << csv_body(header, rows);
  if (!out) throw IoError("write failed: " + path);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_digest(const std::map<std::string, std::string>& kv) {
  std::string canonical;
  for (const auto& [k, v] : kv) {
    canonical += k;
    canonical += '=';
    canonical += v;
    canonical += '\n';
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

}  // namespace roughdyn
