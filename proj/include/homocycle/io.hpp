#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "homocycle/census.hpp"
#include "homocycle/diagnostics.hpp"

namespace homocycle {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Graph documents.
//
// {
//   "vertices": ["v1", "v2"],
//   "edges": [
//     {"id": "e1", "ends": ["v1", "v1"], "length": 1},
//     {"id": "e2", "ends": ["v1", "v2"], "length": "3/2"},
//     {"id": "e3", "ends": ["v2", "v1"], "length": {"q0": 1, "q1": "1/2"}}
//   ]
// }
//
// Numbers are taken at their exact binary value; strings are exact decimals
// or fractions; objects give coefficients of 1, sqrt2, sqrt3, sqrt5.

inline rational parse_rational_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return rational(v.get<long long>());
  if (v.is_number_float()) return rational(v.get<double>());
  if (v.is_string()) return parse_rational_token(v.get<std::string>());
  throw ParseError(where + ": expected a number or numeric string");
}

inline ExactLength parse_length(const json& v, const std::string& where) {
  if (v.is_object()) {
    ExactLength x;
    static const char* keys[4] = {"q0", "q1", "q2", "q3"};
    for (const auto& [k, val] : v.items()) {
      int idx = -1;
      for (int i = 0; i < 4; ++i) {
        if (k == keys[i]) idx = i;
      }
      if (idx < 0)
        throw ParseError(where + ": unknown length component '" + k + "'");
      x.q[idx] = parse_rational_json(val, where + "." + k);
    }
    return x;
  }
  return ExactLength::from_rational(parse_rational_json(v, where));
}

inline json length_to_json(const ExactLength& x) {
  if (x.is_rational()) return json(x.q[0].str());
  json o = json::object();
  static const char* keys[4] = {"q0", "q1", "q2", "q3"};
  for (int i = 0; i < 4; ++i) {
    if (x.q[i] != 0) o[keys[i]] = x.q[i].str();
  }
  return o;
}

inline MultiGraph parse_graph(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
    throw ParseError("graph document needs 'vertices' and 'edges'");
  std::vector<std::string> vertices;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_string()) throw ParseError("vertex ids must be strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<Edge> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_object() || !e.contains("id") || !e.contains("ends") ||
        !e.contains("length"))
      throw ParseError("each edge needs 'id', 'ends' and 'length'");
    Edge ed;
    ed.id = e["id"].get<std::string>();
    const auto& ends = e["ends"];
    if (!ends.is_array() || ends.size() != 2)
      throw ParseError("edge '" + ed.id + "': 'ends' must be [tail, head]");
    ed.ends = {ends[0].get<std::string>(), ends[1].get<std::string>()};
    ed.length = parse_length(e["length"], "edge '" + ed.id + "' length");
    edges.push_back(std::move(ed));
  }
  return MultiGraph::create(std::move(vertices), std::move(edges));
}

inline MultiGraph parse_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

inline json graph_to_json(const MultiGraph& g) {
  json doc;
  doc["vertices"] = g.vertices();
  doc["edges"] = json::array();
  for (const Edge& e : g.edges()) {
    json je;
    je["id"] = e.id;
    je["ends"] = {e.ends[0], e.ends[1]};
    je["length"] = length_to_json(e.length);
    doc["edges"].push_back(std::move(je));
  }
  return doc;
}

inline std::string graph_hash(const MultiGraph& g) {
  std::string canon = graph_to_json(g).dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// Configuration.

inline constexpr int kMaxAlphaRadius = 8;

struct AnalysisConfig {
  Mode mode = Mode::Normalized;
  double step_u = 0.05;
  double step_s = 0.025;
  int n_max = 0;  // 0 = derive from the T grid and minimum edge length
  double budget_mb = 2048.0;
  std::vector<double> t_grid = {8, 10, 12, 14, 16, 18};
  int alpha_radius = 3;
  int threads = 0;
};

inline void validate_config(const AnalysisConfig& c) {
  if (!(c.step_u > 0) || !(c.step_s > 0))
    throw ParseError("derivative steps must be positive");
  if (!(c.budget_mb > 0)) throw ParseError("memory budget must be positive");
  if (c.alpha_radius < 0 || c.alpha_radius > kMaxAlphaRadius)
    throw ParseError("alpha radius must lie in [0, " +
                     std::to_string(kMaxAlphaRadius) + "]");
  if (c.n_max < 0) throw ParseError("n_max must be non-negative");
  for (double t : c.t_grid) {
    if (!(t > 0)) throw ParseError("T grid entries must be positive");
  }
}

inline json config_to_json(const AnalysisConfig& c) {
  json j;
  j["mode"] = mode_name(c.mode);
  j["step_u"] = c.step_u;
  j["step_s"] = c.step_s;
  j["n_max"] = c.n_max;
  j["budget_mb"] = c.budget_mb;
  j["t_grid"] = c.t_grid;
  j["alpha_radius"] = c.alpha_radius;
  j["threads"] = c.threads;
  return j;
}

inline AnalysisConfig config_from_json(const json& j) {
  AnalysisConfig c;
  if (j.contains("mode")) c.mode = mode_from_name(j["mode"].get<std::string>());
  if (j.contains("step_u")) c.step_u = j["step_u"].get<double>();
  if (j.contains("step_s")) c.step_s = j["step_s"].get<double>();
  if (j.contains("n_max")) c.n_max = j["n_max"].get<int>();
  if (j.contains("budget_mb")) c.budget_mb = j["budget_mb"].get<double>();
  if (j.contains("t_grid")) c.t_grid = j["t_grid"].get<std::vector<double>>();
  if (j.contains("alpha_radius")) c.alpha_radius = j["alpha_radius"].get<int>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  validate_config(c);
  return c;
}

// ---------------------------------------------------------------------------
// CSV documents.  Comment lines carry the configuration and input hash for
// reproducibility; floats use 17 significant digits so re-ingestion is
// bit-faithful.

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

struct CensusCsvRow {
  double T = 0;
  std::vector<int> alpha;
  bigint count = 0;
};

inline std::string emit_census_csv(const std::vector<CensusCsvRow>& rows,
                                   int b, const json& config,
                                   const std::string& hash) {
  std::ostringstream os;
  os << "# homocycle census\n";
  os << "# config: " << config.dump() << "\n";
  os << "# graph_hash: " << hash << "\n";
  os << "T";
  for (int c = 1; c <= b; ++c) os << ",alpha_" << c;
  os << ",count\n";
  for (const auto& r : rows) {
    os << format_double(r.T);
    for (int v : r.alpha) os << "," << v;
    os << "," << r.count.str() << "\n";
  }
  return os.str();
}

struct VerifyCsvRow {
  double T = 0;
  std::vector<int> alpha;
  bigint pi = 0;
  double pred0 = 0, pred1 = 0, res0 = 0, res1 = 0;
};

inline std::string emit_verify_csv(const std::vector<VerifyCsvRow>& rows,
                                   int b, const json& config,
                                   const std::string& hash,
                                   const json& flags) {
  std::ostringstream os;
  os << "# homocycle verify\n";
  os << "# config: " << config.dump() << "\n";
  os << "# graph_hash: " << hash << "\n";
  os << "# flags: " << flags.dump() << "\n";
  os << "T";
  for (int c = 1; c <= b; ++c) os << ",alpha_" << c;
  os << ",pi,pred0,pred1,res0,res1\n";
  for (const auto& r : rows) {
    os << format_double(r.T);
    for (int v : r.alpha) os << "," << v;
    os << "," << r.pi.str() << "," << format_double(r.pred0) << ","
       << format_double(r.pred1) << "," << format_double(r.res0) << ","
       << format_double(r.res1) << "\n";
  }
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

struct CsvDoc {
  std::string kind;
  json config;
  std::string hash;
  json flags;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline CsvDoc parse_csv_doc(const std::string& text) {
  CsvDoc doc;
  std::istringstream is(text);
  std::string line;
  bool header_done = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      std::string body = line.substr(2);
      auto colon = body.find(": ");
      if (colon == std::string::npos) {
        doc.kind = body;
      } else {
        std::string key = body.substr(0, colon);
        std::string val = body.substr(colon + 2);
        if (key == "config") doc.config = json::parse(val);
        else if (key == "graph_hash") doc.hash = val;
        else if (key == "flags") doc.flags = json::parse(val);
      }
      continue;
    }
    if (!header_done) {
      doc.header = split_csv(line);
      header_done = true;
    } else {
      doc.rows.push_back(split_csv(line));
    }
  }
  return doc;
}

}  // namespace detail

inline std::vector<CensusCsvRow> parse_census_csv(const std::string& text,
                                                  json* config = nullptr,
                                                  std::string* hash = nullptr) {
  auto doc = detail::parse_csv_doc(text);
  if (config) *config = doc.config;
  if (hash) *hash = doc.hash;
  int b = static_cast<int>(doc.header.size()) - 2;
  std::vector<CensusCsvRow> rows;
  for (const auto& r : doc.rows) {
    CensusCsvRow row;
    row.T = std::strtod(r.at(0).c_str(), nullptr);
    for (int c = 0; c < b; ++c) row.alpha.push_back(std::stoi(r.at(1 + c)));
    row.count = bigint(r.at(1 + b));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<VerifyCsvRow> parse_verify_csv(const std::string& text,
                                                  json* config = nullptr,
                                                  std::string* hash = nullptr,
                                                  json* flags = nullptr) {
  auto doc = detail::parse_csv_doc(text);
  if (config) *config = doc.config;
  if (hash) *hash = doc.hash;
  if (flags) *flags = doc.flags;
  int b = static_cast<int>(doc.header.size()) - 6;
  std::vector<VerifyCsvRow> rows;
  for (const auto& r : doc.rows) {
    VerifyCsvRow row;
    row.T = std::strtod(r.at(0).c_str(), nullptr);
    for (int c = 0; c < b; ++c) row.alpha.push_back(std::stoi(r.at(1 + c)));
    row.pi = bigint(r.at(1 + b));
    row.pred0 = std::strtod(r.at(2 + b).c_str(), nullptr);
    row.pred1 = std::strtod(r.at(3 + b).c_str(), nullptr);
    row.res0 = std::strtod(r.at(4 + b).c_str(), nullptr);
    row.res1 = std::strtod(r.at(5 + b).c_str(), nullptr);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Eigen-to-JSON helpers for the analysis report.
inline json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline json tensor4_to_json(const Tensor4& t) {
  json out = json::array();
  for (int i = 0; i < t.b; ++i) {
    json ji = json::array();
    for (int j = 0; j < t.b; ++j) {
      json jj = json::array();
      for (int k = 0; k < t.b; ++k) {
        json jk = json::array();
        for (int l = 0; l < t.b; ++l) jk.push_back(t.at(i, j, k, l));
        jj.push_back(std::move(jk));
      }
      ji.push_back(std::move(jj));
    }
    out.push_back(std::move(ji));
  }
  return out;
}

}  // namespace homocycle
