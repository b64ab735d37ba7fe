#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hyperrho/certificates.hpp"
#include "hyperrho/errors.hpp"
#include "hyperrho/hypergraph.hpp"

namespace hyperrho {

using Json = nlohmann::json;

namespace detail {

inline std::string position_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline Json parse_document(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(std::string(what) + ": malformed JSON at " + position_of(text, at));
  }
}

inline const Json& field(const Json& obj, const char* key, std::string_view what) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

inline int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParseError(where + ": integer out of range");
  }
  return static_cast<int>(v);
}

inline double as_real(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace detail

/// {"r": int, "vertices": int, "edges": [[...], ...], "labels": {"id": "name"}}.
/// Schema problems raise ParseError; a well-formed file describing an invalid
/// hypergraph raises InvalidHypergraph listing every violation.
[[nodiscard]] inline UniformHypergraph hypergraph_from_json(const Json& doc) {
  constexpr std::string_view what = "hypergraph";
  if (!doc.is_object()) throw ParseError("hypergraph: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "r" && key != "vertices" && key != "edges" && key != "labels") {
      throw ParseError("hypergraph: unknown field \"" + key + "\"");
    }
  }
  UniformHypergraph h;
  h.rank = detail::as_int(detail::field(doc, "r", what), "r");
  h.num_vertices = detail::as_int(detail::field(doc, "vertices", what), "vertices");
  if (h.rank < 2) throw ParseError("r: rank must be >= 2");
  if (h.num_vertices < 1) throw ParseError("vertices: must be >= 1");
  const Json& edges = detail::field(doc, "edges", what);
  if (!edges.is_array()) throw ParseError("edges: expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!edges[i].is_array()) throw ParseError(where + ": expected an array");
    if (edges[i].size() != static_cast<std::size_t>(h.rank)) {
      throw ParseError(where + ": expected " + std::to_string(h.rank) + " vertices, got " +
                       std::to_string(edges[i].size()));
    }
    Edge e;
    for (std::size_t j = 0; j < edges[i].size(); ++j) {
      e.push_back(detail::as_int(edges[i][j], where + "[" + std::to_string(j) + "]"));
    }
    std::sort(e.begin(), e.end());
    h.edges.push_back(std::move(e));
  }
  if (auto it = doc.find("labels"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("labels: expected an object");
    for (const auto& [key, value] : it->items()) {
      const std::string where = "labels[\"" + key + "\"]";
      std::size_t used = 0;
      int id = -1;
      try {
        id = std::stoi(key, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != key.size()) throw ParseError(where + ": key must be a vertex id");
      if (!value.is_string()) throw ParseError(where + ": expected a string");
      h.labels[id] = value.get<std::string>();
    }
  }
  require_valid(h);
  for (const auto& [id, label] : h.labels) {
    if (id < 0 || id >= h.num_vertices) {
      throw InvalidHypergraph("label for vertex " + std::to_string(id) + " outside [0, " +
                              std::to_string(h.num_vertices) + ")");
    }
  }
  return h;
}

[[nodiscard]] inline UniformHypergraph parse_hypergraph(std::string_view text) {
  return hypergraph_from_json(detail::parse_document(text, "hypergraph"));
}

[[nodiscard]] inline UniformHypergraph read_hypergraph(const std::filesystem::path& path) {
  return parse_hypergraph(detail::read_file(path));
}

[[nodiscard]] inline Json to_json(const UniformHypergraph& h) {
  Json edges = Json::array();
  for (Edge e : h.edges) {
    std::sort(e.begin(), e.end());
    edges.push_back(e);
  }
  Json doc = {{"r", h.rank}, {"vertices", h.num_vertices}, {"edges", std::move(edges)}};
  if (!h.labels.empty()) {
    Json labels = Json::object();
    for (const auto& [id, label] : h.labels) labels[std::to_string(id)] = label;
    doc["labels"] = std::move(labels);
  }
  return doc;
}

[[nodiscard]] inline std::string dump_hypergraph(const UniformHypergraph& h) {
  return to_json(h).dump(2) + "\n";
}

inline void write_hypergraph(const UniformHypergraph& h, const std::filesystem::path& path) {
  detail::write_file(path, dump_hypergraph(h));
}

struct CertificateFile {
  double alpha = 0.0;
  WeightedIncidenceMatrix weights;
};

/// {"alpha": real, "entries": [[vertex, edge, weight], ...]}.
[[nodiscard]] inline CertificateFile certificate_from_json(const Json& doc) {
  constexpr std::string_view what = "certificate";
  if (!doc.is_object()) throw ParseError("certificate: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "alpha" && key != "entries") {
      throw ParseError("certificate: unknown field \"" + key + "\"");
    }
  }
  CertificateFile c;
  c.alpha = detail::as_real(detail::field(doc, "alpha", what), "alpha");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ParseError("alpha: must lie in (0, 1]");
  const Json& entries = detail::field(doc, "entries", what);
  if (!entries.is_array()) throw ParseError("entries: expected an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "entries[" + std::to_string(i) + "]";
    const Json& row = entries[i];
    if (!row.is_array() || row.size() != 3) throw ParseError(where + ": expected [vertex, edge, weight]");
    const int v = detail::as_int(row[0], where + "[0]");
    const int e = detail::as_int(row[1], where + "[1]");
    const double w = detail::as_real(row[2], where + "[2]");
    if (c.weights.contains(v, e)) throw ParseError(where + ": duplicate entry");
    c.weights.set(v, e, w);
  }
  return c;
}

[[nodiscard]] inline CertificateFile parse_certificate(std::string_view text) {
  return certificate_from_json(detail::parse_document(text, "certificate"));
}

[[nodiscard]] inline CertificateFile read_certificate(const std::filesystem::path& path) {
  return parse_certificate(detail::read_file(path));
}

[[nodiscard]] inline Json to_json(double alpha, const WeightedIncidenceMatrix& b) {
  Json entries = Json::array();
  for (const auto& [key, w] : b.entries()) entries.push_back(Json::array({key.first, key.second, w}));
  return {{"alpha", alpha}, {"entries", std::move(entries)}};
}

inline void write_certificate(double alpha, const WeightedIncidenceMatrix& b,
                              const std::filesystem::path& path) {
  detail::write_file(path, to_json(alpha, b).dump(2) + "\n");
}

[[nodiscard]] inline Json to_json(const CertificateVerdict& v) {
  Json violations = Json::array();
  for (const auto& x : v.violations) {
    violations.push_back({{"site", x.site == ConditionViolation::Site::Vertex ? "vertex" : "edge"},
                          {"index", x.index},
                          {"lhs", x.lhs},
                          {"rhs", x.rhs}});
  }
  Json doc = {{"kind", to_string(v.kind)},
              {"strict", v.strict},
              {"alpha", v.alpha},
              {"violations", std::move(violations)}};
  if (v.consistent) {
    doc["consistent"] = *v.consistent;
    doc["consistency_deviation"] = v.consistency.deviation;
  } else {
    doc["consistent"] = nullptr;
  }
  return doc;
}

}  // namespace hyperrho
