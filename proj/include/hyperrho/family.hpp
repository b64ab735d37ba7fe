#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperrho/errors.hpp"
#include "hyperrho/generators.hpp"
#include "hyperrho/hypergraph.hpp"
#include "hyperrho/io.hpp"

namespace hyperrho {

enum class Family { Path, E, F, G, Cycle, BD, FromFile };

struct FamilySpec {
  Family family = Family::Path;
  std::vector<int> params;
  int r = 3;
  std::filesystem::path file;  // FromFile only
};

[[nodiscard]] inline std::string family_name(Family f) {
  switch (f) {
    case Family::Path: return "path";
    case Family::E: return "E";
    case Family::F: return "F";
    case Family::G: return "G";
    case Family::Cycle: return "cycle";
    case Family::BD: return "BD";
    case Family::FromFile: return "file";
  }
  return "file";
}

/// Accepts path/A, E, F, G, cycle/C, BD, file (case-insensitive).
[[nodiscard]] inline std::optional<Family> parse_family(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "path" || s == "a") return Family::Path;
  if (s == "e") return Family::E;
  if (s == "f") return Family::F;
  if (s == "g") return Family::G;
  if (s == "cycle" || s == "c") return Family::Cycle;
  if (s == "bd") return Family::BD;
  if (s == "file") return Family::FromFile;
  return std::nullopt;
}

[[nodiscard]] inline int family_arity(Family f) {
  switch (f) {
    case Family::Path:
    case Family::Cycle:
    case Family::BD: return 1;
    case Family::E:
    case Family::F: return 3;
    case Family::G: return 5;
    case Family::FromFile: return 0;
  }
  return 0;
}

inline void check_spec(const FamilySpec& s) {
  const auto want = static_cast<std::size_t>(family_arity(s.family));
  if (s.params.size() != want) {
    throw InvalidParameters(family_name(s.family) + " takes " + std::to_string(want) +
                            " parameter(s), got " + std::to_string(s.params.size()));
  }
}

/// Number of edges the spec describes, read from the file for FromFile.
[[nodiscard]] inline int edge_count(const FamilySpec& s) {
  check_spec(s);
  const auto& p = s.params;
  switch (s.family) {
    case Family::Path:
    case Family::Cycle:
    case Family::BD: return p[0];
    case Family::E: return p[0] + p[1] + p[2];
    case Family::F: return p[0] + p[1] + p[2] + 1;
    case Family::G: return p[0] + p[1] + p[2] + p[3] + p[4] + 2;
    case Family::FromFile: return read_hypergraph(s.file).num_edges();
  }
  return 0;
}

[[nodiscard]] inline UniformHypergraph make_family(const FamilySpec& s) {
  check_spec(s);
  const auto& p = s.params;
  switch (s.family) {
    case Family::Path: return make_path(p[0], s.r);
    case Family::E: return make_E(p[0], p[1], p[2], s.r);
    case Family::F: return make_F(p[0], p[1], p[2], s.r);
    case Family::G: return make_G(p[0], p[1], p[2], p[3], p[4], s.r);
    case Family::Cycle: return make_cycle(p[0], s.r);
    case Family::BD: return make_BD(p[0], s.r);
    case Family::FromFile: return read_hypergraph(s.file);
  }
  throw InvalidParameters("unknown family");
}

}  // namespace hyperrho
