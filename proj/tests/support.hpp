#pragma once

// Shared fixtures for the unit tests and the acceptance runner: host
// batteries for the grafting theorems, a deterministic sample of tree
// instances, and the exact-rational checks of the recurrence lemma.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hyperrho.hpp"

namespace hyperrho::testing {

struct CenterHost {
  std::string name;
  UniformHypergraph host;
  VertexId anchor = 0;
};

struct PairHost {
  std::string name;
  UniformHypergraph host;
  EdgeId edge = 0;
  VertexId short_anchor = 0;
  VertexId long_anchor = 0;
};

// Two edges sharing two vertices, plus a third edge on one of the others.
inline UniformHypergraph non_simple_host(int r) {
  UniformHypergraph h;
  h.rank = 3;
  h.num_vertices = 6;
  h.edges = {{0, 1, 2}, {0, 1, 3}, {2, 4, 5}};
  return extend(h, r - 3);
}

inline std::vector<CenterHost> center_hosts(int r) {
  std::vector<CenterHost> out;
  auto add = [&](std::string name, UniformHypergraph h, VertexId anchor) {
    out.push_back({std::move(name), std::move(h), anchor});
  };
  const auto a1 = make_path(1, r);
  add("A_1 at an end", a1, a1.vertex("v0"));
  const auto a2 = make_path(2, r);
  add("A_2 at the middle", a2, a2.vertex("v1"));
  const auto e = make_E(1, 1, 1, r);
  add("E_{1,1,1} at the centre", e, e.vertex("c"));
  const auto f = make_F(1, 1, 0, r);
  add("F_{1,1,0} at c", f, f.vertex("c"));
  const auto g = make_G(0, 1, 0, 1, 0, r);
  add("G_{0,1:0:1,0} at v1", g, g.vertex("v1"));
  add("non-simple at 3", non_simple_host(r), 3);
  return out;
}

// Picks the first two leaves of `edge` as (short, long) anchors.
inline PairHost pair_host(std::string name, UniformHypergraph h, EdgeId edge) {
  const auto deg = vertex_degrees(h);
  std::vector<VertexId> leaves;
  for (VertexId v : h.edges[static_cast<std::size_t>(edge)]) {
    if (is_leaf(deg, v)) leaves.push_back(v);
  }
  PairHost p{std::move(name), std::move(h), edge, leaves.at(0), leaves.at(1)};
  return p;
}

inline std::vector<PairHost> edge_pair_hosts(int r) {
  std::vector<PairHost> out;
  {
    auto f = make_F(1, 0, 0, r);
    const EdgeId e = detail::edge_through(f, f.vertex("a"), f.vertex("b"));
    out.push_back({"F_{1,0,0} at b, c", f, e, f.vertex("b"), f.vertex("c")});
  }
  {
    auto e = make_E(1, 1, 1, r);
    const EdgeId id = detail::edge_through(e, e.vertex("c"), e.vertex("z1"));
    out.push_back(pair_host("E_{1,1,1} on the z edge", e, id));
  }
  {
    auto g = make_G(1, 0, 1, 1, 1, r);
    const EdgeId id = detail::edge_through(g, g.vertex("v0"), g.vertex("A1"));
    out.push_back(pair_host("G_{1,0:1:1,1} on the A edge", g, id));
  }
  out.push_back(pair_host("non-simple on edge 2", non_simple_host(r), 2));
  return out;
}

struct TreeInstance {
  std::string name;
  UniformHypergraph graph;
};

// Deterministic mix of path/E/F/G/BD members at r = 3 and 4 with at most
// max_edges edges.
inline std::vector<TreeInstance> tree_instances(int count, int max_edges, std::uint32_t seed) {
  std::mt19937 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<TreeInstance> out;
  while (static_cast<int>(out.size()) < count) {
    const int r = pick(3, 4);
    const int kind = pick(0, 4);
    std::string name;
    UniformHypergraph h;
    switch (kind) {
      case 0: {
        const int n = pick(1, max_edges);
        name = "A_" + std::to_string(n);
        h = make_path(n, r);
        break;
      }
      case 1: {
        const int i = pick(1, 4), j = pick(1, 4), k = pick(1, max_edges - i - j);
        name = "E_{" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "}";
        h = make_E(i, j, k, r);
        break;
      }
      case 2: {
        const int i = pick(0, 3), j = pick(0, 3), k = pick(0, max_edges - 1 - i - j);
        name = "F_{" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "}";
        h = make_F(i, j, k, r);
        break;
      }
      case 3: {
        const int i = pick(0, 2), j = pick(0, 2), l = pick(0, 2), m = pick(0, 2);
        const int k = pick(0, max_edges - 2 - i - j - l - m);
        name = "G_{" + std::to_string(i) + "," + std::to_string(j) + ":" + std::to_string(k) + ":" +
               std::to_string(l) + "," + std::to_string(m) + "}";
        h = make_G(i, j, k, l, m, r);
        break;
      }
      default: {
        const int n = pick(8, max_edges);
        name = "BD_" + std::to_string(n);
        h = make_BD(n, r);
      }
    }
    out.push_back({name + " r=" + std::to_string(r), std::move(h)});
  }
  return out;
}

struct GraftCase {
  std::string host;
  bool edge_pair = false;
  int r = 3, k = 1, l = 1;
  double margin = 0.0;        // rho(before) - rho(after)
  bool perron_ordered = true;  // long anchor >= short anchor (edge pairs)
  bool same_size = true;
};

// Every host of the battery at every l >= k >= 1 with k + l <= max_sum.
inline std::vector<GraftCase> graft_battery(int max_sum, const std::vector<int>& ranks) {
  std::vector<GraftCase> out;
  for (int r : ranks) {
    for (const auto& h : center_hosts(r)) {
      for (int s = 2; s <= max_sum; ++s) {
        for (int k = 1; 2 * k <= s; ++k) {
          const auto p = graft_center(CenterSite{h.host, h.anchor, k, s - k});
          GraftCase c{h.name, false, r, k, s - k};
          c.margin = power_method(p.before).rho - power_method(p.after).rho;
          c.same_size = p.before.num_edges() == p.after.num_edges();
          out.push_back(c);
        }
      }
    }
    for (const auto& h : edge_pair_hosts(r)) {
      for (int s = 2; s <= max_sum; ++s) {
        for (int k = 1; 2 * k <= s; ++k) {
          const auto p =
              graft_edge_pair(EdgePairSite{h.host, h.edge, h.short_anchor, h.long_anchor, k, s - k});
          const auto before = power_method(p.before);
          GraftCase c{h.name, true, r, k, s - k};
          c.margin = before.rho - power_method(p.after).rho;
          c.perron_ordered = before.perron[static_cast<std::size_t>(h.long_anchor)] >=
                             before.perron[static_cast<std::size_t>(h.short_anchor)] - 1e-12;
          c.same_size = p.before.num_edges() == p.after.num_edges();
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact-rational checks of the recurrence lemma. Near x = 0 the gaps such as
// f_{i+1} - f_i shrink like x^(i+1), below double resolution, so every
// comparison is made in mpq arithmetic at rational sample points.

struct PropertyResult {
  bool ok = true;
  long checked = 0;
  std::string detail;

  void fail(std::string what) {
    if (ok) detail = std::move(what);
    ok = false;
  }
};

// Uniform rational sample points in the open interval (0, upper).
class RationalSampler {
 public:
  explicit RationalSampler(std::uint32_t seed) : rng_(seed) {}

  // k / 2^40 with 0 < k < upper * 2^40; requires 0 < upper <= 1.
  mpq_class below(double upper) {
    const auto top = static_cast<std::uint64_t>(std::floor(std::ldexp(upper, 40)));
    std::uniform_int_distribution<std::uint64_t> dist(1, top - 1);
    mpq_class x(mpz_class(static_cast<unsigned long>(dist(rng_))), mpz_class(static_cast<unsigned long>(kDen)));
    x.canonicalize();
    return x;
  }

 private:
  static constexpr std::uint64_t kDen = std::uint64_t{1} << 40;
  std::mt19937_64 rng_;
};

inline mpq_class f_exact(int i, const mpq_class& x) { return f_value<mpq_class>(i, x); }
inline mpq_class g_exact(int i, const mpq_class& x) { return g_value<mpq_class>(i, x); }

// Strictly inside a root bracket: everything below lo is before the root.
inline double below_root(const RootBracket& b) { return b.lo; }

inline double a_root(int i) { return i == 0 ? 1.0 : below_root(root_a(i)); }
inline double b_root(int i) { return i == 0 ? 1.0 : below_root(root_b(i)); }

/// Item (1): f_i increasing on (0, a_{i-1}), g_i on (0, b_{i-1}); and
/// a_i > a_{i+1}, b_i > b_{i+1}.
inline PropertyResult check_monotonicity(int max_index, int samples, std::uint32_t seed) {
  PropertyResult res;
  RationalSampler s(seed);
  for (int i = 1; i <= max_index; ++i) {
    for (int which = 0; which < 2; ++which) {
      const double upper = which == 0 ? a_root(i - 1) : b_root(i - 1);
      for (int t = 0; t < samples; ++t) {
        mpq_class x = s.below(upper), y = s.below(upper);
        if (x == y) continue;
        if (y < x) std::swap(x, y);
        const bool up = which == 0 ? f_exact(i, x) < f_exact(i, y) : g_exact(i, x) < g_exact(i, y);
        ++res.checked;
        if (!up) res.fail((which == 0 ? "f_" : "g_") + std::to_string(i) + " not increasing");
      }
    }
    const auto ai = root_a(i), ai1 = root_a(i + 1), bi = root_b(i), bi1 = root_b(i + 1);
    if (!(ai1.hi < ai.lo)) res.fail("a_" + std::to_string(i) + " <= a_" + std::to_string(i + 1));
    if (!(bi1.hi < bi.lo)) res.fail("b_" + std::to_string(i) + " <= b_" + std::to_string(i + 1));
  }
  return res;
}

/// Item (2) for f: f_{i+1} > f_i on (0, a_i).
inline PropertyResult check_f_domination(int max_index, int samples, std::uint32_t seed) {
  PropertyResult res;
  RationalSampler s(seed);
  for (int i = 1; i <= max_index; ++i) {
    const double upper = a_root(i);
    for (int t = 0; t < samples; ++t) {
      const mpq_class x = s.below(upper);
      ++res.checked;
      if (!(f_exact(i + 1, x) > f_exact(i, x))) {
        res.fail("f_" + std::to_string(i + 1) + " <= f_" + std::to_string(i) + " at x = " + x.get_str());
      }
    }
  }
  return res;
}

/// The root x* ~ 0.245122 of x^3 - 4x^2 + 5x - 1 in (0, 1/2). g_3 - g_2 has
/// the sign of x - x*, and for i >= 3 the recurrence passes that sign on:
/// g_{i+1} - g_i = x (g_i - g_{i-1}) / ((1 - g_i)(1 - g_{i-1})).
inline RootBracket g_crossover() {
  return bisect_increasing(
      [](double x, bool& exact) {
        const long double X = x;
        const long double v = X * X * X - 4 * X * X + 5 * X - 1;
        exact = v == 0;
        return v >= 0;
      },
      0.0, 0.5, 1e-15, "g crossover");
}

/// Item (2) for g: g_{i+1} > g_i on (lower, b_i). With lower = 0 this is the
/// statement as written, which fails for every i >= 2 below x*.
inline PropertyResult check_g_domination(int max_index, int samples, std::uint32_t seed,
                                         double lower = 0.0) {
  PropertyResult res;
  RationalSampler s(seed);
  const mpq_class floor_q(lower);
  for (int i = 1; i <= max_index; ++i) {
    const double upper = b_root(i);
    for (int t = 0; t < samples; ++t) {
      mpq_class x = s.below(upper);
      if (lower > 0.0) x = floor_q + (mpq_class(upper) - floor_q) * x / mpq_class(upper);
      ++res.checked;
      if (!(g_exact(i + 1, x) > g_exact(i, x))) {
        res.fail("g_" + std::to_string(i + 1) + " <= g_" + std::to_string(i) + " at x = " +
                 std::to_string(x.get_d()));
      }
    }
  }
  return res;
}

/// Item (3): f_{i+2} < g_i on (0, c_i) with c_i = min{a_{i+1}, b_{i-1}, c_2}, i >= 2.
inline PropertyResult check_crossing(int max_index, int samples, std::uint32_t seed) {
  PropertyResult res;
  RationalSampler s(seed);
  const double c2 = below_root(root_c2());
  for (int i = 2; i <= max_index; ++i) {
    const double ci = std::min({a_root(i + 1), b_root(i - 1), c2});
    for (int t = 0; t < samples; ++t) {
      const mpq_class x = s.below(ci);
      ++res.checked;
      if (!(f_exact(i + 2, x) < g_exact(i, x))) {
        res.fail("f_" + std::to_string(i + 2) + " >= g_" + std::to_string(i));
      }
    }
  }
  return res;
}

/// The rewriting of c_i: b_{i-1} <= a_{i+1} <= c_2 for i >= 5 and
/// c_2 < a_{i+1} < b_{i-1} for 2 <= i <= 4, so root_c(i) is the minimum.
inline PropertyResult check_root_ordering(int max_index) {
  PropertyResult res;
  const auto c2 = root_c2();
  for (int i = 2; i <= max_index; ++i) {
    const auto a = root_a(i + 1), b = root_b(i - 1);
    ++res.checked;
    const std::string at = " at i=" + std::to_string(i);
    if (i >= 5) {
      if (!(b.lo <= a.hi && a.lo <= c2.hi)) res.fail("b_{i-1} <= a_{i+1} <= c_2 fails" + at);
    } else if (!(c2.hi < a.lo && a.hi < b.lo)) {
      res.fail("c_2 < a_{i+1} < b_{i-1} fails" + at);
    }
    const double expect = std::min({a.value, b.value, c2.value});
    if (std::abs(root_c(i).value - expect) > 1e-11) res.fail("root_c mismatch" + at);
  }
  return res;
}

}  // namespace hyperrho::testing
