#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperrho/errors.hpp"

namespace hyperrho {

using VertexId = int;
using EdgeId = int;
using Edge = std::vector<VertexId>;

/// An r-uniform hypergraph on vertices 0..num_vertices-1.
///
/// The struct is a plain value; nothing is enforced at construction time so
/// that files and hand-built instances can be inspected with validate().
/// Every library routine that needs the invariants calls require_valid().
/// Vertex lists inside an edge are kept sorted by the generators and by the
/// JSON reader, which makes operator== a structural comparison.
struct UniformHypergraph {
  int rank = 2;
  int num_vertices = 0;
  std::vector<Edge> edges;
  std::map<VertexId, std::string> labels;

  [[nodiscard]] int num_edges() const { return static_cast<int>(edges.size()); }

  [[nodiscard]] std::optional<VertexId> find_label(std::string_view name) const {
    for (const auto& [id, label] : labels) {
      if (label == name) return id;
    }
    return std::nullopt;
  }

  /// Vertex carrying a generator label; throws if absent.
  [[nodiscard]] VertexId vertex(std::string_view name) const {
    if (auto id = find_label(name)) return *id;
    throw InvalidHypergraph("no vertex labelled '" + std::string(name) + "'");
  }

  bool operator==(const UniformHypergraph&) const = default;
};

struct Violation {
  std::string message;
  std::optional<EdgeId> edge;
  std::optional<VertexId> vertex;
};

[[nodiscard]] inline std::vector<Violation> validate(const UniformHypergraph& h) {
  std::vector<Violation> out;
  if (h.rank < 2) out.push_back({"rank " + std::to_string(h.rank) + " < 2", {}, {}});
  if (h.num_vertices < 1) {
    out.push_back({"vertex count " + std::to_string(h.num_vertices) + " < 1", {}, {}});
  }
  std::set<Edge> seen;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    const Edge& edge = h.edges[static_cast<std::size_t>(e)];
    const std::string where = "edge " + std::to_string(e);
    if (static_cast<int>(edge.size()) != h.rank) {
      out.push_back({where + " has " + std::to_string(edge.size()) + " vertices, expected " +
                         std::to_string(h.rank),
                     e, {}});
    }
    for (VertexId v : edge) {
      if (v < 0 || v >= h.num_vertices) {
        out.push_back({where + " references vertex " + std::to_string(v) + " outside [0, " +
                           std::to_string(h.num_vertices) + ")",
                       e, v});
      }
    }
    Edge sorted = edge;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
      out.push_back({where + " has duplicate vertex " + std::to_string(*dup), e, *dup});
    }
    if (!seen.insert(sorted).second) out.push_back({where + " is a duplicate edge", e, {}});
  }
  for (const auto& [id, label] : h.labels) {
    if (id < 0 || id >= h.num_vertices) {
      out.push_back({"label '" + label + "' on out-of-range vertex " + std::to_string(id), {}, id});
    }
  }
  return out;
}

inline void require_valid(const UniformHypergraph& h) {
  auto problems = validate(h);
  if (problems.empty()) return;
  std::string msg = "invalid hypergraph:";
  for (const auto& p : problems) msg += " " + p.message + ";";
  throw InvalidHypergraph(msg);
}

/// Edge ids incident with each vertex, in increasing edge order.
[[nodiscard]] inline std::vector<std::vector<EdgeId>> incidence_lists(const UniformHypergraph& h) {
  std::vector<std::vector<EdgeId>> inc(static_cast<std::size_t>(h.num_vertices));
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    for (VertexId v : h.edges[static_cast<std::size_t>(e)]) {
      inc[static_cast<std::size_t>(v)].push_back(e);
    }
  }
  return inc;
}

[[nodiscard]] inline std::vector<int> vertex_degrees(const UniformHypergraph& h) {
  std::vector<int> deg(static_cast<std::size_t>(h.num_vertices), 0);
  for (const Edge& e : h.edges) {
    for (VertexId v : e) ++deg[static_cast<std::size_t>(v)];
  }
  return deg;
}

[[nodiscard]] inline int max_degree(const UniformHypergraph& h) {
  auto deg = vertex_degrees(h);
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

[[nodiscard]] inline bool is_leaf(const std::vector<int>& degrees, VertexId v) {
  return degrees[static_cast<std::size_t>(v)] == 1;
}

/// Connected components of the vertex-edge incidence graph, as a component
/// index per vertex. Isolated vertices get their own component.
[[nodiscard]] inline std::vector<int> vertex_components(const UniformHypergraph& h) {
  const auto inc = incidence_lists(h);
  std::vector<int> comp(static_cast<std::size_t>(h.num_vertices), -1);
  int next = 0;
  for (VertexId s = 0; s < h.num_vertices; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::queue<VertexId> q;
    q.push(s);
    comp[static_cast<std::size_t>(s)] = next;
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      for (EdgeId e : inc[static_cast<std::size_t>(v)]) {
        for (VertexId u : h.edges[static_cast<std::size_t>(e)]) {
          if (comp[static_cast<std::size_t>(u)] < 0) {
            comp[static_cast<std::size_t>(u)] = next;
            q.push(u);
          }
        }
      }
    }
    ++next;
  }
  return comp;
}

[[nodiscard]] inline bool is_connected(const UniformHypergraph& h) {
  if (h.num_vertices <= 0) return false;
  auto comp = vertex_components(h);
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

/// Every pair of edges meets in at most one vertex.
[[nodiscard]] inline bool is_simple(const UniformHypergraph& h) {
  std::map<std::pair<VertexId, VertexId>, int> pair_count;
  for (const Edge& e : h.edges) {
    for (std::size_t a = 0; a < e.size(); ++a) {
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        auto key = std::minmax(e[a], e[b]);
        if (++pair_count[{key.first, key.second}] > 1) return false;
      }
    }
  }
  return true;
}

/// True when the bipartite vertex-edge incidence graph is a forest, i.e. every
/// edge is a bridge in the hypergraph sense.
[[nodiscard]] inline bool is_incidence_acyclic(const UniformHypergraph& h) {
  auto comp = vertex_components(h);
  std::set<int> components(comp.begin(), comp.end());
  long incidences = 0;
  for (const Edge& e : h.edges) incidences += static_cast<long>(e.size());
  return incidences ==
         static_cast<long>(h.num_vertices) + h.num_edges() - static_cast<long>(components.size());
}

/// Adds one fresh vertex to every edge. Edge i receives vertex
/// num_vertices + i; labels are carried over unchanged.
[[nodiscard]] inline UniformHypergraph extend(const UniformHypergraph& h) {
  UniformHypergraph out = h;
  out.rank = h.rank + 1;
  out.num_vertices = h.num_vertices + h.num_edges();
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    out.edges[static_cast<std::size_t>(e)].push_back(h.num_vertices + e);
  }
  return out;
}

[[nodiscard]] inline UniformHypergraph extend(const UniformHypergraph& h, int times) {
  UniformHypergraph out = h;
  for (int i = 0; i < times; ++i) out = extend(out);
  return out;
}

namespace detail {

// Bipartite incidence graph: nodes [0, V) are vertices, [V, V+E) are edges.
inline std::vector<std::vector<int>> incidence_graph(const UniformHypergraph& h) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(h.num_vertices + h.num_edges()));
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    const int node = h.num_vertices + e;
    for (VertexId v : h.edges[static_cast<std::size_t>(e)]) {
      adj[static_cast<std::size_t>(node)].push_back(v);
      adj[static_cast<std::size_t>(v)].push_back(node);
    }
  }
  return adj;
}

inline std::string tree_code(const std::vector<std::vector<int>>& adj, int num_vertices, int node,
                             int parent) {
  std::vector<std::string> children;
  for (int next : adj[static_cast<std::size_t>(node)]) {
    if (next != parent) children.push_back(tree_code(adj, num_vertices, next, node));
  }
  std::sort(children.begin(), children.end());
  std::string code(1, node < num_vertices ? 'v' : 'e');
  code += '(';
  for (const auto& c : children) code += c;
  code += ')';
  return code;
}

// Canonical AHU string of an incidence tree, minimised over its centres.
inline std::string canonical_tree_code(const UniformHypergraph& h) {
  const auto adj = incidence_graph(h);
  const int total = static_cast<int>(adj.size());
  std::vector<int> degree(static_cast<std::size_t>(total));
  std::vector<int> layer;
  for (int i = 0; i < total; ++i) {
    degree[static_cast<std::size_t>(i)] = static_cast<int>(adj[static_cast<std::size_t>(i)].size());
    if (degree[static_cast<std::size_t>(i)] <= 1) layer.push_back(i);
  }
  int remaining = total;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int leaf : layer) {
      for (int nb : adj[static_cast<std::size_t>(leaf)]) {
        if (--degree[static_cast<std::size_t>(nb)] == 1) next.push_back(nb);
      }
    }
    layer = std::move(next);
  }
  std::string best;
  for (int centre : layer) {
    auto code = tree_code(adj, h.num_vertices, centre, -1);
    if (best.empty() || code < best) best = code;
  }
  return best;
}

// Colour-refinement histogram on the incidence graph; a necessary condition
// for isomorphism only.
inline bool refinement_equivalent(const UniformHypergraph& a, const UniformHypergraph& b) {
  const auto adj_a = incidence_graph(a);
  const auto adj_b = incidence_graph(b);
  auto initial = [](const UniformHypergraph& h, const std::vector<std::vector<int>>& adj) {
    std::vector<std::pair<int, int>> c(adj.size());
    for (std::size_t i = 0; i < adj.size(); ++i) {
      c[i] = {static_cast<int>(i) < h.num_vertices ? 0 : 1, static_cast<int>(adj[i].size())};
    }
    return c;
  };
  std::map<std::pair<int, int>, int> first_palette;
  auto ia = initial(a, adj_a);
  auto ib = initial(b, adj_b);
  for (const auto& c : ia) first_palette.emplace(c, static_cast<int>(first_palette.size()));
  for (const auto& c : ib) first_palette.emplace(c, static_cast<int>(first_palette.size()));
  std::vector<int> ca(ia.size()), cb(ib.size());
  for (std::size_t i = 0; i < ia.size(); ++i) ca[i] = first_palette[ia[i]];
  for (std::size_t i = 0; i < ib.size(); ++i) cb[i] = first_palette[ib[i]];

  auto histogram = [](const std::vector<int>& c) {
    std::vector<int> s = c;
    std::sort(s.begin(), s.end());
    return s;
  };
  const std::size_t rounds = adj_a.size() + 1;
  for (std::size_t round = 0; round < rounds; ++round) {
    if (histogram(ca) != histogram(cb)) return false;
    std::map<std::pair<int, std::vector<int>>, int> palette;
    auto signature = [](const std::vector<std::vector<int>>& adj, const std::vector<int>& c,
                        std::size_t i) {
      std::vector<int> nb;
      for (int j : adj[i]) nb.push_back(c[static_cast<std::size_t>(j)]);
      std::sort(nb.begin(), nb.end());
      return std::make_pair(c[i], nb);
    };
    std::vector<std::pair<int, std::vector<int>>> sa, sb;
    for (std::size_t i = 0; i < ca.size(); ++i) sa.push_back(signature(adj_a, ca, i));
    for (std::size_t i = 0; i < cb.size(); ++i) sb.push_back(signature(adj_b, cb, i));
    for (const auto& s : sa) palette.emplace(s, static_cast<int>(palette.size()));
    for (const auto& s : sb) palette.emplace(s, static_cast<int>(palette.size()));
    for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = palette[sa[i]];
    for (std::size_t i = 0; i < cb.size(); ++i) cb[i] = palette[sb[i]];
  }
  return histogram(ca) == histogram(cb);
}

}  // namespace detail

/// Isomorphism test. Exact for connected hypergraphs whose incidence graph is
/// a tree (canonical rooted-tree encoding); otherwise falls back to degree
/// sequence plus colour refinement, which can report false positives on
/// highly regular inputs.
[[nodiscard]] inline bool isomorphic(const UniformHypergraph& a, const UniformHypergraph& b) {
  if (a.rank != b.rank || a.num_vertices != b.num_vertices || a.num_edges() != b.num_edges()) {
    return false;
  }
  auto da = vertex_degrees(a);
  auto db = vertex_degrees(b);
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return false;
  const bool trees = is_connected(a) && is_connected(b) && is_incidence_acyclic(a) &&
                     is_incidence_acyclic(b);
  if (trees) return detail::canonical_tree_code(a) == detail::canonical_tree_code(b);
  return detail::refinement_equivalent(a, b);
}

}  // namespace hyperrho
