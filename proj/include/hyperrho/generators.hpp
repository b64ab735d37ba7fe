#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "hyperrho/errors.hpp"
#include "hyperrho/hypergraph.hpp"

namespace hyperrho {

namespace detail {

// Builds a hypergraph from its "core": every edge is given by the vertices
// that matter structurally (2 for path-like edges, 3 for the branching edges
// of F and G). build() pads each edge to the target rank with fresh leaves,
// edge by edge, so core vertices always get the smallest ids.
class SkeletonBuilder {
 public:
  explicit SkeletonBuilder(int rank) : rank_(rank) {}

  VertexId add_vertex(std::string label) {
    labels_.emplace_back(std::move(label));
    return static_cast<VertexId>(labels_.size() - 1);
  }

  EdgeId add_edge(std::vector<VertexId> core) {
    if (static_cast<int>(core.size()) > rank_) {
      throw InvalidParameters("core edge larger than rank " + std::to_string(rank_));
    }
    cores_.push_back(std::move(core));
    return static_cast<EdgeId>(cores_.size() - 1);
  }

  /// Path of `length` edges hanging from `anchor`; new chain vertices are
  /// labelled prefix1..prefix<length>. Returns the chain including anchor.
  std::vector<VertexId> add_leg(VertexId anchor, int length, const std::string& prefix) {
    std::vector<VertexId> chain{anchor};
    for (int i = 1; i <= length; ++i) {
      VertexId next = add_vertex(prefix + std::to_string(i));
      add_edge({chain.back(), next});
      chain.push_back(next);
    }
    return chain;
  }

  [[nodiscard]] UniformHypergraph build() const {
    UniformHypergraph h;
    h.rank = rank_;
    int next = static_cast<int>(labels_.size());
    for (const auto& core : cores_) {
      Edge e = core;
      while (static_cast<int>(e.size()) < rank_) e.push_back(next++);
      std::sort(e.begin(), e.end());
      h.edges.push_back(std::move(e));
    }
    h.num_vertices = next;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!labels_[i].empty()) h.labels.emplace(static_cast<VertexId>(i), labels_[i]);
    }
    return h;
  }

 private:
  int rank_;
  std::vector<std::string> labels_;
  std::vector<std::vector<VertexId>> cores_;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameters(what);
}

}  // namespace detail

/// Simple path A_n^(r): n edges, chain vertices labelled v0..vn.
[[nodiscard]] inline UniformHypergraph make_path(int n, int r) {
  detail::require(n >= 1, "path needs n >= 1");
  detail::require(r >= 2, "rank must be >= 2");
  detail::SkeletonBuilder b(r);
  VertexId v0 = b.add_vertex("v0");
  b.add_leg(v0, n, "v");
  return b.build();
}

/// Cycle C_n^(r): n edges arranged cyclically, r-2 leaves per edge.
[[nodiscard]] inline UniformHypergraph make_cycle(int n, int r) {
  detail::require(r >= 2, "rank must be >= 2");
  detail::require(n >= (r == 2 ? 3 : 2), "cycle too short for rank");
  detail::SkeletonBuilder b(r);
  std::vector<VertexId> chain;
  for (int i = 0; i < n; ++i) chain.push_back(b.add_vertex("v" + std::to_string(i)));
  for (int i = 0; i < n; ++i) b.add_edge({chain[i], chain[(i + 1) % n]});
  return b.build();
}

/// E_{i,j,k}: paths of lengths i, j, k sharing the endpoint "c". Legs are
/// labelled x*, y*, z*.
[[nodiscard]] inline UniformHypergraph make_E(int i, int j, int k, int r) {
  detail::require(i >= 0 && j >= 0 && k >= 0, "E lengths must be nonnegative");
  detail::require(i + j + k >= 1, "E needs at least one edge");
  detail::require(r >= 3, "E is defined for rank >= 3");
  detail::SkeletonBuilder b(r);
  VertexId c = b.add_vertex("c");
  b.add_leg(c, i, "x");
  b.add_leg(c, j, "y");
  b.add_leg(c, k, "z");
  return b.build();
}

/// F_{i,j,k}: central edge {a,b,c} with paths of lengths i, j, k at a, b, c.
[[nodiscard]] inline UniformHypergraph make_F(int i, int j, int k, int r) {
  detail::require(i >= 0 && j >= 0 && k >= 0, "F lengths must be nonnegative");
  detail::require(r >= 3, "F is defined for rank >= 3");
  detail::SkeletonBuilder b(r);
  VertexId a = b.add_vertex("a");
  VertexId bb = b.add_vertex("b");
  VertexId c = b.add_vertex("c");
  b.add_edge({a, bb, c});
  b.add_leg(a, i, "a");
  b.add_leg(bb, j, "b");
  b.add_leg(c, k, "c");
  return b.build();
}

/// G_{i,j:k:l,m}: a core path of k+2 edges on chain v0..v<k+2>. The first
/// edge is {v0, v1, s} and the last {v<k+1>, v<k+2>, t}; paths of lengths
/// i, j, l, m hang from v0, s, v<k+2>, t (labels A*, B*, C*, D*).
[[nodiscard]] inline UniformHypergraph make_G(int i, int j, int k, int l, int m, int r) {
  detail::require(i >= 0 && j >= 0 && k >= 0 && l >= 0 && m >= 0,
                  "G lengths must be nonnegative");
  detail::require(r >= 3, "G is defined for rank >= 3");
  detail::SkeletonBuilder b(r);
  std::vector<VertexId> chain;
  for (int t = 0; t <= k + 2; ++t) chain.push_back(b.add_vertex("v" + std::to_string(t)));
  VertexId s = b.add_vertex("s");
  VertexId t = b.add_vertex("t");
  b.add_edge({chain[0], chain[1], s});
  for (int e = 2; e <= k + 1; ++e) b.add_edge({chain[e - 1], chain[e]});
  b.add_edge({chain[k + 1], chain[k + 2], t});
  b.add_leg(chain[0], i, "A");
  b.add_leg(s, j, "B");
  b.add_leg(chain[k + 2], l, "C");
  b.add_leg(t, m, "D");
  return b.build();
}

/// BD_n, reconstructed from the graft that turns F_{1,2,n-4} into
/// E_{1,1,n-2}, applied to G_{1,2:n-7:1,1}: the pendant edge on v0 moves to
/// the middle vertex of the length-2 path. The result is a fork "p" with two
/// pendants, a path u1..u<n-5> of n-5 edges, and a final edge {u<n-5>, s, t}
/// whose two other core vertices each carry one pendant edge.
[[nodiscard]] inline UniformHypergraph make_BD(int n, int r) {
  detail::require(n >= 8, "BD needs n >= 8");
  detail::require(r >= 3, "BD is defined for rank >= 3");
  detail::SkeletonBuilder b(r);
  VertexId p = b.add_vertex("p");
  auto chain = b.add_leg(p, n - 5, "u");
  VertexId s = b.add_vertex("s");
  VertexId t = b.add_vertex("t");
  b.add_edge({chain.back(), s, t});
  b.add_leg(p, 1, "f");
  b.add_leg(p, 1, "g");
  b.add_leg(s, 1, "s");
  b.add_leg(t, 1, "t");
  return b.build();
}

}  // namespace hyperrho
