#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperrho/errors.hpp"
#include "hyperrho/hypergraph.hpp"
#include "hyperrho/spectral.hpp"

namespace hyperrho {

/// Sparse weighted incidence matrix B(v, e). Only incidence pairs carry
/// entries; check_certificate rejects anything else.
class WeightedIncidenceMatrix {
 public:
  using Key = std::pair<VertexId, EdgeId>;

  void set(VertexId v, EdgeId e, double w) { weights_[{v, e}] = w; }

  [[nodiscard]] std::optional<double> get(VertexId v, EdgeId e) const {
    auto it = weights_.find({v, e});
    if (it == weights_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] double at(VertexId v, EdgeId e) const {
    auto it = weights_.find({v, e});
    if (it == weights_.end()) {
      throw CertificateError("no weight for vertex " + std::to_string(v) + " in edge " +
                             std::to_string(e));
    }
    return it->second;
  }

  [[nodiscard]] bool contains(VertexId v, EdgeId e) const { return weights_.count({v, e}) != 0; }
  [[nodiscard]] std::size_t size() const { return weights_.size(); }
  [[nodiscard]] const std::map<Key, double>& entries() const { return weights_; }

  bool operator==(const WeightedIncidenceMatrix&) const = default;

 private:
  std::map<Key, double> weights_;
};

/// Leaf incidences carry the trivial weight 1 in any normal labelling; fill
/// them in where the caller left them out.
[[nodiscard]] inline WeightedIncidenceMatrix with_leaf_defaults(const UniformHypergraph& h,
                                                                WeightedIncidenceMatrix b) {
  const auto deg = vertex_degrees(h);
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    for (VertexId v : h.edges[static_cast<std::size_t>(e)]) {
      if (is_leaf(deg, v) && !b.contains(v, e)) b.set(v, e, 1.0);
    }
  }
  return b;
}

/// Throws CertificateError unless B is finite and positive on exactly the
/// incidences of H (leaf incidences may be omitted).
inline void require_coverage(const UniformHypergraph& h, const WeightedIncidenceMatrix& b) {
  const auto deg = vertex_degrees(h);
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    for (VertexId v : h.edges[static_cast<std::size_t>(e)]) {
      auto w = b.get(v, e);
      if (!w) {
        if (is_leaf(deg, v)) continue;
        throw CertificateError("coverage gap: no weight for vertex " + std::to_string(v) +
                               " in edge " + std::to_string(e));
      }
      if (!(std::isfinite(*w) && *w > 0)) {
        throw CertificateError("weight for vertex " + std::to_string(v) + " in edge " +
                               std::to_string(e) + " is not positive");
      }
    }
  }
  for (const auto& [key, w] : b.entries()) {
    const auto [v, e] = key;
    if (e < 0 || e >= h.num_edges()) {
      throw CertificateError("entry references missing edge " + std::to_string(e));
    }
    const Edge& edge = h.edges[static_cast<std::size_t>(e)];
    if (std::find(edge.begin(), edge.end(), v) == edge.end()) {
      throw CertificateError("entry for vertex " + std::to_string(v) + " which is not in edge " +
                             std::to_string(e));
    }
  }
}

enum class CertificateKind { Normal, Subnormal, Supernormal, Invalid };

[[nodiscard]] inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::Normal: return "normal";
    case CertificateKind::Subnormal: return "subnormal";
    case CertificateKind::Supernormal: return "supernormal";
    case CertificateKind::Invalid: return "invalid";
  }
  return "invalid";
}

/// A vertex sum or edge product that misses its normal value by more than tol.
struct ConditionViolation {
  enum class Site { Vertex, Edge };
  Site site = Site::Vertex;
  int index = 0;
  double lhs = 0.0;  // the sum (vertex) or product (edge)
  double rhs = 0.0;  // 1 or alpha
};

struct ConsistencyResult {
  bool consistent = true;
  /// |log| of the worst fundamental-cycle product.
  double deviation = 0.0;
  /// Witness cycle v0 e1 v1 ... e_l v_l (= v0) when inconsistent.
  std::vector<VertexId> cycle_vertices;
  std::vector<EdgeId> cycle_edges;
};

struct CertificateVerdict {
  CertificateKind kind = CertificateKind::Invalid;
  bool strict = false;
  double alpha = 0.0;
  std::vector<ConditionViolation> violations;
  std::optional<bool> consistent;  // evaluated unless kind == Invalid
  ConsistencyResult consistency;
};

/// Checks the cycle condition prod B(v_i, e_i) / B(v_{i-1}, e_i) = 1 on a
/// fundamental cycle basis of the vertex-edge incidence graph.
///
/// Taking logs, the condition holds on every cycle iff there are potentials
/// p(v), c(e) with log B(v, e) = p(v) + c(e) on every incidence. The
/// potentials are fixed along a BFS spanning tree; each co-tree incidence
/// closes exactly one fundamental cycle, whose log-product is that
/// incidence's residual.
[[nodiscard]] inline ConsistencyResult check_consistency(const UniformHypergraph& h,
                                                         const WeightedIncidenceMatrix& weights,
                                                         double tol = 1e-9) {
  require_coverage(h, weights);
  const auto b = with_leaf_defaults(h, weights);
  const auto adj = detail::incidence_graph(h);
  const int nv = h.num_vertices;
  const std::size_t total = adj.size();
  auto log_weight = [&](int a, int c) {
    const VertexId v = a < nv ? a : c;
    const EdgeId e = (a < nv ? c : a) - nv;
    return std::log(static_cast<long double>(b.at(v, e)));
  };

  std::vector<long double> potential(total, 0);
  std::vector<int> parent(total, -2), depth(total, 0);
  ConsistencyResult out;
  std::pair<int, int> worst_chord{-1, -1};
  for (std::size_t s = 0; s < total; ++s) {
    if (parent[s] != -2) continue;
    parent[s] = -1;
    std::vector<int> queue{static_cast<int>(s)};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int a = queue[head];
      for (int c : adj[static_cast<std::size_t>(a)]) {
        if (parent[static_cast<std::size_t>(c)] == -2) {
          parent[static_cast<std::size_t>(c)] = a;
          depth[static_cast<std::size_t>(c)] = depth[static_cast<std::size_t>(a)] + 1;
          potential[static_cast<std::size_t>(c)] =
              log_weight(a, c) - potential[static_cast<std::size_t>(a)];
          queue.push_back(c);
        } else if (parent[static_cast<std::size_t>(a)] != c && a < c) {
          const long double residual = log_weight(a, c) - potential[static_cast<std::size_t>(a)] -
                                       potential[static_cast<std::size_t>(c)];
          const double dev = static_cast<double>(std::fabs(residual));
          if (dev > out.deviation) {
            out.deviation = dev;
            worst_chord = {a, c};
          }
        }
      }
    }
  }
  // A multi-incidence can only arise from a repeated vertex, which
  // require_coverage's host would already have rejected.
  out.consistent = out.deviation <= tol;
  if (out.consistent || worst_chord.first < 0) return out;

  // Fundamental cycle of the worst chord: tree path a -> lca <- c, closed by
  // the chord itself.
  auto [a, c] = worst_chord;
  std::vector<int> up_a{a}, up_c{c};
  while (up_a.back() != up_c.back()) {
    const int da = depth[static_cast<std::size_t>(up_a.back())];
    const int dc = depth[static_cast<std::size_t>(up_c.back())];
    if (da >= dc) up_a.push_back(parent[static_cast<std::size_t>(up_a.back())]);
    else up_c.push_back(parent[static_cast<std::size_t>(up_c.back())]);
  }
  std::vector<int> cycle = up_a;
  for (auto it = up_c.rbegin() + 1; it != up_c.rend(); ++it) cycle.push_back(*it);
  // cycle runs a ... c; the chord c-a closes it. Rotate so it starts at a vertex.
  auto first_vertex = std::find_if(cycle.begin(), cycle.end(), [nv](int x) { return x < nv; });
  std::rotate(cycle.begin(), first_vertex, cycle.end());
  for (int x : cycle) {
    if (x < nv) out.cycle_vertices.push_back(x);
    else out.cycle_edges.push_back(x - nv);
  }
  out.cycle_vertices.push_back(out.cycle_vertices.front());
  return out;
}

/// Classifies B against the normal, subnormal and supernormal conditions at
/// alpha. Equality means within +-tol; a sub/supernormal verdict is strict
/// when some condition clears equality by more than tol.
[[nodiscard]] inline CertificateVerdict check_certificate(const UniformHypergraph& h,
                                                          const WeightedIncidenceMatrix& weights,
                                                          double alpha, double tol = 1e-9) {
  require_valid(h);
  require_coverage(h, weights);
  const auto b = with_leaf_defaults(h, weights);
  const auto inc = incidence_lists(h);

  CertificateVerdict v;
  v.alpha = alpha;
  bool sums_le = true, sums_ge = true, prods_le = true, prods_ge = true;
  for (VertexId x = 0; x < h.num_vertices; ++x) {
    long double sum = 0;
    for (EdgeId e : inc[static_cast<std::size_t>(x)]) sum += b.at(x, e);
    if (inc[static_cast<std::size_t>(x)].empty()) continue;
    const double s = static_cast<double>(sum);
    if (s > 1 + tol) sums_le = false;
    if (s < 1 - tol) sums_ge = false;
    if (std::fabs(s - 1) > tol) {
      v.violations.push_back({ConditionViolation::Site::Vertex, x, s, 1.0});
    }
  }
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    long double prod = 1;
    for (VertexId x : h.edges[static_cast<std::size_t>(e)]) prod *= b.at(x, e);
    const double p = static_cast<double>(prod);
    if (p > alpha + tol) prods_le = false;
    if (p < alpha - tol) prods_ge = false;
    if (std::fabs(p - alpha) > tol) {
      v.violations.push_back({ConditionViolation::Site::Edge, e, p, alpha});
    }
  }
  if (v.violations.empty()) {
    v.kind = CertificateKind::Normal;
  } else if (sums_le && prods_ge) {
    v.kind = CertificateKind::Subnormal;
    v.strict = true;
  } else if (sums_ge && prods_le) {
    v.kind = CertificateKind::Supernormal;
    v.strict = true;
  } else {
    v.kind = CertificateKind::Invalid;
  }
  if (v.kind != CertificateKind::Invalid) {
    v.consistency = check_consistency(h, b, tol);
    v.consistent = v.consistency.consistent;
  }
  return v;
}

/// A connected incidence tree rooted at a vertex, in BFS order.
struct RootedIncidenceTree {
  VertexId root = 0;
  std::vector<int> order;   // incidence-graph nodes, root first
  std::vector<int> parent;  // parent node, -1 for the root
};

[[nodiscard]] inline RootedIncidenceTree root_incidence_tree(const UniformHypergraph& h,
                                                             std::optional<VertexId> root = {}) {
  require_valid(h);
  if (!is_connected(h)) throw DisconnectedInput("incidence tree needs a connected hypergraph");
  if (!is_incidence_acyclic(h)) {
    throw CyclicInput("hypergraph has a cycle; the tree solver needs every edge to be a bridge");
  }
  RootedIncidenceTree t;
  if (root) {
    t.root = *root;
  } else {
    const auto deg = vertex_degrees(h);
    t.root = static_cast<VertexId>(std::max_element(deg.begin(), deg.end()) - deg.begin());
  }
  const auto adj = detail::incidence_graph(h);
  t.parent.assign(adj.size(), -2);
  t.parent[static_cast<std::size_t>(t.root)] = -1;
  t.order.push_back(t.root);
  for (std::size_t head = 0; head < t.order.size(); ++head) {
    const int a = t.order[head];
    for (int c : adj[static_cast<std::size_t>(a)]) {
      if (t.parent[static_cast<std::size_t>(c)] == -2) {
        t.parent[static_cast<std::size_t>(c)] = a;
        t.order.push_back(c);
      }
    }
  }
  return t;
}

struct Propagation {
  bool feasible = true;  // every intermediate weight stayed positive
  long double root_sum = 0;
  WeightedIncidenceMatrix weights;
};

/// Fixes alpha and labels the tree from the leaves up: a non-root vertex puts
/// 1 - (sum over its child edges) on its parent edge, and an edge puts
/// alpha / (product over its child vertices) on its parent vertex. Every
/// vertex except the root then sums to 1 and every edge multiplies to alpha.
[[nodiscard]] inline Propagation propagate_tree(const UniformHypergraph& h,
                                                const RootedIncidenceTree& tree,
                                                long double alpha) {
  const int nv = h.num_vertices;
  // value[node]: for a vertex node, B(v, parent edge); for an edge node,
  // B(parent vertex, e).
  std::vector<long double> value(tree.parent.size(), 0);
  std::vector<long double> child_acc(tree.parent.size(), 0);
  for (std::size_t i = 0; i < tree.parent.size(); ++i) child_acc[i] = i < static_cast<std::size_t>(nv) ? 0 : 1;
  Propagation out;
  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    const int node = *it;
    const int up = tree.parent[static_cast<std::size_t>(node)];
    if (node < nv) {
      const long double w = 1 - child_acc[static_cast<std::size_t>(node)];
      if (up < 0) {
        out.root_sum = child_acc[static_cast<std::size_t>(node)];
        continue;
      }
      if (!(w > 0)) {
        out.feasible = false;
        return out;
      }
      value[static_cast<std::size_t>(node)] = w;
      child_acc[static_cast<std::size_t>(up)] *= w;
    } else {
      const long double w = alpha / child_acc[static_cast<std::size_t>(node)];
      value[static_cast<std::size_t>(node)] = w;
      child_acc[static_cast<std::size_t>(up)] += w;
    }
  }
  for (std::size_t node = 1; node < tree.order.size(); ++node) {
    const int id = tree.order[node];
    const int up = tree.parent[static_cast<std::size_t>(id)];
    if (id < nv) out.weights.set(id, up - nv, static_cast<double>(value[static_cast<std::size_t>(id)]));
    else out.weights.set(up, id - nv, static_cast<double>(value[static_cast<std::size_t>(id)]));
  }
  return out;
}

struct TreeSolution {
  double alpha = 0.0;
  WeightedIncidenceMatrix weights;
  VertexId root = 0;
  double phi = 0.0;  // root sum - 1 at the returned alpha
};

/// Consistent alpha of a hypergraph whose incidence graph is a tree, together
/// with its normal labelling. Bisects phi(alpha) = (root sum) - 1 on
/// [1e-6, 1]; phi increases with alpha and an infeasible labelling means
/// alpha is too large.
[[nodiscard]] inline TreeSolution solve_tree_alpha(const UniformHypergraph& h, double tol = 1e-9) {
  const auto tree = root_incidence_tree(h);
  auto phi = [&](long double a) -> std::optional<long double> {
    auto p = propagate_tree(h, tree, a);
    if (!p.feasible) return std::nullopt;
    return p.root_sum - 1;
  };
  long double lo = 1e-6L, hi = 1.0L;
  auto phi_lo = phi(lo);
  if (!phi_lo || *phi_lo >= 0) throw BracketError("solve_tree_alpha: alpha below 1e-6");
  auto phi_hi = phi(hi);
  if (phi_hi && *phi_hi < 0) throw BracketError("solve_tree_alpha: no root up to alpha = 1");
  if (!(phi_hi && *phi_hi == 0)) {
    for (int it = 0; it < 200; ++it) {
      const long double mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      auto v = phi(mid);
      if (!v || *v > 0) {
        hi = mid;
        phi_hi = v;
      } else if (*v < 0) {
        lo = mid;
        phi_lo = v;
      } else {
        lo = hi = mid;
        phi_lo = phi_hi = v;
        break;
      }
    }
  } else {
    lo = hi;
    phi_lo = phi_hi;
  }
  long double best = lo;
  long double best_phi = *phi_lo;
  if (phi_hi && std::fabs(*phi_hi) < std::fabs(best_phi)) {
    best = hi;
    best_phi = *phi_hi;
  }
  if (std::fabs(best_phi) > tol) {
    throw BracketError("solve_tree_alpha: |phi| = " + std::to_string(static_cast<double>(best_phi)) +
                       " exceeds tolerance");
  }
  TreeSolution s;
  s.alpha = static_cast<double>(best);
  s.root = tree.root;
  s.phi = static_cast<double>(best_phi);
  s.weights = with_leaf_defaults(h, propagate_tree(h, tree, best).weights);
  return s;
}

/// Consistent normal labelling read off a Perron vector:
/// B(v, e) = (r-1)! prod_{u in e, u != v} x_u / (rho x_v^(r-1)).
/// Works for any connected hypergraph, cycles included.
struct PerronCertificate {
  double alpha = 0.0;
  WeightedIncidenceMatrix weights;
};

[[nodiscard]] inline PerronCertificate certificate_from_perron(const UniformHypergraph& h,
                                                               std::span<const double> x,
                                                               double rho) {
  detail::require_dimension(h, x.size());
  const long double coef = factorial(h.rank - 1);
  PerronCertificate out;
  out.alpha = std::pow(static_cast<double>(coef) / rho, h.rank);
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    const Edge& edge = h.edges[static_cast<std::size_t>(e)];
    for (VertexId v : edge) {
      long double others = 1;
      for (VertexId u : edge) {
        if (u != v) others *= x[static_cast<std::size_t>(u)];
      }
      const long double xv = x[static_cast<std::size_t>(v)];
      long double denom = rho;
      for (int i = 0; i < h.rank - 1; ++i) denom *= xv;
      out.weights.set(v, e, static_cast<double>(coef * others / denom));
    }
  }
  return out;
}

/// Max over edges of the relative spread of { B(v, e)^(1/r) x_v : v in e }.
/// Zero when x is the Perron vector and B a consistent normal labelling.
[[nodiscard]] inline double perron_consistency_check(const UniformHypergraph& h,
                                                     const WeightedIncidenceMatrix& weights,
                                                     double /*alpha*/, std::span<const double> x) {
  detail::require_dimension(h, x.size());
  const auto b = with_leaf_defaults(h, weights);
  double worst = 0.0;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    long double lo = INFINITY, hi = 0, sum = 0;
    for (VertexId v : h.edges[static_cast<std::size_t>(e)]) {
      const long double t = std::pow(static_cast<long double>(b.at(v, e)), 1.0L / h.rank) *
                            x[static_cast<std::size_t>(v)];
      lo = std::min(lo, t);
      hi = std::max(hi, t);
      sum += t;
    }
    const long double mean = sum / h.rank;
    worst = std::max(worst, static_cast<double>((hi - lo) / mean));
  }
  return worst;
}

}  // namespace hyperrho
