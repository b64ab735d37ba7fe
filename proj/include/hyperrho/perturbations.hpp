#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperrho/certificates.hpp"
#include "hyperrho/errors.hpp"
#include "hyperrho/generators.hpp"
#include "hyperrho/hypergraph.hpp"
#include "hyperrho/recurrences.hpp"
#include "hyperrho/spectral.hpp"

namespace hyperrho {

/// Strict-inequality margin for the perturbation theorems; sits well above
/// the power method's default 1e-12 stopping tolerance.
inline constexpr double kTheoremMargin = 1e-9;

/// A pendant path: chain[0] is the attachment vertex, edges[j] joins
/// chain[j] and chain[j+1].
struct Leg {
  std::vector<EdgeId> edges;
  std::vector<VertexId> chain;
};

/// Appends a path of `length` edges at `anchor`, each edge carrying r-2
/// fresh leaves. New chain vertices are labelled <prefix>1..<prefix><length>.
inline Leg attach_path(UniformHypergraph& h, VertexId anchor, int length,
                       const std::string& prefix = {}) {
  Leg leg;
  leg.chain.push_back(anchor);
  for (int j = 1; j <= length; ++j) {
    const VertexId next = h.num_vertices++;
    if (!prefix.empty()) h.labels[next] = prefix + std::to_string(j);
    Edge e{leg.chain.back(), next};
    for (int t = 2; t < h.rank; ++t) e.push_back(h.num_vertices++);
    std::sort(e.begin(), e.end());
    leg.edges.push_back(h.num_edges());
    h.edges.push_back(std::move(e));
    leg.chain.push_back(next);
  }
  return leg;
}

/// H_{k,l}: paths of lengths k and l attached at one vertex of the host.
struct CenterSite {
  UniformHypergraph host;
  VertexId anchor = 0;
  int k = 1;
  int l = 1;
};

/// H~_{k,l}: inside one host edge, the short path (length k) hangs from
/// short_anchor and the long path (length l) from long_anchor. Both anchors
/// are host leaves and the edge also holds a non-leaf vertex.
struct EdgePairSite {
  UniformHypergraph host;
  EdgeId edge = 0;
  VertexId short_anchor = 0;
  VertexId long_anchor = 0;
  int k = 1;
  int l = 1;
};

/// Both sides of a graft. Host vertices and edges keep their ids in both
/// graphs; the legs are appended after them.
struct GraftedPair {
  UniformHypergraph before;  // legs (k, l)
  UniformHypergraph after;   // legs (k-1, l+1)
  Leg before_short, before_long;
  Leg after_short, after_long;
};

namespace detail {

inline void check_lengths(int k, int l) {
  if (!(k >= 1 && l >= k)) throw InvalidSite("graft needs l >= k >= 1");
}

inline void check_host(const UniformHypergraph& host) {
  require_valid(host);
  if (host.num_edges() == 0 || !is_connected(host)) {
    throw InvalidSite("graft host must be a nontrivial connected hypergraph");
  }
}

inline GraftedPair graft(const UniformHypergraph& host, VertexId short_anchor,
                         VertexId long_anchor, int k, int l) {
  GraftedPair p;
  p.before = host;
  p.before_short = attach_path(p.before, short_anchor, k, "short");
  p.before_long = attach_path(p.before, long_anchor, l, "long");
  p.after = host;
  p.after_short = attach_path(p.after, short_anchor, k - 1, "short");
  p.after_long = attach_path(p.after, long_anchor, l + 1, "long");
  return p;
}

}  // namespace detail

[[nodiscard]] inline GraftedPair graft_center(const CenterSite& site) {
  detail::check_lengths(site.k, site.l);
  detail::check_host(site.host);
  if (site.anchor < 0 || site.anchor >= site.host.num_vertices) {
    throw InvalidSite("anchor outside the host");
  }
  if (vertex_degrees(site.host)[static_cast<std::size_t>(site.anchor)] < 1) {
    throw InvalidSite("anchor must lie on a host edge");
  }
  return detail::graft(site.host, site.anchor, site.anchor, site.k, site.l);
}

[[nodiscard]] inline GraftedPair graft_edge_pair(const EdgePairSite& site) {
  detail::check_lengths(site.k, site.l);
  detail::check_host(site.host);
  if (site.host.rank < 3) throw InvalidSite("edge-pair graft needs rank >= 3");
  if (site.edge < 0 || site.edge >= site.host.num_edges()) throw InvalidSite("edge outside host");
  const Edge& e = site.host.edges[static_cast<std::size_t>(site.edge)];
  auto in_edge = [&](VertexId v) { return std::find(e.begin(), e.end(), v) != e.end(); };
  if (site.short_anchor == site.long_anchor || !in_edge(site.short_anchor) ||
      !in_edge(site.long_anchor)) {
    throw InvalidSite("anchors must be two distinct vertices of the edge");
  }
  const auto deg = vertex_degrees(site.host);
  if (!is_leaf(deg, site.short_anchor) || !is_leaf(deg, site.long_anchor)) {
    throw InvalidSite("anchors must be leaves of the host");
  }
  const bool has_branch = std::any_of(e.begin(), e.end(), [&](VertexId w) {
    return w != site.short_anchor && w != site.long_anchor && deg[static_cast<std::size_t>(w)] >= 2;
  });
  if (!has_branch) throw InvalidSite("edge needs a non-leaf vertex besides the anchors");
  return detail::graft(site.host, site.short_anchor, site.long_anchor, site.k, site.l);
}

/// An edge with exactly two non-leaf vertices u < v whose removal (together
/// with its leaves) separates u from v.
struct TwoBridge {
  EdgeId edge = 0;
  VertexId u = 0;
  VertexId v = 0;
  std::vector<VertexId> side_u;  // component of u after removal
  std::vector<VertexId> side_v;
};

namespace detail {

inline std::vector<VertexId> reach_without(const UniformHypergraph& h,
                                           const std::vector<std::vector<EdgeId>>& inc,
                                           EdgeId removed, VertexId start) {
  std::vector<char> seen(static_cast<std::size_t>(h.num_vertices), 0);
  std::vector<VertexId> out{start};
  seen[static_cast<std::size_t>(start)] = 1;
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (EdgeId e : inc[static_cast<std::size_t>(out[head])]) {
      if (e == removed) continue;
      for (VertexId w : h.edges[static_cast<std::size_t>(e)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          out.push_back(w);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

[[nodiscard]] inline std::vector<TwoBridge> find_2bridges(const UniformHypergraph& h) {
  require_valid(h);
  const auto deg = vertex_degrees(h);
  const auto inc = incidence_lists(h);
  std::vector<TwoBridge> out;
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    std::vector<VertexId> inner;
    for (VertexId v : h.edges[static_cast<std::size_t>(e)]) {
      if (!is_leaf(deg, v)) inner.push_back(v);
    }
    if (inner.size() != 2) continue;
    auto side_u = detail::reach_without(h, inc, e, inner[0]);
    if (std::binary_search(side_u.begin(), side_u.end(), inner[1])) continue;
    TwoBridge b;
    b.edge = e;
    b.u = inner[0];
    b.v = inner[1];
    b.side_u = std::move(side_u);
    b.side_v = detail::reach_without(h, inc, e, inner[1]);
    out.push_back(std::move(b));
  }
  return out;
}

/// H/e with the bookkeeping needed to carry weights across: vertex_map[x] is
/// the new id of x (-1 for the deleted leaves of e; u and v both map to
/// `merged`), edge_map[e] the new edge id (-1 for the bridge).
struct Contraction {
  UniformHypergraph graph;
  VertexId merged = 0;
  std::vector<VertexId> vertex_map;
  std::vector<EdgeId> edge_map;
};

[[nodiscard]] inline Contraction contract_bridge(const UniformHypergraph& h,
                                                 const TwoBridge& bridge) {
  const auto bridges = find_2bridges(h);
  const bool known = std::any_of(bridges.begin(), bridges.end(), [&](const TwoBridge& b) {
    return b.edge == bridge.edge && b.u == bridge.u && b.v == bridge.v;
  });
  if (!known) throw InvalidSite("edge " + std::to_string(bridge.edge) + " is not a 2-bridge");

  const auto deg = vertex_degrees(h);
  const Edge& removed = h.edges[static_cast<std::size_t>(bridge.edge)];
  Contraction c;
  c.vertex_map.assign(static_cast<std::size_t>(h.num_vertices), -1);
  int next = 0;
  for (VertexId x = 0; x < h.num_vertices; ++x) {
    const bool in_bridge = std::find(removed.begin(), removed.end(), x) != removed.end();
    if (x == bridge.v || (in_bridge && is_leaf(deg, x))) continue;
    c.vertex_map[static_cast<std::size_t>(x)] = next++;
  }
  c.merged = c.vertex_map[static_cast<std::size_t>(bridge.u)];
  c.vertex_map[static_cast<std::size_t>(bridge.v)] = c.merged;

  c.graph.rank = h.rank;
  c.graph.num_vertices = next;
  c.edge_map.assign(h.edges.size(), -1);
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    if (e == bridge.edge) continue;
    Edge mapped;
    for (VertexId x : h.edges[static_cast<std::size_t>(e)]) {
      mapped.push_back(c.vertex_map[static_cast<std::size_t>(x)]);
    }
    std::sort(mapped.begin(), mapped.end());
    c.edge_map[static_cast<std::size_t>(e)] = c.graph.num_edges();
    c.graph.edges.push_back(std::move(mapped));
  }
  for (const auto& [id, label] : h.labels) {
    const VertexId to = c.vertex_map[static_cast<std::size_t>(id)];
    if (to >= 0 && id != bridge.v) c.graph.labels[to] = label;
  }
  return c;
}

[[nodiscard]] inline UniformHypergraph contract(const UniformHypergraph& h,
                                                const TwoBridge& bridge) {
  return contract_bridge(h, bridge).graph;
}

namespace detail {

struct SourceLabelling {
  double alpha = 0.0;
  WeightedIncidenceMatrix weights;
};

// Normal labelling of the graph the proof starts from: the tree solver when
// the incidence graph is a tree, the Perron vector otherwise.
inline SourceLabelling source_labelling(const UniformHypergraph& h) {
  if (is_incidence_acyclic(h)) {
    auto s = solve_tree_alpha(h);
    return {s.alpha, std::move(s.weights)};
  }
  const auto pm = power_method(h);
  auto c = certificate_from_perron(h, pm.perron, pm.rho);
  return {c.alpha, std::move(c.weights)};
}

}  // namespace detail

struct ContractionReport {
  bool applicable = false;  // alpha > 1/4
  double alpha = 0.0;
  double rho_original = 0.0;
  double rho_contracted = 0.0;
  double margin = 0.0;      // rho_original - rho_contracted
  double merged_sum = 0.0;  // vertex sum of the carried-over labelling at the merged vertex
  CertificateVerdict verdict;
  bool passed = false;
};

/// Contracting a 2-bridge of a consistently alpha-normal hypergraph with
/// alpha > 1/4 lowers rho. Computes both radii, carries the normal labelling
/// of H over to H/e (the merged vertex keeps the weights from both sides) and
/// checks that the result is strictly subnormal at the same alpha.
[[nodiscard]] inline ContractionReport verify_contraction_theorem(const UniformHypergraph& h,
                                                                  const TwoBridge& bridge,
                                                                  const PowerOptions& opts = {}) {
  ContractionReport rep;
  const auto sol = detail::source_labelling(h);
  rep.alpha = sol.alpha;
  const auto c = contract_bridge(h, bridge);
  rep.applicable = sol.alpha > 0.25;
  if (!rep.applicable) {
    rep.passed = true;
    return rep;
  }
  rep.rho_original = power_method(h, opts).rho;
  rep.rho_contracted = power_method(c.graph, opts).rho;
  rep.margin = rep.rho_original - rep.rho_contracted;

  WeightedIncidenceMatrix carried;
  for (const auto& [key, w] : sol.weights.entries()) {
    const auto [x, e] = key;
    const EdgeId to = c.edge_map[static_cast<std::size_t>(e)];
    if (to < 0) continue;
    carried.set(c.vertex_map[static_cast<std::size_t>(x)], to, w);
  }
  for (const auto& [key, w] : carried.entries()) {
    if (key.first == c.merged) rep.merged_sum += w;
  }
  rep.verdict = check_certificate(c.graph, carried, sol.alpha);
  const double bound = 2.0 - std::sqrt(4.0 * sol.alpha);
  rep.passed = rep.margin > kTheoremMargin && rep.verdict.kind == CertificateKind::Subnormal &&
               rep.verdict.strict && rep.merged_sum <= bound + 1e-9 && bound < 1.0;
  return rep;
}

/// A labelled matrix B' lifted from one of the comparison proofs, the alpha
/// it is measured against, and the verdict the proof asserts for it.
struct ProofCertificate {
  std::string theorem;
  UniformHypergraph source;  // the graph whose consistent alpha is used
  UniformHypergraph target;  // the graph carrying B'
  double alpha = 0.0;
  WeightedIncidenceMatrix weights;
  CertificateKind expected_kind = CertificateKind::Invalid;
  bool expected_strict = false;
};

namespace detail {

// f_0 = 0 extends the recurrence so that a path's far end is a leaf.
inline double f_or_zero(int i, double alpha) { return i <= 0 ? 0.0 : eval_f(i, alpha); }

inline EdgeId edge_through(const UniformHypergraph& h, VertexId a, VertexId b) {
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    const Edge& edge = h.edges[static_cast<std::size_t>(e)];
    if (std::find(edge.begin(), edge.end(), a) != edge.end() &&
        std::find(edge.begin(), edge.end(), b) != edge.end()) {
      return e;
    }
  }
  throw InvalidHypergraph("no edge through vertices " + std::to_string(a) + " and " +
                          std::to_string(b));
}

// Chain anchor, <prefix>1, ..., <prefix><length> from generator labels.
inline std::vector<VertexId> labelled_chain(const UniformHypergraph& h, std::string_view anchor,
                                            std::string_view prefix, int length) {
  std::vector<VertexId> chain{h.vertex(anchor)};
  for (int j = 1; j <= length; ++j) chain.push_back(h.vertex(std::string(prefix) + std::to_string(j)));
  return chain;
}

// Path labelling with f: on the j-th edge from the anchor of an m-edge path,
// the near vertex gets f_{m+1-j} and the far vertex 1 - f_{m-j}.
inline void label_path(const UniformHypergraph& h, const std::vector<VertexId>& chain,
                       double alpha, WeightedIncidenceMatrix& b) {
  const int m = static_cast<int>(chain.size()) - 1;
  for (int j = 1; j <= m; ++j) {
    const EdgeId e = edge_through(h, chain[static_cast<std::size_t>(j - 1)],
                                  chain[static_cast<std::size_t>(j)]);
    b.set(chain[static_cast<std::size_t>(j - 1)], e, f_or_zero(m + 1 - j, alpha));
    b.set(chain[static_cast<std::size_t>(j)], e, 1.0 - f_or_zero(m - j, alpha));
  }
}

inline void label_leg(const UniformHypergraph& h, const Leg& leg, double alpha,
                      WeightedIncidenceMatrix& b) {
  label_path(h, leg.chain, alpha, b);
}

inline void copy_host(const WeightedIncidenceMatrix& from, int host_edges,
                      WeightedIncidenceMatrix& to) {
  for (const auto& [key, w] : from.entries()) {
    if (key.second < host_edges) to.set(key.first, key.second, w);
  }
}

}  // namespace detail

/// B' for H_{k-1,l+1} at the alpha of H_{k,l}: host weights unchanged, both
/// paths relabelled with f. The anchor's sum drops, so B' is strictly
/// subnormal.
[[nodiscard]] inline ProofCertificate graft_certificate(const CenterSite& site) {
  const auto pair = graft_center(site);
  const auto src = detail::source_labelling(pair.before);
  ProofCertificate pc;
  pc.theorem = "hkl";
  pc.source = pair.before;
  pc.target = pair.after;
  pc.alpha = src.alpha;
  detail::copy_host(src.weights, site.host.num_edges(), pc.weights);
  detail::label_leg(pair.after, pair.after_short, pc.alpha, pc.weights);
  detail::label_leg(pair.after, pair.after_long, pc.alpha, pc.weights);
  pc.weights = with_leaf_defaults(pc.target, std::move(pc.weights));
  pc.expected_kind = CertificateKind::Subnormal;
  pc.expected_strict = true;
  return pc;
}

/// B' for H~_{k-1,l+1} at the alpha of H~_{k,l}: paths relabelled with f,
/// the two anchors get 1 - f_{k-1} and 1 - f_{l+1} on the shared edge, and
/// the rest of the shared edge keeps its weights. The shared edge's product
/// rises above alpha, so B' is strictly subnormal.
[[nodiscard]] inline ProofCertificate graft_certificate(const EdgePairSite& site) {
  const auto pair = graft_edge_pair(site);
  const auto src = detail::source_labelling(pair.before);
  ProofCertificate pc;
  pc.theorem = "H+kl";
  pc.source = pair.before;
  pc.target = pair.after;
  pc.alpha = src.alpha;
  detail::copy_host(src.weights, site.host.num_edges(), pc.weights);
  detail::label_leg(pair.after, pair.after_short, pc.alpha, pc.weights);
  detail::label_leg(pair.after, pair.after_long, pc.alpha, pc.weights);
  pc.weights.set(site.short_anchor, site.edge, 1.0 - detail::f_or_zero(site.k - 1, pc.alpha));
  pc.weights.set(site.long_anchor, site.edge, 1.0 - detail::f_or_zero(site.l + 1, pc.alpha));
  pc.weights = with_leaf_defaults(pc.target, std::move(pc.weights));
  pc.expected_kind = CertificateKind::Subnormal;
  pc.expected_strict = true;
  return pc;
}

namespace detail {

// B' on F_{1,2,n-4}: f-labelled paths, and on the central edge
// a -> 1 - alpha, b -> (1 - 2 alpha)/(1 - alpha), c -> alpha/(1 - 2 alpha).
// Every condition is tight except the vertex sum at c,
// f_{n-4}(alpha) + alpha/(1 - 2 alpha).
inline WeightedIncidenceMatrix f12_labelling(const UniformHypergraph& f, int n, double alpha) {
  WeightedIncidenceMatrix b;
  label_path(f, labelled_chain(f, "a", "a", 1), alpha, b);
  label_path(f, labelled_chain(f, "b", "b", 2), alpha, b);
  label_path(f, labelled_chain(f, "c", "c", n - 4), alpha, b);
  const VertexId va = f.vertex("a"), vb = f.vertex("b"), vc = f.vertex("c");
  const EdgeId centre = edge_through(f, va, vb);
  b.set(va, centre, 1.0 - alpha);
  b.set(vb, centre, (1.0 - 2.0 * alpha) / (1.0 - alpha));
  b.set(vc, centre, alpha / (1.0 - 2.0 * alpha));
  return with_leaf_defaults(f, std::move(b));
}

// B' on E_{1,1,n-2}: pendants at c get alpha, then along z:
// c -> 1 - 2 alpha, z1 -> alpha/(1 - 2 alpha) and (1 - 3 alpha)/(1 - 2 alpha),
// z2 -> alpha (1 - 2 alpha)/(1 - 3 alpha), and f-labelling from z2 outward.
// The vertex sum at z2 is f_{n-4}(alpha) + alpha (1 - 2 alpha)/(1 - 3 alpha).
inline WeightedIncidenceMatrix e11_labelling(const UniformHypergraph& e, int n, double alpha) {
  WeightedIncidenceMatrix b;
  const VertexId c = e.vertex("c"), x1 = e.vertex("x1"), y1 = e.vertex("y1");
  const VertexId z1 = e.vertex("z1"), z2 = e.vertex("z2");
  b.set(c, edge_through(e, c, x1), alpha);
  b.set(c, edge_through(e, c, y1), alpha);
  const EdgeId first = edge_through(e, c, z1);
  const EdgeId second = edge_through(e, z1, z2);
  b.set(c, first, 1.0 - 2.0 * alpha);
  b.set(z1, first, alpha / (1.0 - 2.0 * alpha));
  b.set(z1, second, (1.0 - 3.0 * alpha) / (1.0 - 2.0 * alpha));
  b.set(z2, second, alpha * (1.0 - 2.0 * alpha) / (1.0 - 3.0 * alpha));
  std::vector<VertexId> tail{z2};
  for (int j = 3; j <= n - 2; ++j) tail.push_back(e.vertex("z" + std::to_string(j)));
  label_path(e, tail, alpha, b);
  return with_leaf_defaults(e, std::move(b));
}

inline int require_param(std::span<const int> params, std::size_t count, std::string_view id) {
  if (params.size() != count) {
    throw InvalidSite(std::string(id) + " takes " + std::to_string(count) + " parameter(s)");
  }
  return params[0];
}

}  // namespace detail

/// Rebuilds the weighted incidence matrix B' used in one of the comparison
/// proofs, at the alpha of the graph it is compared against.
///
///   hkl         (k, l)  host A_1, anchored at an end: B' on E_{1,k-1,l+1}
///   H+kl        (k, l)  host = one edge with a pendant on its third vertex:
///                       B' on F_{1,k-1,l+1}
///   th-G-vs-F   (n>=10) B' on F_{1,2,n-4} at alpha_n; normal at n = 10 and
///                       strictly supernormal beyond
///   th2-F-vs-E  (n>=7)  B' on F_{1,2,n-4} at the alpha of E_{1,1,n-2}
///   th-G-vs-E   (n>=8)  B' on E_{1,1,n-2} at the alpha of G_{1,2:n-7:1,1}
[[nodiscard]] inline ProofCertificate build_proof_certificates(std::string_view theorem,
                                                               std::span<const int> params,
                                                               int r = 3) {
  if (theorem == "hkl" || theorem == "H+kl") {
    if (params.size() != 2) throw InvalidSite(std::string(theorem) + " takes (k, l)");
    const int k = params[0], l = params[1];
    if (theorem == "hkl") {
      return graft_certificate(CenterSite{make_path(1, r), 0, k, l});
    }
    // One edge {a, b, c} with a pendant at a; b and c receive the paths.
    UniformHypergraph host = make_F(1, 0, 0, r);
    EdgePairSite site{host, detail::edge_through(host, host.vertex("a"), host.vertex("b")),
                      host.vertex("b"), host.vertex("c"), k, l};
    return graft_certificate(site);
  }

  ProofCertificate pc;
  pc.theorem = std::string(theorem);
  if (theorem == "th-G-vs-F") {
    const int n = detail::require_param(params, 1, theorem);
    if (n < 10) throw InvalidSite("th-G-vs-F needs n >= 10");
    pc.source = make_G(1, 1, n - 6, 1, 1, r);
    pc.target = make_F(1, 2, n - 4, r);
    pc.alpha = solve_alpha_n(n).value;
    pc.weights = detail::f12_labelling(pc.target, n, pc.alpha);
    pc.expected_kind = n == 10 ? CertificateKind::Normal : CertificateKind::Supernormal;
    pc.expected_strict = n != 10;
    return pc;
  }
  if (theorem == "th2-F-vs-E") {
    const int n = detail::require_param(params, 1, theorem);
    if (n < 7) throw InvalidSite("th2-F-vs-E needs n >= 7");
    pc.source = make_E(1, 1, n - 2, r);
    pc.target = make_F(1, 2, n - 4, r);
    pc.alpha = solve_tree_alpha(pc.source).alpha;
    pc.weights = detail::f12_labelling(pc.target, n, pc.alpha);
    pc.expected_kind = CertificateKind::Subnormal;
    pc.expected_strict = true;
    return pc;
  }
  if (theorem == "th-G-vs-E") {
    const int n = detail::require_param(params, 1, theorem);
    if (n < 8) throw InvalidSite("th-G-vs-E needs n >= 8");
    pc.source = make_G(1, 2, n - 7, 1, 1, r);
    pc.target = make_E(1, 1, n - 2, r);
    pc.alpha = solve_tree_alpha(pc.source).alpha;
    pc.weights = detail::e11_labelling(pc.target, n, pc.alpha);
    pc.expected_kind = CertificateKind::Subnormal;
    pc.expected_strict = true;
    return pc;
  }
  throw InvalidSite("unknown theorem id '" + std::string(theorem) + "'");
}

}  // namespace hyperrho
