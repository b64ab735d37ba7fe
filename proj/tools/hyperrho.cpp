// hyperrho: command-line front end for the hypergraph spectral-radius library.
//
//   family   build a generated hypergraph and print it as JSON
//   rho      spectral radius of a generated or file-supplied hypergraph
//   certify  classify a weighted incidence matrix, or solve a tree for one
//   roots    recurrence roots a_i, b_i, c_i and the fixed points alpha_n
//   verify   perturbation theorem batteries, one CSV row per instance
//   order    the small-radius ordering chain per (r, n)
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hyperrho.hpp"

namespace {

using namespace hyperrho;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  double tol = 1e-12;
  long max_iter = 1'000'000;
  std::string format;
  std::string out;

  [[nodiscard]] PowerOptions power() const {
    PowerOptions p;
    p.tol = tol;
    p.max_iter = max_iter;
    return p;
  }

  [[nodiscard]] std::string format_or(const std::string& fallback) const {
    return format.empty() ? fallback : format;
  }
};

struct Range {
  int lo = 0;
  int hi = 0;
};

// "n" or "n..m".
Range parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    Range r{std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    if (r.hi < r.lo) throw UsageError("empty range '" + text + "'");
    return r;
  } catch (const std::logic_error&) {
    throw UsageError("bad range '" + text + "', expected n or n..m");
  }
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.15g}", v);
}

const char* flag(bool b) { return b ? "true" : "false"; }

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + g.out);
  f << text;
}

Json real(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

// --family/--params/--r or --graph, shared by family and rho.
struct GraphSource {
  std::string family;
  std::vector<int> params;
  int r = 3;
  std::string graph;

  void attach(CLI::App* sub, bool allow_file) {
    sub->add_option("--family", family, "path|E|F|G|cycle|BD");
    sub->add_option("--params", params, "comma-separated family parameters")->delimiter(',');
    sub->add_option("--r", r, "rank")->check(CLI::PositiveNumber);
    if (allow_file) sub->add_option("--graph", graph, "hypergraph JSON file");
  }

  [[nodiscard]] UniformHypergraph load() const {
    if (!graph.empty()) {
      if (!family.empty()) throw UsageError("give either --graph or --family, not both");
      return read_hypergraph(graph);
    }
    if (family.empty()) throw UsageError("--family or --graph is required");
    auto f = parse_family(family);
    if (!f || *f == Family::FromFile) throw UsageError("unknown family '" + family + "'");
    return make_family(FamilySpec{*f, params, r, {}});
  }
};

int cmd_family(const Globals& g, const GraphSource& src) {
  if (g.format_or("json") != "json") throw UsageError("family only writes json");
  emit(g, dump_hypergraph(src.load()));
  return kOk;
}

int cmd_rho(const Globals& g, const GraphSource& src) {
  const auto h = src.load();
  const auto est = spectral_radius(h, g.power(), precision_from_env());
  const double alpha = alpha_from_rho(est.rho, h.rank);
  const std::string format = g.format_or("json");
  if (format == "json") {
    Json doc = {{"rho", est.rho},
                {"alpha", alpha},
                {"residual", est.residual},
                {"iterations", est.iterations},
                {"converged", est.converged}};
    emit(g, doc.dump(2) + "\n");
  } else {
    emit(g, fmt::format("rho,alpha,residual,iterations,converged\n{},{},{},{},{}\n", num(est.rho),
                        num(alpha), num(est.residual), est.iterations, flag(est.converged)));
  }
  return est.converged ? kOk : kVerifyFailed;
}

struct CertifyArgs {
  std::string graph;
  std::string cert;
  bool solve = false;
  double tol = 1e-9;
  std::string expect;
};

int cmd_certify(const Globals& g, const CertifyArgs& a) {
  const auto h = read_hypergraph(a.graph);
  if (a.solve) {
    if (!a.cert.empty()) throw UsageError("--solve and --cert are exclusive");
    const auto sol = solve_tree_alpha(h);
    emit(g, to_json(sol.alpha, sol.weights).dump(2) + "\n");
    return kOk;
  }
  if (a.cert.empty()) throw UsageError("--cert or --solve is required");
  const auto c = read_certificate(a.cert);
  const auto v = check_certificate(h, c.weights, c.alpha, a.tol);
  emit(g, to_json(v).dump(2) + "\n");
  if (!a.expect.empty() && to_string(v.kind) != a.expect) return kVerifyFailed;
  return kOk;
}

struct RootsArgs {
  std::string kind;
  std::string index;
};

int cmd_roots(const Globals& g, const RootsArgs& a) {
  const Range range = parse_range(a.index);
  std::vector<std::pair<int, RootBracket>> rows;
  for (int i = range.lo; i <= range.hi; ++i) {
    if (a.kind == "a") rows.emplace_back(i, root_a(i, g.tol));
    else if (a.kind == "b") rows.emplace_back(i, root_b(i, g.tol));
    else if (a.kind == "c") rows.emplace_back(i, root_c(i, g.tol));
    else if (a.kind == "alpha_n") rows.emplace_back(i, solve_alpha_n(i, g.tol));
    else throw UsageError("unknown root kind '" + a.kind + "'");
  }
  if (g.format_or("csv") == "json") {
    Json doc = Json::array();
    for (const auto& [i, b] : rows) {
      doc.push_back({{"kind", a.kind}, {"index", i}, {"value", b.value}, {"tol", b.hi - b.lo}});
    }
    emit(g, doc.dump(2) + "\n");
    return kOk;
  }
  std::string text = "kind,index,value,tol\n";
  for (const auto& [i, b] : rows) {
    text += fmt::format("{},{},{},{}\n", a.kind, i, num(b.value), num(b.hi - b.lo));
  }
  emit(g, text);
  return kOk;
}

struct VerifyRow {
  std::string instance;
  double rho_source = 0.0;
  double rho_target = 0.0;
  double margin = 0.0;
  std::string verdict;
  std::string expected;
  bool pass = false;
};

VerifyRow verify_certificate(const ProofCertificate& pc, const PowerOptions& opts) {
  VerifyRow row;
  row.rho_source = power_method(pc.source, opts).rho;
  row.rho_target = power_method(pc.target, opts).rho;
  const auto v = check_certificate(pc.target, pc.weights, pc.alpha);
  row.verdict = to_string(v.kind);
  row.expected = to_string(pc.expected_kind);
  const bool verdict_ok = v.kind == pc.expected_kind && v.strict == pc.expected_strict;
  bool rho_ok = false;
  switch (pc.expected_kind) {
    case CertificateKind::Subnormal:
      row.margin = row.rho_source - row.rho_target;
      rho_ok = row.margin > kTheoremMargin;
      break;
    case CertificateKind::Supernormal:
      row.margin = row.rho_target - row.rho_source;
      rho_ok = row.margin > kTheoremMargin;
      break;
    default:
      row.margin = row.rho_target - row.rho_source;
      rho_ok = std::abs(row.margin) <= 1e-7;
  }
  row.pass = verdict_ok && rho_ok;
  return row;
}

std::vector<VerifyRow> verify_rows(const std::string& theorem, Range range, int r,
                                   const PowerOptions& opts) {
  std::vector<VerifyRow> rows;
  if (theorem == "hkl" || theorem == "H+kl") {
    // range runs over k + l
    for (int s = range.lo; s <= range.hi; ++s) {
      for (int k = 1; 2 * k <= s; ++k) {
        const int l = s - k;
        const int params[2] = {k, l};
        const auto pc = build_proof_certificates(theorem, params, r);
        VerifyRow row = verify_certificate(pc, opts);
        row.instance = fmt::format("k={} l={}", k, l);
        if (theorem == "H+kl") {
          // long-leg anchor c carries at least the Perron value of the short-leg anchor b
          const auto x = power_method(pc.source, opts).perron;
          const bool perron_ok = x[static_cast<std::size_t>(pc.source.vertex("c"))] >=
                                 x[static_cast<std::size_t>(pc.source.vertex("b"))] - 1e-9;
          row.pass = row.pass && perron_ok;
        }
        rows.push_back(std::move(row));
      }
    }
    return rows;
  }
  if (theorem == "contract") {
    // G_{1,1:k:1,1} contracted along its first 2-bridge, k = n - 6
    for (int n = range.lo; n <= range.hi; ++n) {
      if (n < 7) throw UsageError("contract needs n >= 7");
      const auto h = make_G(1, 1, n - 6, 1, 1, r);
      const auto bridges = find_2bridges(h);
      VerifyRow row;
      row.instance = fmt::format("G_{{1,1:{}:1,1}}", n - 6);
      std::replace(row.instance.begin(), row.instance.end(), ',', ';');
      const auto rep = verify_contraction_theorem(h, bridges.front(), opts);
      row.rho_source = rep.rho_original;
      row.rho_target = rep.rho_contracted;
      row.margin = rep.margin;
      row.verdict = rep.applicable ? to_string(rep.verdict.kind) : "not-applicable";
      row.expected = "subnormal";
      row.pass = rep.applicable && rep.passed;
      rows.push_back(std::move(row));
    }
    return rows;
  }
  for (int n = range.lo; n <= range.hi; ++n) {
    const int params[1] = {n};
    VerifyRow row = verify_certificate(build_proof_certificates(theorem, params, r), opts);
    row.instance = fmt::format("n={}", n);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct VerifyArgs {
  std::string theorem;
  std::string range;
  int r = 3;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  static const std::vector<std::string> known = {"hkl",        "H+kl",       "contract",
                                                 "th-G-vs-F",  "th2-F-vs-E", "th-G-vs-E"};
  if (std::find(known.begin(), known.end(), a.theorem) == known.end()) {
    throw UsageError("unknown theorem id '" + a.theorem + "'");
  }
  const auto rows = verify_rows(a.theorem, parse_range(a.range), a.r, g.power());
  bool all = true;
  for (const auto& row : rows) all = all && row.pass;
  if (g.format_or("csv") == "json") {
    Json doc = Json::array();
    for (const auto& row : rows) {
      doc.push_back({{"theorem", a.theorem}, {"instance", row.instance}, {"r", a.r},
                     {"rho_source", row.rho_source}, {"rho_target", row.rho_target},
                     {"margin", row.margin}, {"verdict", row.verdict},
                     {"expected", row.expected}, {"pass", row.pass}});
    }
    emit(g, doc.dump(2) + "\n");
  } else {
    std::string text = "theorem,instance,r,rho_source,rho_target,margin,verdict,expected,pass\n";
    for (const auto& row : rows) {
      text += fmt::format("{},{},{},{},{},{},{},{},{}\n", a.theorem, row.instance, a.r,
                          num(row.rho_source), num(row.rho_target), num(row.margin), row.verdict,
                          row.expected, flag(row.pass));
    }
    emit(g, text);
  }
  return all ? kOk : kVerifyFailed;
}

struct OrderArgs {
  std::vector<int> ranks{3};
  std::string range = "7..30";
  bool no_bd = false;
  bool no_cycle = false;
};

int cmd_order(const Globals& g, const OrderArgs& a) {
  const Range range = parse_range(a.range);
  OrderingOptions opt;
  opt.power = g.power();
  opt.precision = precision_from_env();
  opt.include_bd = !a.no_bd;
  opt.include_cycle = !a.no_cycle;
  std::vector<OrderingReport> reports;
  for (int r : a.ranks) {
    for (int n = range.lo; n <= range.hi; ++n) reports.push_back(order_families(r, n, opt));
  }
  bool all = true;
  for (const auto& rep : reports) {
    all = all && rep.chain_ok;
    std::cerr << fmt::format("r={} n={} chain_ok={} chain_ok_without_bd={}\n", rep.r, rep.n,
                             flag(rep.chain_ok), flag(rep.chain_ok_without_bd));
    for (const auto& f : rep.failures) std::cerr << "  " << f << "\n";
  }
  if (g.format_or("csv") == "json") {
    Json doc = Json::array();
    for (const auto& rep : reports) {
      Json rows = Json::array();
      for (const auto& row : rep.rows) {
        Json jr = {{"family", row.family}, {"graph", row.graph}, {"rho", real(row.rho)},
                   {"alpha", real(row.alpha)}, {"margin", real(row.margin)},
                   {"converged", row.converged}, {"reconstructed", row.reconstructed},
                   {"equality_class", row.equality_class}};
        if (!row.error.empty()) jr["error"] = row.error;
        rows.push_back(std::move(jr));
      }
      doc.push_back({{"r", rep.r}, {"n", rep.n}, {"threshold", rep.threshold},
                     {"chain_ok", rep.chain_ok}, {"chain_ok_without_bd", rep.chain_ok_without_bd},
                     {"failures", rep.failures}, {"rows", std::move(rows)}});
    }
    emit(g, doc.dump(2) + "\n");
  } else {
    std::string text = "family,n,r,rho,alpha,margin,converged\n";
    for (const auto& rep : reports) {
      for (const auto& row : rep.rows) {
        const std::string name = row.reconstructed ? row.family + " (reconstructed)" : row.family;
        text += fmt::format("{},{},{},{},{},{},{}\n", name, row.n, row.r, num(row.rho),
                            num(row.alpha), num(row.margin), flag(row.converged));
      }
    }
    emit(g, text);
  }
  return all ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral radii, certificates and orderings of small r-uniform hypergraphs"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "power-method and bisection tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", g.max_iter, "power-method iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "write output to this file instead of stdout");

  GraphSource family_src, rho_src;
  auto* family = app.add_subcommand("family", "build a generated hypergraph as JSON");
  family_src.attach(family, false);
  auto* rho = app.add_subcommand("rho", "spectral radius by power iteration");
  rho_src.attach(rho, true);

  CertifyArgs certify_args;
  auto* certify = app.add_subcommand("certify", "classify a weighted incidence matrix");
  certify->add_option("--graph", certify_args.graph, "hypergraph JSON file")->required();
  certify->add_option("--cert", certify_args.cert, "certificate JSON file");
  certify->add_flag("--solve", certify_args.solve, "solve a tree hypergraph for its normal labelling");
  certify->add_option("--cert-tol", certify_args.tol, "absolute tolerance for the normal conditions");
  certify->add_option("--expect", certify_args.expect, "exit 1 unless the verdict has this kind")
      ->check(CLI::IsMember({"normal", "subnormal", "supernormal", "invalid"}));

  RootsArgs roots_args;
  auto* roots = app.add_subcommand("roots", "recurrence roots and alpha_n");
  roots->add_option("--kind", roots_args.kind, "a|b|c|alpha_n")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c", "alpha_n"}));
  roots->add_option("--index", roots_args.index, "index i or range i..j")->required();

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "run a perturbation theorem battery");
  verify->add_option("--theorem", verify_args.theorem,
                     "hkl|H+kl|contract|th-G-vs-F|th2-F-vs-E|th-G-vs-E")
      ->required();
  verify->add_option("--range", verify_args.range,
                     "n or n..m (k+l for hkl and H+kl, edge count otherwise)")
      ->required();
  verify->add_option("--r", verify_args.r, "rank")->check(CLI::Range(3, 12));

  OrderArgs order_args;
  auto* order = app.add_subcommand("order", "check the small-radius ordering chain");
  order->add_option("--r", order_args.ranks, "rank(s), comma-separated")->delimiter(',');
  order->add_option("--range", order_args.range, "n or n..m");
  order->add_flag("--no-bd", order_args.no_bd, "leave out the reconstructed BD row");
  order->add_flag("--no-cycle", order_args.no_cycle, "leave out the threshold cycle row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*family) return cmd_family(g, family_src);
    if (*rho) return cmd_rho(g, rho_src);
    if (*certify) return cmd_certify(g, certify_args);
    if (*roots) return cmd_roots(g, roots_args);
    if (*verify) return cmd_verify(g, verify_args);
    if (*order) return cmd_order(g, order_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
