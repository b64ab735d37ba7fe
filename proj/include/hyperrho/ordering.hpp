#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperrho/generators.hpp"
#include "hyperrho/hypergraph.hpp"
#include "hyperrho/perturbations.hpp"
#include "hyperrho/spectral.hpp"

namespace hyperrho {

enum class Precision { Double, LongDouble };

[[nodiscard]] inline std::optional<Precision> parse_precision(std::string_view s) {
  if (s == "double" || s == "64") return Precision::Double;
  if (s == "long double" || s == "long-double" || s == "longdouble" || s == "80") {
    return Precision::LongDouble;
  }
  return std::nullopt;
}

/// HYPERRHO_PRECISION, defaulting to double. Unknown values are an error.
[[nodiscard]] inline Precision precision_from_env() {
  const char* v = std::getenv("HYPERRHO_PRECISION");
  if (v == nullptr || *v == '\0') return Precision::Double;
  if (auto p = parse_precision(v)) return *p;
  throw std::invalid_argument(std::string("HYPERRHO_PRECISION: unknown value '") + v + "'");
}

struct RhoEstimate {
  double rho = 0.0;
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<double> perron;
};

/// Power method at the requested width. Non-convergence is reported in the
/// result rather than thrown.
[[nodiscard]] inline RhoEstimate spectral_radius(const UniformHypergraph& h,
                                                 const PowerOptions& opts = {},
                                                 Precision precision = Precision::Double) {
  auto pack = [](const auto& r) {
    RhoEstimate out;
    out.rho = static_cast<double>(r.rho);
    out.residual = static_cast<double>(r.residual);
    out.iterations = r.iterations;
    out.converged = r.converged;
    for (auto v : r.perron) out.perron.push_back(static_cast<double>(v));
    return out;
  };
  if (precision == Precision::LongDouble) {
    try {
      return pack(power_method<long double>(h, opts));
    } catch (const NotConverged<long double>& e) {
      return pack(e.result());
    }
  }
  try {
    return pack(power_method<double>(h, opts));
  } catch (const NotConverged<double>& e) {
    return pack(e.result());
  }
}

struct OrderingRow {
  std::string family;  // A, F11, G11, F12, E11, G12, BD, C
  std::string graph;   // the concrete member, e.g. G_{1,1:4:1,1}
  int n = 0;
  int r = 0;
  double rho = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();  // to the next row, or to the threshold
  bool converged = false;
  bool reconstructed = false;   // BD
  bool equality_class = false;  // C: expected exactly at the threshold
  std::string error;
};

struct OrderingReport {
  int r = 0;
  int n = 0;
  double threshold = 0.0;
  std::vector<OrderingRow> rows;  // ascending rho
  bool chain_ok = false;
  bool chain_ok_without_bd = false;
  std::vector<std::string> failures;
};

struct OrderingOptions {
  PowerOptions power;
  Precision precision = Precision::Double;
  double margin = kTheoremMargin;
  double equality_tol = 1e-7;
  bool include_bd = true;
  bool include_cycle = true;
};

namespace detail {

struct OrderingMember {
  std::string family;
  std::string graph;
  std::function<UniformHypergraph()> build;
  bool reconstructed = false;
  bool equality_class = false;
};

// The chain of the final ordering theorem, smallest first. For n < 10 the
// small-n values swap G11 and F12; at n = 10 they coincide.
inline std::vector<OrderingMember> ordering_members(int r, int n, const OrderingOptions& opt) {
  auto s = [](int v) { return std::to_string(v); };
  std::vector<OrderingMember> m;
  m.push_back({"A", "A_{" + s(n) + "}", [=] { return make_path(n, r); }});
  m.push_back({"F11", "F_{1,1," + s(n - 3) + "}", [=] { return make_F(1, 1, n - 3, r); }});
  OrderingMember g11{"G11", "G_{1,1:" + s(n - 6) + ":1,1}",
                     [=] { return make_G(1, 1, n - 6, 1, 1, r); }};
  OrderingMember f12{"F12", "F_{1,2," + s(n - 4) + "}", [=] { return make_F(1, 2, n - 4, r); }};
  if (n < 10) {
    m.push_back(f12);
    m.push_back(g11);
  } else {
    m.push_back(g11);
    m.push_back(f12);
  }
  m.push_back({"E11", "E_{1,1," + s(n - 2) + "}", [=] { return make_E(1, 1, n - 2, r); }});
  m.push_back({"G12", "G_{1,2:" + s(n - 7) + ":1,1}", [=] { return make_G(1, 2, n - 7, 1, 1, r); }});
  if (opt.include_bd && n >= 8) {
    m.push_back({"BD", "BD_{" + s(n) + "}", [=] { return make_BD(n, r); }, true});
  }
  if (opt.include_cycle) {
    m.push_back({"C", "C_{" + s(n) + "}", [=] { return make_cycle(n, r); }, false, true});
  }
  return m;
}

inline bool check_chain(const std::vector<OrderingRow>& expected, int n, double threshold,
                        const OrderingOptions& opt, bool with_bd,
                        std::vector<std::string>* failures) {
  bool ok = true;
  auto fail = [&](std::string msg) {
    ok = false;
    if (failures) failures->push_back(std::move(msg));
  };
  const OrderingRow* prev = nullptr;
  for (const OrderingRow& row : expected) {
    if (row.reconstructed && !with_bd) continue;
    if (!row.error.empty()) {
      fail(row.family + ": " + row.error);
      continue;
    }
    if (!row.converged) fail(row.family + ": power method did not converge");
    if (row.equality_class) {
      if (!(std::abs(row.rho - threshold) <= opt.equality_tol)) {
        fail(row.family + ": not at the threshold");
      }
      continue;
    }
    if (!(threshold - row.rho > opt.margin)) fail(row.family + ": not below the threshold");
    if (prev != nullptr) {
      const double gap = row.rho - prev->rho;
      const bool tie = n == 10 && prev->family == "G11" && row.family == "F12";
      if (tie) {
        if (!(std::abs(gap) <= opt.equality_tol)) fail("G11 and F12 differ at n = 10");
      } else if (!(gap > opt.margin)) {
        fail(prev->family + " < " + row.family + " fails (gap " + std::to_string(gap) + ")");
      }
    }
    prev = &row;
  }
  return ok;
}

}  // namespace detail

/// Computes rho for the ordering families at (r, n) and checks the chain
///   A < F11 < G11 < F12 < E11 < G12 < BD < threshold = C
/// with G11 and F12 swapped for n < 10 and equal at n = 10. Generation or
/// convergence failures mark their row and fail the chain; they do not throw.
[[nodiscard]] inline OrderingReport order_families(int r, int n, const OrderingOptions& opt = {}) {
  if (r < 3) throw InvalidParameters("ordering needs r >= 3");
  if (n < 7) throw InvalidParameters("ordering needs n >= 7");
  OrderingReport rep;
  rep.r = r;
  rep.n = n;
  rep.threshold = threshold_rho(r);
  std::vector<OrderingRow> expected;
  for (const auto& m : detail::ordering_members(r, n, opt)) {
    OrderingRow row;
    row.family = m.family;
    row.graph = m.graph;
    row.n = n;
    row.r = r;
    row.reconstructed = m.reconstructed;
    row.equality_class = m.equality_class;
    try {
      const auto est = spectral_radius(m.build(), opt.power, opt.precision);
      row.rho = est.rho;
      row.converged = est.converged;
      row.alpha = alpha_from_rho(est.rho, r);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    expected.push_back(std::move(row));
  }
  rep.chain_ok = detail::check_chain(expected, n, rep.threshold, opt, true, &rep.failures);
  rep.chain_ok_without_bd = detail::check_chain(expected, n, rep.threshold, opt, false, nullptr);

  rep.rows = std::move(expected);
  std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const OrderingRow& a, const OrderingRow& b) {
    const bool an = std::isnan(a.rho), bn = std::isnan(b.rho);
    if (an || bn) return !an && bn;
    return a.rho < b.rho;
  });
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const double next = i + 1 < rep.rows.size() ? rep.rows[i + 1].rho : rep.threshold;
    rep.rows[i].margin = next - rep.rows[i].rho;
  }
  return rep;
}

}  // namespace hyperrho
