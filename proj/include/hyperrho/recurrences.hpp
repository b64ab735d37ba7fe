#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hyperrho/errors.hpp"

namespace hyperrho {

/// Largest recurrence index supported by the double-valued entry points.
inline constexpr int kMaxRecurrenceIndex = 64;

/// f_1(x) = x, f_i(x) = x / (1 - f_{i-1}(x)).
///
/// Templated so that tests can evaluate the same recurrence in exact rational
/// arithmetic. Throws DomainError when a denominator 1 - f_{j} (j < i) is not
/// positive.
template <class Real>
[[nodiscard]] Real f_value(int i, const Real& x) {
  if (i < 1) throw std::invalid_argument("recurrence index must be >= 1");
  Real value = x;
  for (int j = 2; j <= i; ++j) {
    Real denom = Real(1) - value;
    if (denom <= Real(0)) {
      throw DomainError("f_" + std::to_string(j) + ": denominator 1 - f_" + std::to_string(j - 1) +
                        " <= 0");
    }
    Real next = x / denom;
    value = next;
  }
  return value;
}

/// g_1(x) = x, g_2(x) = x / (1 - x)^2, g_i(x) = x / (1 - g_{i-1}(x)) for i >= 3.
template <class Real>
[[nodiscard]] Real g_value(int i, const Real& x) {
  if (i < 1) throw std::invalid_argument("recurrence index must be >= 1");
  if (i == 1) return x;
  Real one_minus = Real(1) - x;
  if (one_minus <= Real(0)) throw DomainError("g_2: denominator (1 - x)^2 at x >= 1");
  Real sq = one_minus * one_minus;
  Real value = x / sq;
  for (int j = 3; j <= i; ++j) {
    Real denom = Real(1) - value;
    if (denom <= Real(0)) {
      throw DomainError("g_" + std::to_string(j) + ": denominator 1 - g_" + std::to_string(j - 1) +
                        " <= 0");
    }
    Real next = x / denom;
    value = next;
  }
  return value;
}

namespace detail {

inline void check_index(int i) {
  if (i < 1 || i > kMaxRecurrenceIndex) {
    throw std::invalid_argument("recurrence index " + std::to_string(i) + " outside [1, " +
                                std::to_string(kMaxRecurrenceIndex) + "]");
  }
}

}  // namespace detail

// The double entry points accumulate in long double: near a root, 1 - f_{i-1}
// cancels and amplifies the rounding of every earlier step.
[[nodiscard]] inline double eval_f(int i, double alpha) {
  detail::check_index(i);
  return static_cast<double>(f_value<long double>(i, alpha));
}

[[nodiscard]] inline double eval_g(int i, double alpha) {
  detail::check_index(i);
  return static_cast<double>(g_value<long double>(i, alpha));
}

/// L_i(x) = f_i(x) + x/(1-2x) - (g_i(x) + x/(1-x)^2), for i >= 7.
[[nodiscard]] inline double eval_L(int i, double x) {
  if (i < 7) throw std::invalid_argument("L_i is defined for i >= 7");
  detail::check_index(i);
  if (!(x > 0.0 && x < 0.5)) throw DomainError("L_i needs x in (0, 1/2)");
  const long double X = x;
  const long double f = f_value<long double>(i, X);
  const long double g = g_value<long double>(i, X);
  return static_cast<double>(f + X / (1 - 2 * X) - (g + X / ((1 - X) * (1 - X))));
}

/// f_1..f_N and g_1..g_N at one alpha. Entries past the first non-positive
/// denominator are NaN; valid_prefix_* counts the leading entries in (0, 1).
struct RecurrenceTable {
  double alpha = 0.0;
  std::vector<double> f;
  std::vector<double> g;
  int valid_prefix_f = 0;
  int valid_prefix_g = 0;
};

[[nodiscard]] inline RecurrenceTable make_table(double alpha, int n = kMaxRecurrenceIndex) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  detail::check_index(n);
  RecurrenceTable t;
  t.alpha = alpha;
  const long double a = alpha;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto fill = [&](auto next_of, std::vector<double>& out, int& prefix) {
    long double value = 0;
    bool ok = true;
    for (int i = 1; i <= n; ++i) {
      if (ok) {
        auto v = next_of(i, value);
        if (!v) ok = false;
        else value = *v;
      }
      out.push_back(ok ? static_cast<double>(value) : nan);
      if (ok && value > 0 && value < 1 && prefix == i - 1) prefix = i;
    }
  };
  using Opt = std::optional<long double>;
  fill(
      [&](int i, long double prev) -> Opt {
        if (i == 1) return a;
        if (1 - prev <= 0) return std::nullopt;
        return a / (1 - prev);
      },
      t.f, t.valid_prefix_f);
  fill(
      [&](int i, long double prev) -> Opt {
        if (i == 1) return a;
        if (i == 2) return a / ((1 - a) * (1 - a));
        if (1 - prev <= 0) return std::nullopt;
        return a / (1 - prev);
      },
      t.g, t.valid_prefix_g);
  return t;
}

/// Bracket around a root found by bisection; hi - lo <= tol on return.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double tol = 0.0;
};

/// Bisection for an increasing function given as a sign oracle: `positive(x)`
/// must return true exactly when x lies at or beyond the root (an oracle may
/// also report an exact hit through `exact`). Requires !positive(lo) and
/// positive(hi).
template <class SignFn>
[[nodiscard]] RootBracket bisect_increasing(SignFn positive, double lo, double hi, double tol,
                                            const std::string& what) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  bool exact = false;
  if (positive(lo, exact)) {
    if (exact) return {lo, lo, lo, tol};
    throw BracketError(what + ": no sign change, lower end already past the root");
  }
  if (!positive(hi, exact)) throw BracketError(what + ": no sign change on bracket");
  if (exact) return {hi, hi, hi, tol};
  while (hi - lo > tol) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    exact = false;
    if (positive(mid, exact)) {
      if (exact) return {mid, mid, mid, tol};
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi, lo + (hi - lo) / 2, tol};
}

namespace detail {

// Sign of h(x) - 1 for an increasing recurrence h; a non-positive
// denominator means x is already past every later root.
template <class Eval>
auto unit_crossing(Eval eval) {
  return [eval](double x, bool& exact) {
    try {
      const long double v = eval(static_cast<long double>(x));
      exact = (v == 1.0L);
      return v >= 1.0L;
    } catch (const DomainError&) {
      return true;
    }
  };
}

}  // namespace detail

/// a_i: the root of f_i(x) = 1 in (0, 1]. a_1 = 1.
[[nodiscard]] inline RootBracket root_a(int i, double tol = 1e-12) {
  detail::check_index(i);
  return bisect_increasing(
      detail::unit_crossing([i](long double x) { return f_value<long double>(i, x); }), 0.0, 1.0,
      tol, "root_a(" + std::to_string(i) + ")");
}

/// b_i: the root of g_i(x) = 1 in (0, 1]. b_1 = 1.
[[nodiscard]] inline RootBracket root_b(int i, double tol = 1e-12) {
  detail::check_index(i);
  return bisect_increasing(
      detail::unit_crossing([i](long double x) { return g_value<long double>(i, x); }), 0.0, 1.0,
      tol, "root_b(" + std::to_string(i) + ")");
}

/// c_2: the root of 1 - 4x + 2x^2 in (0, 1), i.e. 1 - sqrt(2)/2.
[[nodiscard]] inline RootBracket root_c2(double tol = 1e-12) {
  return bisect_increasing(
      [](double x, bool& exact) {
        const long double X = x;
        const long double v = -(1 - 4 * X + 2 * X * X);
        exact = (v == 0);
        return v >= 0;
      },
      0.0, 0.5, tol, "root_c2");
}

/// c_i for i >= 2: b_{i-1} when i >= 5, c_2 when 2 <= i <= 4.
[[nodiscard]] inline RootBracket root_c(int i, double tol = 1e-12) {
  if (i < 2) throw std::invalid_argument("c_i is defined for i >= 2");
  detail::check_index(i);
  return i >= 5 ? root_b(i - 1, tol) : root_c2(tol);
}

/// alpha_n: the root in (1/4, 1) of g_{n-4}(x) + x/(1-x)^2 = 1, which is the
/// alpha for which G_{1,1:n-6:1,1} is consistently normal. Valid for n >= 6.
[[nodiscard]] inline RootBracket solve_alpha_n(int n, double tol = 1e-12) {
  if (n < 6) throw std::invalid_argument("alpha_n is defined for n >= 6");
  detail::check_index(n - 4);
  return bisect_increasing(
      detail::unit_crossing([n](long double x) {
        return g_value<long double>(n - 4, x) + x / ((1 - x) * (1 - x));
      }),
      0.25, 1.0, tol, "solve_alpha_n(" + std::to_string(n) + ")");
}

}  // namespace hyperrho
