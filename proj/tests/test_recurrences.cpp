#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <gmpxx.h>

#include "hyperrho/certificates.hpp"
#include "hyperrho/generators.hpp"
#include "hyperrho/recurrences.hpp"

using namespace hyperrho;

namespace {

const double kPi = std::numbers::pi;

// Closed forms of f_i and g_i and of the L_i functions as stated alongside
// the ordering proof, compared as exact rational identities.
mpq_class f7_closed(const mpq_class& x) {
  return x * (-1 + 5 * x - 6 * x * x + x * x * x) / (-1 + 6 * x - 10 * x * x + 4 * x * x * x);
}
mpq_class g7_closed(const mpq_class& x) {
  const mpq_class x2 = x * x, x3 = x2 * x, x4 = x3 * x;
  return x * (1 - 6 * x + 10 * x2 - 5 * x3 + x4) / (1 - 7 * x + 15 * x2 - 11 * x3 + 3 * x4);
}
mpq_class f8_closed(const mpq_class& x) {
  const mpq_class x2 = x * x, x3 = x2 * x, x4 = x3 * x;
  return (x - 6 * x2 + 10 * x3 - 4 * x4) / (1 - 7 * x + 15 * x2 - 10 * x3 + x4);
}
mpq_class g8_closed(const mpq_class& x) {
  const mpq_class x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  return -x * (1 - 7 * x + 15 * x2 - 11 * x3 + 3 * x4) /
         (-1 + 8 * x - 21 * x2 + 21 * x3 - 8 * x4 + x5);
}
mpq_class L_exact(int i, const mpq_class& x) {
  return f_value<mpq_class>(i, x) + x / (1 - 2 * x) -
         (g_value<mpq_class>(i, x) + x / ((1 - x) * (1 - x)));
}
mpq_class L7_closed(const mpq_class& x) {
  const mpq_class x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x, x6 = x5 * x, x7 = x6 * x;
  const mpq_class num = x3 * (1 - 11 * x + 45 * x2 - 85 * x3 + 76 * x4 - 31 * x5 + 3 * x6 + x7);
  const mpq_class den = (x - 1) * (x - 1) * (2 * x - 1) * (1 - 4 * x + 2 * x2) *
                        (1 - 7 * x + 15 * x2 - 11 * x3 + 3 * x4);
  return -num / den;
}
// Factored from the definition. The printed L_8 differs from it; see L8_printed.
mpq_class L8_closed(const mpq_class& x) {
  const mpq_class x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x, x6 = x5 * x;
  const mpq_class num =
      x3 * (3 * x - 1) * (x6 - 6 * x5 + 26 * x4 - 50 * x3 + 35 * x2 - 10 * x + 1);
  const mpq_class den = (x - 1) * (x - 1) * (2 * x - 1) * (x2 - 4 * x + 1) * (x2 - 3 * x + 1) *
                        (x3 - 9 * x2 + 6 * x - 1);
  return -num / den;
}
mpq_class L8_printed(const mpq_class& x) {
  const mpq_class x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x, x6 = x5 * x, x7 = x6 * x;
  const mpq_class num = x3 * (1 - 11 * x + 46 * x2 - 93 * x3 + 97 * x4 - 54 * x5 + 18 * x6 - 3 * x7);
  const mpq_class den = (x - 1) * (x - 1) * (2 * x - 1) * (-1 + 5 * x - 6 * x2 + x3) *
                        (1 - 6 * x + 10 * x2 - 5 * x3 + x4);
  return num / den;
}

std::vector<mpq_class> rational_points() {
  std::vector<mpq_class> xs;
  for (int k = 1; k <= 24; ++k) xs.emplace_back(k, 97);  // up to ~0.247
  xs.emplace_back(1, 4);
  xs.emplace_back(257, 1000);
  xs.emplace_back(2567, 10000);
  return xs;
}

}  // namespace

TEST(Recurrence, LowIndexClosedForms) {
  for (double x : {0.05, 0.2, 0.3, 0.45}) {
    EXPECT_DOUBLE_EQ(eval_f(1, x), x);
    EXPECT_DOUBLE_EQ(eval_g(1, x), x);
    EXPECT_NEAR(eval_f(2, x), x / (1 - x), 1e-15);
    EXPECT_NEAR(eval_f(3, x), x * (1 - x) / (1 - 2 * x), 1e-15);
    EXPECT_NEAR(eval_g(2, x), x / ((1 - x) * (1 - x)), 1e-15);
  }
}

TEST(Recurrence, HighIndexClosedFormsAreExact) {
  for (const auto& x : rational_points()) {
    EXPECT_EQ(f_value<mpq_class>(7, x), f7_closed(x)) << x.get_str();
    EXPECT_EQ(g_value<mpq_class>(7, x), g7_closed(x)) << x.get_str();
    EXPECT_EQ(f_value<mpq_class>(8, x), f8_closed(x)) << x.get_str();
    EXPECT_EQ(g_value<mpq_class>(8, x), g8_closed(x)) << x.get_str();
  }
}

TEST(Recurrence, SharedFactorOfFSixAndGFour) {
  for (const auto& x : rational_points()) {
    const mpq_class q = 1 - 4 * x + 2 * x * x;
    EXPECT_EQ(f_value<mpq_class>(6, x) - 1,
              (1 - 2 * x) * q / (-1 + 5 * x - 6 * x * x + x * x * x));
    EXPECT_EQ(g_value<mpq_class>(4, x) - 1, (1 - x) * q / (-1 + 4 * x - 3 * x * x + x * x * x));
    // The cubic 3x^3 - 9x^2 + 6x - 1 fixes alpha_10.
    EXPECT_EQ(f_value<mpq_class>(6, x) - (1 - x / (1 - 2 * x)),
              -(3 * x - 1) * (3 * x * x * x - 9 * x * x + 6 * x - 1) /
                  ((2 * x - 1) * (x * x * x - 6 * x * x + 5 * x - 1)));
    EXPECT_EQ(f_value<mpq_class>(8, x) - x / ((1 - x) * (1 - x)),
              -x * x * (4 * x - 1) * (x * x - 3 * x + 1) /
                  ((x - 1) * (x - 1) * (x * x * x - 9 * x * x + 6 * x - 1)));
  }
}

TEST(Recurrence, LClosedForms) {
  for (const auto& x : rational_points()) {
    EXPECT_EQ(L_exact(7, x), L7_closed(x)) << x.get_str();
    EXPECT_EQ(L_exact(8, x), L8_closed(x)) << x.get_str();
  }
  // The printed L_8 is a different rational function, but it is also positive
  // on (1/4, alpha_12), which is all the ordering argument uses.
  EXPECT_NE(L_exact(8, mpq_class(1, 4)), L8_printed(mpq_class(1, 4)));
  const double a12 = solve_alpha_n(12).value;
  for (int k = 1; k < 200; ++k) {
    const mpq_class x = mpq_class(1, 4) + (mpq_class(a12) - mpq_class(1, 4)) * mpq_class(k, 200);
    EXPECT_GT(L_exact(8, x), 0);
    EXPECT_GT(L8_printed(x), 0);
  }
  EXPECT_NEAR(eval_L(7, 0.2567), L7_closed(mpq_class(2567, 10000)).get_d(), 1e-14);
}

TEST(Recurrence, DomainErrors) {
  EXPECT_THROW((void)eval_f(3, 0.6), DomainError);
  EXPECT_THROW((void)f_value<double>(2, 1.0), DomainError);
  EXPECT_THROW((void)eval_g(2, 1.0), DomainError);
  EXPECT_THROW((void)eval_f(0, 0.2), std::invalid_argument);
  EXPECT_THROW((void)eval_f(kMaxRecurrenceIndex + 1, 0.2), std::invalid_argument);
  EXPECT_THROW((void)eval_L(6, 0.3), std::invalid_argument);
  EXPECT_THROW((void)eval_L(7, 0.5), DomainError);
}

TEST(Table, PrefixAndValues) {
  const auto t = make_table(0.3, 12);
  ASSERT_EQ(t.f.size(), 12u);
  EXPECT_EQ(t.f[0], 0.3);
  EXPECT_EQ(t.g[0], 0.3);
  // a_5 ~ 0.308 > 0.3 > a_6 = c_2, so f_1..f_5 lie in (0, 1) and f_6 > 1.
  EXPECT_EQ(t.valid_prefix_f, 5);
  EXPECT_GT(t.f[5], 1.0);
  EXPECT_TRUE(std::isnan(t.f[6]));
  for (int i = 0; i + 1 < t.valid_prefix_f; ++i) EXPECT_LT(t.f[i], t.f[i + 1]);
  // b_3 ~ 0.318 > 0.3 > b_4 = c_2.
  EXPECT_EQ(t.valid_prefix_g, 3);
  EXPECT_THROW((void)make_table(1.0), DomainError);
}

TEST(Table, SmallAlphaStaysValid) {
  const auto t = make_table(0.2, kMaxRecurrenceIndex);
  EXPECT_EQ(t.valid_prefix_f, kMaxRecurrenceIndex);
  EXPECT_EQ(t.valid_prefix_g, kMaxRecurrenceIndex);
}

TEST(Roots, AMatchesCosineFormula) {
  // f_i(x) = 1 first happens at x = 1 / (4 cos^2(pi / (i + 2))).
  for (int i = 1; i <= 30; ++i) {
    const double c = std::cos(kPi / (i + 2));
    const auto b = root_a(i);
    EXPECT_NEAR(b.value, 1.0 / (4 * c * c), 1e-11) << i;
    EXPECT_LE(b.hi - b.lo, 1e-12);
  }
  EXPECT_EQ(root_a(1).value, 1.0);
  EXPECT_NEAR(root_a(2).value, 0.5, 1e-12);
  EXPECT_NEAR(root_a(3).value, (3 - std::sqrt(5.0)) / 2, 1e-12);
}

TEST(Roots, BLowIndices) {
  EXPECT_EQ(root_b(1).value, 1.0);
  EXPECT_NEAR(root_b(2).value, (3 - std::sqrt(5.0)) / 2, 1e-12);
  EXPECT_NEAR(root_b(4).value, 1 - std::sqrt(2.0) / 2, 1e-12);
}

TEST(Roots, CTwoAndRewrite) {
  EXPECT_NEAR(root_c2().value, 1 - std::sqrt(2.0) / 2, 1e-12);
  for (int i = 2; i <= 4; ++i) EXPECT_EQ(root_c(i).value, root_c2().value);
  for (int i = 5; i <= 20; ++i) EXPECT_EQ(root_c(i).value, root_b(i - 1).value);
  EXPECT_THROW((void)root_c(1), std::invalid_argument);
}

TEST(Roots, BracketIsHonest) {
  for (int i = 2; i <= 12; ++i) {
    const auto b = root_a(i);
    EXPECT_LE(f_value<long double>(i, b.lo), 1.0L);
    EXPECT_GE(f_value<long double>(i, b.hi), 1.0L);
    EXPECT_THROW((void)bisect_increasing([](double, bool&) { return true; }, 0.0, 1.0, 1e-9, "t"),
                 BracketError);
  }
}

TEST(AlphaN, KnownConstants) {
  EXPECT_NEAR(solve_alpha_n(10).value, 0.257773, 1e-6);
  EXPECT_NEAR(solve_alpha_n(11).value, 0.25672, 1e-5);
  EXPECT_NEAR(solve_alpha_n(12).value, 0.255903, 1e-6);
  const double a = solve_alpha_n(10).value;
  EXPECT_NEAR(3 * a * a * a - 9 * a * a + 6 * a - 1, 0.0, 1e-12);
  EXPECT_THROW((void)solve_alpha_n(5), std::invalid_argument);
}

TEST(AlphaN, AgreesWithTreeSolverOnG) {
  // alpha_n is the alpha at which G_{1,1:n-6:1,1} is consistently normal.
  for (int n = 6; n <= 24; ++n) {
    const double tree = solve_tree_alpha(make_G(1, 1, n - 6, 1, 1, 3)).alpha;
    EXPECT_NEAR(solve_alpha_n(n).value, tree, 1e-11) << n;
  }
}

TEST(AlphaN, DecreasesTowardOneQuarter) {
  double prev = 1.0;
  for (int n = 6; n <= 60; ++n) {
    const double a = solve_alpha_n(n).value;
    EXPECT_LT(a, prev);
    EXPECT_GT(a, 0.25);
    prev = a;
  }
}

TEST(LFunction, PositiveBelowAlphaNPlusFour) {
  for (int i = 7; i <= 40; ++i) {
    const double top = solve_alpha_n(i + 4).lo;
    for (int t = 1; t < 50; ++t) {
      const mpq_class x = mpq_class(0.25) + (mpq_class(top) - mpq_class(0.25)) * mpq_class(t, 50);
      EXPECT_GT(L_exact(i, x), 0) << "i=" << i << " x=" << x.get_d();
    }
  }
}

TEST(LFunction, SignAtAlphaNDecidesGAgainstF) {
  // L_{n-4}(alpha_n) = f_{n-4}(alpha_n) + alpha_n / (1 - 2 alpha_n) - 1: zero at
  // n = 10 and positive beyond.
  EXPECT_NEAR(eval_f(6, solve_alpha_n(10).value) +
                  solve_alpha_n(10).value / (1 - 2 * solve_alpha_n(10).value),
              1.0, 1e-11);
  for (int n = 11; n <= 40; ++n) EXPECT_GT(eval_L(n - 4, solve_alpha_n(n).value), 1e-9) << n;
}
