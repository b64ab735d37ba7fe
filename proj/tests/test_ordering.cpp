#include <gtest/gtest.h>

#include "hyperrho/ordering.hpp"

using namespace hyperrho;

namespace {

std::vector<std::string> families(const OrderingReport& rep) {
  std::vector<std::string> out;
  for (const auto& row : rep.rows) out.push_back(row.family);
  return out;
}

}  // namespace

TEST(Ordering, ChainHoldsForLargeN) {
  for (int r : {3, 4}) {
    for (int n = 20; n <= 30; ++n) {
      const auto rep = order_families(r, n);
      EXPECT_TRUE(rep.chain_ok) << "r=" << r << " n=" << n
                                << (rep.failures.empty() ? "" : " " + rep.failures.front());
      EXPECT_TRUE(rep.chain_ok_without_bd);
      EXPECT_EQ(families(rep),
                (std::vector<std::string>{"A", "F11", "G11", "F12", "E11", "G12", "BD", "C"}));
    }
  }
}

TEST(Ordering, RowsAreSortedWithMargins) {
  const auto rep = order_families(3, 20);
  EXPECT_NEAR(rep.threshold, 2 * std::cbrt(4.0), 1e-15);
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    EXPECT_LE(rep.rows[i].rho, rep.rows[i + 1].rho);
    EXPECT_DOUBLE_EQ(rep.rows[i].margin, rep.rows[i + 1].rho - rep.rows[i].rho);
  }
  EXPECT_DOUBLE_EQ(rep.rows.back().margin, rep.threshold - rep.rows.back().rho);
  for (const auto& row : rep.rows) {
    EXPECT_TRUE(row.converged);
    EXPECT_NEAR(row.alpha, alpha_from_rho(row.rho, 3), 1e-15);
    EXPECT_EQ(row.reconstructed, row.family == "BD");
    EXPECT_EQ(row.equality_class, row.family == "C");
  }
  EXPECT_EQ(rep.rows.back().family, "C");
  EXPECT_NEAR(rep.rows.back().rho, rep.threshold, 1e-7);
}

TEST(Ordering, SmallNReversal) {
  for (int n = 7; n <= 9; ++n) {
    const auto rep = order_families(3, n);
    EXPECT_TRUE(rep.chain_ok) << n;
    const auto f = families(rep);
    const auto g11 = std::find(f.begin(), f.end(), "G11") - f.begin();
    const auto f12 = std::find(f.begin(), f.end(), "F12") - f.begin();
    EXPECT_LT(f12, g11) << n;
  }
}

TEST(Ordering, EqualityAtTen) {
  const auto rep = order_families(3, 10);
  EXPECT_TRUE(rep.chain_ok);
  double g11 = 0, f12 = 0;
  for (const auto& row : rep.rows) {
    if (row.family == "G11") g11 = row.rho;
    if (row.family == "F12") f12 = row.rho;
  }
  EXPECT_NEAR(g11, f12, 1e-7);
}

TEST(Ordering, BDRowStartsAtEight) {
  const auto f7 = families(order_families(3, 7));
  EXPECT_EQ(std::count(f7.begin(), f7.end(), "BD"), 0);
  const auto f8 = families(order_families(3, 8));
  EXPECT_EQ(std::count(f8.begin(), f8.end(), "BD"), 1);
}

TEST(Ordering, OptionsDropRows) {
  OrderingOptions opt;
  opt.include_bd = false;
  opt.include_cycle = false;
  const auto rep = order_families(3, 15, opt);
  EXPECT_EQ(rep.rows.size(), 6u);
  EXPECT_TRUE(rep.chain_ok);
}

TEST(Ordering, Deterministic) {
  const auto a = order_families(4, 12), b = order_families(4, 12);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].family, b.rows[i].family);
    EXPECT_EQ(a.rows[i].rho, b.rows[i].rho);
  }
}

TEST(Ordering, NonConvergenceMarksTheRow) {
  OrderingOptions opt;
  opt.power.max_iter = 2;
  const auto rep = order_families(3, 12, opt);
  EXPECT_FALSE(rep.chain_ok);
  EXPECT_FALSE(rep.failures.empty());
}

TEST(Ordering, Errors) {
  EXPECT_THROW((void)order_families(2, 10), InvalidParameters);
  EXPECT_THROW((void)order_families(3, 6), InvalidParameters);
}

TEST(Precision, Parsing) {
  EXPECT_EQ(parse_precision("double"), Precision::Double);
  EXPECT_EQ(parse_precision("long double"), Precision::LongDouble);
  EXPECT_FALSE(parse_precision("quad").has_value());
}

TEST(Precision, LongDoubleChain) {
  OrderingOptions opt;
  opt.precision = Precision::LongDouble;
  EXPECT_TRUE(order_families(3, 11, opt).chain_ok);
}
