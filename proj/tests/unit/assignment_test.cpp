#include <gtest/gtest.h>

#include "core/assignment.hpp"
#include "support/oracles.hpp"
#include "support/shapes.hpp"

namespace segcx::testing {
namespace {

std::vector<double> random_matrix(Rng& rng, std::size_t rows, std::size_t cols, bool integral) {
  std::vector<double> m(rows * cols);
  for (double& v : m) v = integral ? static_cast<double>(rng.below(10)) : 100.0 * rng.uniform();
  return m;
}

TEST(Hungarian, HandBuiltThreeByThree) {
  const std::vector<double> cost = {4, 1, 3, 2, 0, 5, 3, 2, 2};
  const Assignment a = solve_assignment(cost, 3, 3);
  EXPECT_DOUBLE_EQ(a.total, 5.0);
  EXPECT_DOUBLE_EQ(a.total, oracle::exhaustive_assignment(cost, 3, 3));
}

TEST(Hungarian, MatchesExhaustiveSearch) {
  Rng rng(1);
  for (int t = 0; t < 300; ++t) {
    const std::size_t rows = 1 + rng.below(6), cols = 1 + rng.below(6);
    const std::vector<double> cost = random_matrix(rng, rows, cols, t % 2 == 0);
    const Assignment a = solve_assignment(cost, rows, cols);
    EXPECT_NEAR(a.total, oracle::exhaustive_assignment(cost, rows, cols), 1e-9);
    std::vector<char> used(cols, 0);
    std::size_t pairs = 0;
    double sum = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const int c = a.row_to_col[r];
      if (c < 0) continue;
      ASSERT_FALSE(used[c]);
      used[c] = 1;
      ++pairs;
      sum += cost[r * cols + c];
    }
    EXPECT_EQ(pairs, std::min(rows, cols));
    EXPECT_NEAR(sum, a.total, 1e-9);
  }
}

TEST(Auction, WithinToleranceOfHungarian) {
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    const std::size_t rows = 1 + rng.below(40), cols = 1 + rng.below(40);
    const std::vector<double> benefit = random_matrix(rng, rows, cols, t % 3 == 0);
    std::vector<double> negated(benefit.size());
    for (std::size_t i = 0; i < benefit.size(); ++i) negated[i] = -benefit[i];
    const double best = -solve_assignment(negated, rows, cols).total;
    EXPECT_NEAR(solve_assignment_auction(benefit, rows, cols).total, best, 1e-6);
  }
}

TEST(Transportation, MatchesExpandedAssignment) {
  Rng rng(4);
  for (int t = 0; t < 150; ++t) {
    const std::size_t rows = 1 + rng.below(3), cols = 1 + rng.below(3);
    std::vector<long long> rm(rows), cm(cols);
    long long rs = 0, cs = 0;
    for (long long& v : rm) rs += v = 1 + static_cast<long long>(rng.below(3));
    for (long long& v : cm) cs += v = 1 + static_cast<long long>(rng.below(3));
    const std::vector<double> cost = random_matrix(rng, rows, cols, t % 2 == 0);
    const Transportation tr = solve_transportation(cost, rm, cm);
    EXPECT_NEAR(tr.total, oracle::exhaustive_transportation(cost, rm, cm), 1e-9);
    long long shipped = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      long long out = 0;
      for (std::size_t c = 0; c < cols; ++c) out += tr.flow[r * cols + c];
      EXPECT_LE(out, rm[r]);
      shipped += out;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      long long in = 0;
      for (std::size_t r = 0; r < rows; ++r) in += tr.flow[r * cols + c];
      EXPECT_LE(in, cm[c]);
    }
    EXPECT_EQ(shipped, std::min(rs, cs));
  }
}

TEST(Transportation, UnitMassesEqualHungarian) {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const std::size_t rows = 1 + rng.below(30), cols = 1 + rng.below(30);
    const std::vector<double> cost = random_matrix(rng, rows, cols, false);
    const std::vector<long long> rm(rows, 1), cm(cols, 1);
    EXPECT_NEAR(solve_transportation(cost, rm, cm).total, solve_assignment(cost, rows, cols).total, 1e-9);
  }
}

}  // namespace
}  // namespace segcx::testing
