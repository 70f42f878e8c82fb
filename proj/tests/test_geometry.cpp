#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oppenheim/geometry.hpp"
#include "oracles.hpp"

using namespace oppenheim;

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

}  // namespace

TEST(Distance, Examples) {
  const auto i = HypPoint::h2(0, 1);
  EXPECT_EQ(hyp_distance(i, i), 0.0L);
  EXPECT_NEAR(static_cast<double>(hyp_distance(i, HypPoint::h2(0, std::exp(2.5L)))), 2.5, 1e-15);
  EXPECT_NEAR(static_cast<double>(hyp_distance(i, HypPoint::h2(1, 1))), std::acosh(1.5), 1e-15);
  EXPECT_NEAR(static_cast<double>(hyp_distance(HypPoint::h3({0, 0}, 1), HypPoint::h3({0, 1}, 1))), std::acosh(1.5),
              1e-15);
}

TEST(Distance, MoebiusInvariant) {
  // z -> a z + b with a > 0 is an isometry of the half-plane.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3), pos(0.1, 3);
  for (int k = 0; k < 50; ++k) {
    const auto x = HypPoint::h2(u(rng), pos(rng));
    const auto y = HypPoint::h2(u(rng), pos(rng));
    const Real a = pos(rng), b = u(rng);
    const auto X = HypPoint::h2(a * x.z.real() + b, a * x.t);
    const auto Y = HypPoint::h2(a * y.z.real() + b, a * y.t);
    EXPECT_NEAR(static_cast<double>(hyp_distance(x, y)), static_cast<double>(hyp_distance(X, Y)), 1e-12);
  }
}

TEST(Displacement, Examples) {
  for (Real t : {0.5L, 1.0L, 2.0L, 4.0L}) {
    EXPECT_EQ(conj_displacement(t, 0), 0.0L);
    EXPECT_NEAR(static_cast<double>(conj_displacement(t, kPi)), static_cast<double>(4 * t), 1e-9);
  }
  EXPECT_NEAR(static_cast<double>(conj_displacement(2, 0.01L)),
              static_cast<double>(oracle::displacement_by_moebius(2, 0.01L)), 1e-9);
}

TEST(Displacement, MatchesMoebiusOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> t(0.05, 4), theta(-3.1, 3.1);
  for (int k = 0; k < 100; ++k) {
    const Real a = t(rng), b = theta(rng);
    const Real expect = oracle::displacement_by_moebius(a, b);
    EXPECT_NEAR(static_cast<double>(conj_displacement(a, b)), static_cast<double>(expect), 1e-9);
    EXPECT_NEAR(static_cast<double>(conj_displacement_matrix(a, b)), static_cast<double>(expect), 1e-9);
  }
}

TEST(CornerMeasure, SmallRadiusVanishes) {
  Real last = 1;
  for (Real r : {1e-1L, 1e-2L, 1e-4L, 1e-8L}) {
    const Real m = corner_measure_real(2, r);
    EXPECT_LT(m, last);
    last = m;
  }
  EXPECT_LT(last, 1e-9L);
}

TEST(CornerMeasure, MatchesMonteCarloOverTheta) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> theta(-std::numbers::pi, std::numbers::pi);
  const long N = 2'000'000;
  long hits = 0;
  for (long k = 0; k < N; ++k) hits += conj_displacement(2, theta(rng)) <= 1 ? 1 : 0;
  const double p = static_cast<double>(hits) / N;
  const double se = std::sqrt(p * (1 - p) / N);
  EXPECT_NEAR(static_cast<double>(corner_measure_real(2, 1)), p, 3 * se);
}

TEST(CornerMeasure, MonotoneInRadius) {
  for (Real t : {1.0L, 2.0L, 3.0L}) {
    Real last = 0;
    for (Real r = 0.25L; r < 4 * t; r += 0.25L) {
      const Real m = displacement_measure(t, r);
      EXPECT_GE(m, last);
      last = m;
    }
    EXPECT_EQ(displacement_measure(t, 4 * t), 1.0L);
  }
}

TEST(Tree, SphereSizes) {
  EXPECT_EQ(tree_sphere_size(3, 0), 1);
  EXPECT_EQ(tree_sphere_size(3, 1), 4);
  EXPECT_EQ(tree_sphere_size(3, 2), 12);
  EXPECT_EQ(tree_sphere_size(3, 4), 108);
}

TEST(Tree, SphereSizesByBreadthFirstSearch) {
  // Oracle: explicit (p+1)-regular tree, counting non-backtracking walks.
  for (std::uint32_t p : {3u, 5u, 7u}) {
    std::vector<std::pair<int, int>> frontier{{0, -1}};  // (vertex label, edge arrived by)
    for (long m = 1; m <= 4; ++m) {
      std::vector<std::pair<int, int>> next;
      for (const auto& [v, from] : frontier)
        for (int e = 0; e <= static_cast<int>(p); ++e)
          if (e != from) next.emplace_back(v + 1, e);
      frontier.swap(next);
      EXPECT_EQ(tree_sphere_size(p, m), static_cast<long>(frontier.size()));
    }
  }
}

TEST(Tree, ConjugationMeasure) {
  EXPECT_EQ(tree_conj_measure(3, 2, 0), Rational(1, 108));
  EXPECT_EQ(tree_conj_bound(3, 2, 0), Rational(1, 108));
  EXPECT_EQ(tree_conj_measure(5, 1, 4), 1);
  EXPECT_EQ(tree_conj_measure(3, 2, 9), 1);
  for (std::uint32_t p : {3u, 5u, 7u})
    for (long t = 1; t <= 3; ++t)
      for (long r : {0L, 2L, 4L}) {
        if (r >= 4 * t) continue;
        EXPECT_EQ(1 / tree_conj_measure(p, t, r), Rational(tree_sphere_size(p, 2 * t - r / 2)));
        EXPECT_LE(tree_conj_measure(p, t, r), tree_conj_bound(p, t, r));
      }
}

TEST(Combined, NoFinitePlaces) {
  const Real C = calibrated_corner_constant();
  const auto b = combined_measure_bound(2, {}, {}, 3, C);
  EXPECT_NEAR(static_cast<double>(b.lhs), static_cast<double>(displacement_measure(2, 3)), 1e-15);
  EXPECT_NEAR(static_cast<double>(b.rhs), static_cast<double>(C * std::exp(3 - 2.0L)), 1e-15);
}

TEST(Combined, GridPoint) {
  const auto b = combined_measure_bound(3, {3}, {2}, 2, calibrated_corner_constant());
  // Oracle: explicit splitting sum over k in {0, 1, 2}.
  Real lhs = 0;
  for (long k = 0; k <= 2; ++k) lhs += displacement_measure(3, 2 - k) * to_real(tree_conj_measure(3, 2, k));
  EXPECT_NEAR(static_cast<double>(b.lhs), static_cast<double>(lhs), 1e-15);
  EXPECT_TRUE(b.holds());
}

TEST(Lemmas, GridIsDeterministic) {
  EXPECT_EQ(lemma_csv(lemma_grid(1)), lemma_csv(lemma_grid(1)));
  const auto rows = lemma_grid(1);
  EXPECT_GT(rows.size(), 100u);
  for (const auto& row : rows) {
    if (row.lemma.rfind("tree", 0) == 0 || row.lemma.rfind("displacement", 0) == 0) {
      EXPECT_TRUE(row.pass) << row.lemma << ' ' << row.params;
    }
  }
}
