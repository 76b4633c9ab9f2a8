#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "owl/norm.hpp"

using namespace owl;
using owl::testing::random_vector;
using owl::testing::random_vector_with_ties;
using owl::testing::random_weights;

namespace {
vec V(std::initializer_list<double> xs) {
    vec v(static_cast<index_t>(xs.size()));
    std::copy(xs.begin(), xs.end(), v.begin());
    return v;
}
} // namespace

TEST(Sort, OrdersByMagnitude) {
    const auto s = sort_by_abs_desc(V({1, -3, 2}));
    EXPECT_EQ(s.sorted, V({-3, 2, 1}));
    EXPECT_EQ(s.perm.forward, (std::vector<index_t>{1, 2, 0}));
    EXPECT_EQ(s.perm.inverse, (std::vector<index_t>{2, 0, 1}));
}

TEST(Sort, TiesByAscendingIndex) {
    const auto s = sort_by_abs_desc(V({2, -2}));
    EXPECT_EQ(s.sorted, V({2, -2}));
    EXPECT_EQ(s.perm.forward, (std::vector<index_t>{0, 1}));
    const auto t = sort_by_abs_desc(V({-1, 5, 1, -5, 0}));
    EXPECT_EQ(t.perm.forward, (std::vector<index_t>{1, 3, 0, 2, 4}));
}

TEST(Sort, SingleAndEmpty) {
    const auto s = sort_by_abs_desc(V({5}));
    EXPECT_EQ(s.sorted, V({5}));
    EXPECT_EQ(s.perm.forward, (std::vector<index_t>{0}));
    EXPECT_THROW(sort_by_abs_desc(vec(0)), dimension_error);
}

TEST(Sort, Unsort) {
    const auto s = sort_by_abs_desc(V({1, -3, 2}));
    EXPECT_EQ(unsort(V({-3, 2, 1}), s.perm), V({1, -3, 2}));
    EXPECT_EQ(unsort(V({4, 5}), SortPermutation::identity(2)), V({4, 5}));
    EXPECT_THROW(unsort(V({1, 2}), s.perm), dimension_error);
}

TEST(SortProperty, RoundTripAndPermutation) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<index_t> dim(1, 50);
    for (int t = 0; t < 300; ++t) {
        const vec x = random_vector_with_ties(rng, dim(rng));
        const auto s = sort_by_abs_desc(x);
        EXPECT_EQ(unsort(s.sorted, s.perm), x); // bit-exact
        for (index_t i = 0; i < x.size(); ++i) {
            EXPECT_EQ(s.perm.inverse[s.perm.forward[i]], i);
            if (i + 1 < x.size()) {
                EXPECT_GE(std::abs(s.sorted[i]), std::abs(s.sorted[i + 1]));
                if (std::abs(s.sorted[i]) == std::abs(s.sorted[i + 1])) {
                    EXPECT_LT(s.perm.forward[i], s.perm.forward[i + 1]);
                }
            }
        }
    }
}

TEST(Norm, Examples) {
    EXPECT_EQ(evaluate(vec::Zero(3), make_oscar(3, 1, 0.5)), 0.0);
    EXPECT_EQ(evaluate(V({-2, 3, 1}), make_l1(3, 1.0)), 6.0);
    // OSCAR pairwise form: 1 * 6 + 0.5 * (3 + 2 + 3)
    const vec x = V({1, -3, 2});
    EXPECT_DOUBLE_EQ(owl::testing::oscar_pairwise(x, 1.0, 0.5), 10.0);
    EXPECT_DOUBLE_EQ(evaluate(x, make_oscar(3, 1.0, 0.5)), 10.0);
    EXPECT_THROW(evaluate(V({1, 2}), make_l1(3, 1.0)), dimension_error);
}

TEST(NormProperty, MatchesPairwiseOscarForm) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<index_t> dim(1, 30);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int t = 0; t < 200; ++t) {
        const index_t n = dim(rng);
        const double l1 = u(rng) + 0.01, l2 = u(rng);
        const vec x = random_vector_with_ties(rng, n);
        const double ref = owl::testing::oscar_pairwise(x, l1, l2);
        EXPECT_NEAR(evaluate(x, make_oscar(n, l1, l2)), ref, 1e-12 * (1 + ref));
    }
}

TEST(NormProperty, PermutationAndSignInvariance) {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<index_t> dim(1, 30);
    for (int t = 0; t < 200; ++t) {
        const index_t n = dim(rng);
        const auto w = random_weights(rng, n);
        const vec x = random_vector(rng, n);
        std::vector<index_t> q(static_cast<std::size_t>(n));
        std::iota(q.begin(), q.end(), index_t{0});
        std::shuffle(q.begin(), q.end(), rng);
        vec qx(n);
        for (index_t i = 0; i < n; ++i)
            qx[i] = x[q[i]];
        const double ox = evaluate(x, w);
        EXPECT_EQ(evaluate(x.cwiseAbs(), w), ox);
        EXPECT_NEAR(evaluate(qx, w), ox, 1e-12 * (1 + ox));
    }
}

TEST(NormProperty, RearrangementMaximality) {
    // Sorted order maximizes <|x| arranged, w> over all arrangements.
    std::mt19937_64 rng(14);
    for (int t = 0; t < 100; ++t) {
        const index_t n = std::uniform_int_distribution<index_t>(1, 6)(rng);
        const auto w = random_weights(rng, n);
        vec a = random_vector(rng, n).cwiseAbs();
        const double best = evaluate(a, w);
        std::sort(a.begin(), a.end());
        do {
            EXPECT_LE(a.dot(w.values()), best + 1e-12 * (1 + best));
        } while (std::next_permutation(a.begin(), a.end()));
    }
}

TEST(DualNorm, Examples) {
    EXPECT_DOUBLE_EQ(dual_norm(V({3, -1}), make_l1(2, 1.0)), 3.0);
    EXPECT_DOUBLE_EQ(dual_norm(V({3, -1}), make_linf(2, 1.0)), 4.0);
    EXPECT_DOUBLE_EQ(dual_norm_by_vertex_enumeration(V({3, -1}), make_linf(2, 1.0)), 4.0);
    const auto w = make_custom(V({1.5, 1}));
    EXPECT_DOUBLE_EQ(dual_norm(V({1, 1}), w), 0.8);
    EXPECT_DOUBLE_EQ(dual_norm_by_vertex_enumeration(V({1, 1}), w), 0.8);
    EXPECT_THROW(dual_norm(V({1}), w), dimension_error);
}

TEST(DualNormEnumeration, Examples) {
    EXPECT_DOUBLE_EQ(dual_norm_by_vertex_enumeration(V({3, -1}), make_l1(2, 1.0)), 3.0);
    EXPECT_EQ(dual_norm_by_vertex_enumeration(vec::Zero(4), make_oscar(4, 1, 1)), 0.0);
    EXPECT_DOUBLE_EQ(dual_norm_by_vertex_enumeration(V({-5}), make_l1(1, 2.0)), 2.5);
    EXPECT_THROW(dual_norm_by_vertex_enumeration(vec::Zero(9), make_l1(9, 1.0)), dimension_error);
}

TEST(DualNormProperty, Specializations) {
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<index_t> dim(1, 40);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int t = 0; t < 300; ++t) {
        const index_t n = dim(rng);
        const double lam = u(rng);
        const vec x = random_vector(rng, n);
        const double linf = x.lpNorm<Eigen::Infinity>();
        const double l1 = x.lpNorm<1>();
        EXPECT_NEAR(dual_norm(x, make_l1(n, lam)), linf / lam, 1e-12 * (1 + linf / lam));
        EXPECT_NEAR(dual_norm(x, make_linf(n, lam)), l1 / lam, 1e-12 * (1 + l1 / lam));
    }
}

TEST(DualNormProperty, GeneralizedCauchySchwarz) {
    std::mt19937_64 rng(16);
    std::uniform_int_distribution<index_t> dim(1, 40);
    for (int t = 0; t < 500; ++t) {
        const index_t n = dim(rng);
        const auto w = random_weights(rng, n);
        const vec x = random_vector(rng, n), u = random_vector(rng, n);
        const double bound = evaluate(x, w) * dual_norm(u, w);
        EXPECT_LE(std::abs(x.dot(u)), bound + 1e-12 * (1 + bound));
    }
}

TEST(DualNormProperty, AgreesWithEnumeration) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<index_t> dim(1, 5);
    for (int t = 0; t < 300; ++t) {
        const index_t n = dim(rng);
        const auto w = random_weights(rng, n);
        const vec x = random_vector_with_ties(rng, n);
        const double ref = dual_norm_by_vertex_enumeration(x, w);
        EXPECT_NEAR(dual_norm(x, w), ref, 1e-12 * std::max(1.0, ref));
    }
}

TEST(Ball, Octagon) {
    const auto ball = unit_ball_vertices_2d(make_oscar(2, 1.0, 0.5));
    ASSERT_EQ(ball.points.size(), 8u);
    EXPECT_FALSE(ball.degenerate);
    const double t1 = 2.0 / 3.0, t2 = 0.4;
    const std::vector<std::array<double, 2>> expect = {{t1, 0},  {t2, t2},  {0, t1},  {-t2, t2},
                                                       {-t1, 0}, {-t2, -t2}, {0, -t1}, {t2, -t2}};
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_DOUBLE_EQ(ball.points[i][0], expect[i][0]);
        EXPECT_DOUBLE_EQ(ball.points[i][1], expect[i][1]);
    }
}

TEST(Ball, SquareForEqualWeights) {
    const auto ball = unit_ball_vertices_2d(make_l1(2, 1.0));
    ASSERT_EQ(ball.points.size(), 4u);
    EXPECT_FALSE(ball.degenerate);
    EXPECT_EQ(ball.points[0], (std::array<double, 2>{1, 0}));
    EXPECT_EQ(ball.points[1], (std::array<double, 2>{0, 1}));
    EXPECT_EQ(ball.points[2], (std::array<double, 2>{-1, 0}));
    EXPECT_EQ(ball.points[3], (std::array<double, 2>{0, -1}));
}

TEST(Ball, LinfFlaggedDegenerate) {
    const auto ball = unit_ball_vertices_2d(make_linf(2, 1.0));
    ASSERT_EQ(ball.points.size(), 8u);
    EXPECT_TRUE(ball.degenerate);
    EXPECT_EQ(ball.points[1], (std::array<double, 2>{1, 1}));
    EXPECT_THROW(unit_ball_vertices_2d(make_l1(3, 1.0)), dimension_error);
}

TEST(BallProperty, PointsOnUnitSphereInAngleOrder) {
    std::mt19937_64 rng(18);
    for (int t = 0; t < 200; ++t) {
        const auto w = random_weights(rng, 2);
        const auto ball = unit_ball_vertices_2d(w);
        double last = -1.0;
        for (const auto &p : ball.points) {
            EXPECT_NEAR(evaluate(V({p[0], p[1]}), w), 1.0, 1e-12);
            double ang = std::atan2(p[1], p[0]);
            if (ang < 0)
                ang += 2 * M_PI;
            EXPECT_GT(ang, last);
            last = ang;
        }
    }
}
