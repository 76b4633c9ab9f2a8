#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "owl/common.hpp"
#include "owl/weights.hpp"

namespace owl {

/// Permutation that orders a vector by non-increasing magnitude.
/// sorted[i] = x[forward[i]] and inverse[forward[i]] = i. Ties in |x| are
/// broken by ascending original index.
struct SortPermutation {
    std::vector<index_t> forward;
    std::vector<index_t> inverse;

    index_t size() const noexcept { return static_cast<index_t>(forward.size()); }

    static SortPermutation identity(index_t n) {
        SortPermutation p;
        p.forward.resize(static_cast<std::size_t>(n));
        std::iota(p.forward.begin(), p.forward.end(), index_t{0});
        p.inverse = p.forward;
        return p;
    }
};

struct SortedByMagnitude {
    vec sorted;
    SortPermutation perm;
};

inline SortedByMagnitude sort_by_abs_desc(const vec &x) {
    const index_t n = x.size();
    if (n == 0)
        throw dimension_error("sort_by_abs_desc: empty input");
    SortedByMagnitude out;
    auto &fwd = out.perm.forward;
    fwd.resize(static_cast<std::size_t>(n));
    std::iota(fwd.begin(), fwd.end(), index_t{0});
    std::stable_sort(fwd.begin(), fwd.end(),
                     [&](index_t a, index_t b) { return std::abs(x[a]) > std::abs(x[b]); });
    out.perm.inverse.resize(fwd.size());
    out.sorted.resize(n);
    for (index_t i = 0; i < n; ++i) {
        out.perm.inverse[static_cast<std::size_t>(fwd[i])] = i;
        out.sorted[i] = x[fwd[i]];
    }
    return out;
}

inline vec unsort(const vec &sorted, const SortPermutation &perm) {
    check_same_size(sorted.size(), perm.size(), "unsort");
    vec x(sorted.size());
    for (index_t i = 0; i < sorted.size(); ++i)
        x[perm.forward[static_cast<std::size_t>(i)]] = sorted[i];
    return x;
}

namespace detail {

inline vec abs_sorted_desc(const vec &x) {
    vec a = x.cwiseAbs();
    std::sort(a.begin(), a.end(), std::greater<>());
    return a;
}

} // namespace detail

/// Omega_w(x) = sum_i w_i |x|_(i), with |x|_(1) >= |x|_(2) >= ...
inline double evaluate(const vec &x, const WeightVector &w) {
    check_same_size(x.size(), w.size(), "evaluate");
    if (x.size() == 0)
        return 0.0;
    return detail::abs_sorted_desc(x).dot(w.values());
}

/// Dual norm: max over k of (sum of the k largest |x_i|) / (sum of the k
/// largest weights). Prefix sums accumulate left to right.
inline double dual_norm(const vec &x, const WeightVector &w) {
    check_same_size(x.size(), w.size(), "dual_norm");
    const vec a = detail::abs_sorted_desc(x);
    double best = 0.0;
    double xs = 0.0;
    double ws = 0.0;
    for (index_t k = 0; k < a.size(); ++k) {
        xs += a[k];
        ws += w[k];
        if (ws > 0)
            best = std::max(best, xs / ws);
    }
    return best;
}

inline constexpr index_t max_enumeration_size = 8;

/// Brute-force dual norm: builds every vertex of the unit ball explicitly
/// (each k, each support of size k, each sign pattern, magnitude tau_k) and
/// returns the largest inner product with x. Exponential; n <= 8 only.
inline double dual_norm_by_vertex_enumeration(const vec &x, const WeightVector &w) {
    check_same_size(x.size(), w.size(), "dual_norm_by_vertex_enumeration");
    const index_t n = x.size();
    if (n > max_enumeration_size)
        throw dimension_error("dual_norm_by_vertex_enumeration: n too large for enumeration");

    std::vector<double> tau(static_cast<std::size_t>(n) + 1, 0.0);
    double ws = 0.0;
    for (index_t k = 1; k <= n; ++k) {
        ws += w[k - 1];
        tau[static_cast<std::size_t>(k)] = ws > 0 ? 1.0 / ws : 0.0;
    }

    // Patterns in {-1, 0, +1}^n encoded in base 3.
    long total = 1;
    for (index_t i = 0; i < n; ++i)
        total *= 3;

    double best = 0.0;
    vec vertex(n);
    for (long code = 1; code < total; ++code) {
        long c = code;
        index_t k = 0;
        for (index_t i = 0; i < n; ++i) {
            const int digit = static_cast<int>(c % 3);
            c /= 3;
            vertex[i] = digit == 0 ? 0.0 : (digit == 1 ? 1.0 : -1.0);
            if (digit != 0)
                ++k;
        }
        vertex *= tau[static_cast<std::size_t>(k)];
        best = std::max(best, vertex.dot(x));
    }
    return best;
}

struct BallPolygon {
    std::vector<std::array<double, 2>> points; // counter-clockwise from angle 0
    bool degenerate = false;                   // some emitted points are not vertices
};

/// Vertices of the 2-D unit ball {u : Omega_w(u) <= 1}: the axis points at
/// distance tau_1 = 1/w1 and the diagonal points (+-tau_2, +-tau_2) with
/// tau_2 = 1/(w1 + w2). Equal weights give the l1 diamond (diagonals are not
/// vertices and are dropped). A zero second weight gives the l_inf square;
/// all eight points are emitted and flagged.
inline BallPolygon unit_ball_vertices_2d(const WeightVector &w) {
    if (w.size() != 2)
        throw dimension_error("unit_ball_vertices_2d: weight vector must have length 2");
    const double t1 = 1.0 / w[0];
    const double t2 = 1.0 / (w[0] + w[1]);

    BallPolygon ball;
    ball.degenerate = (w[1] == 0.0);
    const bool with_diagonals = (w[0] != w[1]);

    ball.points.push_back({t1, 0.0});
    if (with_diagonals)
        ball.points.push_back({t2, t2});
    ball.points.push_back({0.0, t1});
    if (with_diagonals)
        ball.points.push_back({-t2, t2});
    ball.points.push_back({-t1, 0.0});
    if (with_diagonals)
        ball.points.push_back({-t2, -t2});
    ball.points.push_back({0.0, -t1});
    if (with_diagonals)
        ball.points.push_back({t2, -t2});
    return ball;
}

} // namespace owl
