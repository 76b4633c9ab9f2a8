#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "owl/common.hpp"
#include "owl/norm.hpp"
#include "owl/weights.hpp"

namespace owl {

/// One block of consecutive indices [begin, end) of the magnitude-sorted
/// input, carrying running sums so that merging never re-sums.
struct Group {
    index_t begin = 0;
    index_t end = 0;
    double sum_v = 0.0;
    double sum_w = 0.0;

    index_t size() const noexcept { return end - begin; }
    double mean_v() const { return sum_v / static_cast<double>(size()); }
    double mean_w() const { return sum_w / static_cast<double>(size()); }
    /// Group value before clamping; exactly the per-entry vbar - wbar.
    double diff() const { return mean_v() - mean_w(); }
};

/// Contiguous cover of {0, ..., n-1}: groups[0].begin == 0,
/// groups.back().end == n, groups[j+1].begin == groups[j].end.
struct GroupPartition {
    std::vector<Group> groups;

    index_t num_groups() const noexcept { return static_cast<index_t>(groups.size()); }
};

struct GroupAverages {
    vec vbar; // group means of the sorted magnitudes, expanded per entry
    vec wbar; // group means of the weights, expanded per entry
    GroupPartition partition;
};

/// Pool-adjacent-violators pass on d_i = v_i - w_i for a non-increasing fit.
/// Each index enters as a singleton group; the top two groups merge while the
/// lower group's difference is strictly below the upper one's. Ties do not
/// merge. O(n).
inline GroupAverages group_and_average(const vec &v_abs_sorted, const WeightVector &w) {
    const index_t n = v_abs_sorted.size();
    check_same_size(n, w.size(), "group_and_average");
    for (index_t i = 0; i < n; ++i) {
        if (!(v_abs_sorted[i] >= 0))
            throw std::invalid_argument("group_and_average: input must be non-negative");
        if (i + 1 < n && v_abs_sorted[i] < v_abs_sorted[i + 1])
            throw std::invalid_argument("group_and_average: input must be non-increasing");
    }

    std::vector<Group> stack;
    stack.reserve(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        stack.push_back({i, i + 1, v_abs_sorted[i], w[i]});
        while (stack.size() > 1) {
            Group &top = stack.back();
            Group &prev = stack[stack.size() - 2];
            if (!(prev.diff() < top.diff()))
                break;
            prev.end = top.end;
            prev.sum_v += top.sum_v;
            prev.sum_w += top.sum_w;
            stack.pop_back();
        }
    }

    GroupAverages out;
    out.vbar.resize(n);
    out.wbar.resize(n);
    for (const Group &g : stack) {
        const double mv = g.mean_v();
        const double mw = g.mean_w();
        for (index_t i = g.begin; i < g.end; ++i) {
            out.vbar[i] = mv;
            out.wbar[i] = mw;
        }
    }
    out.partition.groups = std::move(stack);
    return out;
}

namespace detail {

inline double sign(double x) { return (x > 0) - (x < 0); }

} // namespace detail

/// Exact Moreau proximity operator of Omega_w:
/// argmin_x Omega_w(x) + 0.5 * ||x - v||^2.
inline vec prox(const vec &v, const WeightVector &w) {
    check_same_size(v.size(), w.size(), "prox");
    const index_t n = v.size();
    if (n == 0)
        return v;
    const auto sorted = sort_by_abs_desc(v);
    const GroupAverages avg = group_and_average(sorted.sorted.cwiseAbs(), w);

    vec out(n);
    for (index_t i = 0; i < n; ++i) {
        // Clamp after grouping; vbar - wbar is already non-increasing.
        const double b = std::max(avg.vbar[i] - avg.wbar[i], 0.0);
        const index_t j = sorted.perm.forward[static_cast<std::size_t>(i)];
        out[j] = b > 0 ? detail::sign(v[j]) * b : 0.0; // no negative zeros
    }
    return out;
}

/// Omega_w(x) + 0.5 * ||x - v||^2
inline double prox_objective(const vec &x, const vec &v, const WeightVector &w) {
    check_same_size(x.size(), v.size(), "prox_objective");
    return evaluate(x, w) + 0.5 * (x - v).squaredNorm();
}

struct ProxCertificate {
    bool optimal = false;
    double dual_norm_residual = 0.0;      // Omega*(v - p) - 1, <= tol when feasible
    double complementarity_residual = 0.0; // |<v - p, p> - Omega(p)|
};

inline constexpr double certificate_tolerance = 1e-9;

/// p = prox(v) iff v - p lies in the subdifferential of Omega_w at p, which
/// for a norm means Omega*(v - p) <= 1 and <v - p, p> = Omega(p).
inline ProxCertificate prox_certificate(const vec &v, const vec &p, const WeightVector &w,
                                        double tol = certificate_tolerance) {
    check_same_size(v.size(), p.size(), "prox_certificate");
    check_same_size(v.size(), w.size(), "prox_certificate");
    const vec r = v - p;
    const double omega_p = evaluate(p, w);
    ProxCertificate c;
    c.dual_norm_residual = dual_norm(r, w) - 1.0;
    c.complementarity_residual = std::abs(r.dot(p) - omega_p);
    c.optimal =
        c.dual_norm_residual <= tol && c.complementarity_residual <= tol * (1.0 + omega_p);
    return c;
}

inline constexpr index_t slow_oracle_max_size = 50;
inline constexpr long slow_oracle_iterations = 100000;

/// Reference prox by subgradient descent from v, keeping the best iterate.
/// The objective is 1-strongly convex, so the step at iteration k is 1/k.
/// Slow and approximate (about 1e-7 on the objective at n = 10, worse as n
/// grows); test oracle only.
inline vec prox_oracle_slow(const vec &v, const WeightVector &w,
                            long iterations = slow_oracle_iterations) {
    check_same_size(v.size(), w.size(), "prox_oracle_slow");
    const index_t n = v.size();
    if (n > slow_oracle_max_size)
        throw dimension_error("prox_oracle_slow: n too large");
    if (n == 0 || v.cwiseAbs().maxCoeff() == 0.0)
        return vec::Zero(n);

    vec x = v;
    vec best = x;
    double best_obj = prox_objective(x, v, w);
    vec g(n);
    for (long k = 1; k <= iterations; ++k) {
        // sign(x) * (weights laid out in magnitude order) is a subgradient of
        // Omega at x; zero entries take the zero element of their interval.
        const auto sorted = sort_by_abs_desc(x);
        for (index_t i = 0; i < n; ++i) {
            const index_t j = sorted.perm.forward[static_cast<std::size_t>(i)];
            g[j] = detail::sign(x[j]) * w[i];
        }
        g += x - v;
        x -= g / static_cast<double>(k);
        const double obj = prox_objective(x, v, w);
        if (obj < best_obj) {
            best_obj = obj;
            best = x;
        }
    }
    return best;
}

/// Returns whether |v_i| - pi_i >= |v_{i+1}| - pi_{i+1} for all i. When this
/// holds, componentwise soft-thresholding of v at pi keeps the magnitudes
/// non-increasing.
inline bool check_threshold_order(const vec &v_sorted, const vec &pi) {
    check_same_size(v_sorted.size(), pi.size(), "check_threshold_order");
    for (index_t i = 0; i + 1 < v_sorted.size(); ++i) {
        if (std::abs(v_sorted[i]) - pi[i] < std::abs(v_sorted[i + 1]) - pi[i + 1])
            return false;
    }
    return true;
}

} // namespace owl
