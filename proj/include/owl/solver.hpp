#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "owl/common.hpp"
#include "owl/norm.hpp"
#include "owl/prox.hpp"
#include "owl/weights.hpp"

namespace owl {

/// min_x 0.5 * ||y - A x||^2 + Omega_w(x)
class Problem {
  public:
    Problem(mat A, vec y, WeightVector w) : A_(std::move(A)), y_(std::move(y)), w_(std::move(w)) {
        if (A_.rows() < 1 || A_.cols() < 1)
            throw dimension_error("Problem: design matrix must be non-empty");
        check_same_size(A_.rows(), y_.size(), "Problem (rows of A vs length of y)");
        check_same_size(A_.cols(), w_.size(), "Problem (columns of A vs number of weights)");
        if (!A_.allFinite())
            throw std::invalid_argument("Problem: design matrix has non-finite entries");
        if (!y_.allFinite())
            throw std::invalid_argument("Problem: response has non-finite entries");
    }

    const mat &A() const noexcept { return A_; }
    const vec &y() const noexcept { return y_; }
    const WeightVector &weights() const noexcept { return w_; }
    index_t rows() const noexcept { return A_.rows(); }
    index_t cols() const noexcept { return A_.cols(); }

  private:
    mat A_;
    vec y_;
    WeightVector w_;
};

enum class Algorithm { ista, fista };
enum class StepMode { fixed, backtracking };

struct SolverConfig {
    Algorithm algorithm = Algorithm::fista;
    long max_iterations = 10000;
    double gap_tolerance = 1e-8; // on the relative duality gap
    StepMode step_mode = StepMode::fixed;
    bool restart_on_increase = true; // FISTA only
    long gap_check_interval = 10;

    void validate() const {
        if (!(gap_tolerance > 0))
            throw std::invalid_argument("SolverConfig: gap tolerance must be positive");
        if (max_iterations < 1)
            throw std::invalid_argument("SolverConfig: max_iterations must be at least 1");
        if (gap_check_interval < 1)
            throw std::invalid_argument("SolverConfig: gap_check_interval must be at least 1");
    }
};

struct Cluster {
    double magnitude = 0.0;
    std::vector<index_t> indices; // ascending
    bool zero = false;

    friend bool operator==(const Cluster &, const Cluster &) = default;
};

struct SolveResult {
    vec x;                               // best iterate when the trace is monotone
    std::vector<double> objective_trace; // objective of the reported iterate; entry 0 is x = 0
    std::vector<double> gap_trace;       // relative gaps, one per check
    long iterations = 0;
    bool converged = false;
    double lipschitz = 0.0; // final step-size constant
    std::vector<Cluster> clusters;
};

struct solver_error : std::runtime_error {
    solver_error(const std::string &what, long iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration(iteration) {}
    long iteration;
};

inline constexpr double lipschitz_safety_factor = 1.02;

/// Largest eigenvalue of A^T A by power iteration (deterministic normalized
/// all-ones start, at most 1000 iterations, relative tolerance 1e-9), times a
/// 1.02 safety factor.
inline double lipschitz_estimate(const mat &A, long max_iterations = 1000, double rel_tol = 1e-9) {
    if (A.size() == 0)
        throw dimension_error("lipschitz_estimate: empty matrix");
    if (!A.allFinite())
        throw std::invalid_argument("lipschitz_estimate: non-finite entries");

    const index_t n = A.cols();
    auto run = [&](vec q) {
        double lambda = 0.0;
        for (long it = 0; it < max_iterations; ++it) {
            vec z = A.transpose() * (A * q);
            const double next = q.dot(z); // Rayleigh quotient, q normalized
            const double zn = z.norm();
            if (zn == 0.0)
                return 0.0;
            q = z / zn;
            if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
                lambda = next;
                break;
            }
            lambda = next;
        }
        return lambda;
    };

    double lambda = run(vec::Ones(n) / std::sqrt(static_cast<double>(n)));
    // The all-ones start can be orthogonal to the dominant eigenvector (e.g.
    // A = [1 -1]); also try the coordinate of the heaviest column.
    const vec col_sq = A.colwise().squaredNorm().transpose();
    index_t heaviest = 0;
    const double max_col_sq = col_sq.maxCoeff(&heaviest);
    if (lambda < max_col_sq) {
        vec e = vec::Zero(n);
        e[heaviest] = 1.0;
        lambda = std::max({lambda, run(e), max_col_sq});
    }
    if (lambda == 0.0)
        lambda = 1.0; // A = 0: any step works
    return lipschitz_safety_factor * lambda;
}

/// Gradient of the smooth part: A^T (A x - y).
inline vec smooth_gradient(const Problem &p, const vec &x) {
    check_same_size(x.size(), p.cols(), "smooth_gradient");
    return p.A().transpose() * (p.A() * x - p.y());
}

inline double smooth_value(const Problem &p, const vec &x) {
    check_same_size(x.size(), p.cols(), "smooth_value");
    return 0.5 * (p.y() - p.A() * x).squaredNorm();
}

namespace detail {

// Sum carried as an unevaluated pair hi + lo, with error-free transformations
// for each addition and product. Roughly twice double precision.
struct CompensatedSum {
    double hi = 0.0;
    double lo = 0.0;

    void add(double a) {
        const double s = hi + a;
        const double bb = s - hi;
        lo += (hi - (s - bb)) + (a - bb);
        hi = s;
    }
    void add_product(double a, double b) {
        const double p = a * b;
        add(p);
        lo += std::fma(a, b, -p);
    }
    double value() const { return hi + lo; }
};

} // namespace detail

/// 0.5 * ||y - A x||^2 + Omega_w(x), evaluated with compensated sums so the
/// result is (almost always) the correctly rounded value. Iterates that agree
/// to within rounding then compare equal instead of differing by noise.
inline double objective(const Problem &p, const vec &x) {
    check_same_size(x.size(), p.cols(), "objective");
    const mat &A = p.A();
    const index_t m = A.rows();
    std::vector<detail::CompensatedSum> r(static_cast<std::size_t>(m));
    for (index_t i = 0; i < m; ++i)
        r[static_cast<std::size_t>(i)].add(p.y()[i]);
    for (index_t j = 0; j < A.cols(); ++j) {
        if (x[j] == 0.0)
            continue;
        for (index_t i = 0; i < m; ++i)
            r[static_cast<std::size_t>(i)].add_product(-A(i, j), x[j]);
    }
    detail::CompensatedSum total;
    for (const auto &ri : r) {
        // 0.5 (hi + lo)^2 without the negligible lo^2 term
        total.add_product(ri.hi, 0.5 * ri.hi);
        total.add_product(ri.hi, ri.lo);
    }
    const vec a = detail::abs_sorted_desc(x);
    for (index_t i = 0; i < a.size(); ++i)
        total.add_product(p.weights()[i], a[i]);
    return total.value();
}

struct GapInfo {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;

    /// gap / primal; 0 when both vanish.
    double relative() const { return primal > 0 ? gap / primal : gap; }
};

/// Fenchel gap. With r = y - A x, the scaled residual s * r with
/// s = min(1, 1 / Omega*(A^T r)) is dual feasible, and
/// D = 0.5 ||y||^2 - 0.5 ||s r - y||^2 lower-bounds the optimum.
inline GapInfo duality_gap_info(const Problem &p, const vec &x) {
    check_same_size(x.size(), p.cols(), "duality_gap");
    const vec r = p.y() - p.A() * x;
    const double dn = dual_norm(p.A().transpose() * r, p.weights());
    const double s = dn > 1.0 ? 1.0 / dn : 1.0;
    GapInfo g;
    g.primal = objective(p, x);
    g.dual = 0.5 * p.y().squaredNorm() - 0.5 * (s * r - p.y()).squaredNorm();
    g.gap = g.primal - g.dual;
    return g;
}

inline double duality_gap(const Problem &p, const vec &x) { return duality_gap_info(p, x).gap; }

inline constexpr double default_cluster_tolerance = 1e-8;

/// Partitions indices by equal |x_i| within rel_tol * (1 + ||x||_inf).
/// Entries within that tolerance of zero form the zero group, listed first;
/// the rest follow in order of decreasing magnitude.
inline std::vector<Cluster> cluster_report(const vec &x, double rel_tol = default_cluster_tolerance) {
    if (!(rel_tol >= 0))
        throw std::invalid_argument("cluster_report: tolerance must be non-negative");
    std::vector<Cluster> out;
    if (x.size() == 0)
        return out;
    const double tol = rel_tol * (1.0 + x.cwiseAbs().maxCoeff());
    const auto sorted = sort_by_abs_desc(x);

    Cluster zero{0.0, {}, true};
    for (index_t i = 0; i < x.size(); ++i) {
        const index_t j = sorted.perm.forward[static_cast<std::size_t>(i)];
        const double m = std::abs(x[j]);
        if (m <= tol) {
            zero.indices.push_back(j);
            continue;
        }
        // Chain against the first (largest) member so a cluster spans at most tol.
        if (out.empty() || out.back().magnitude - m > tol)
            out.push_back({m, {}, false});
        out.back().indices.push_back(j);
    }
    for (auto &c : out)
        std::sort(c.indices.begin(), c.indices.end());
    std::sort(zero.indices.begin(), zero.indices.end());
    if (!zero.indices.empty())
        out.insert(out.begin(), std::move(zero));
    return out;
}

namespace detail {

inline void require_finite(const vec &v, const char *what, long iteration) {
    if (!v.allFinite())
        throw solver_error(std::string("non-finite values in ") + what, iteration);
}

} // namespace detail

/// Proximal gradient (ISTA) or its accelerated variant (FISTA) from x = 0.
/// The step 1/L is folded into the prox by scaling the weights to w / L.
/// The relative duality gap is checked at x = 0 and every
/// gap_check_interval iterations thereafter.
inline SolveResult solve(const Problem &p, const SolverConfig &cfg = {}) {
    cfg.validate();
    const index_t n = p.cols();
    const mat &A = p.A();
    const WeightVector &w = p.weights();

    SolveResult res;
    res.x = vec::Zero(n);

    double L = 0.0;
    if (cfg.step_mode == StepMode::fixed) {
        L = lipschitz_estimate(A);
    } else {
        // Column norms lower-bound sigma_max^2; backtracking doubles from here.
        L = std::max(A.colwise().squaredNorm().maxCoeff(), std::numeric_limits<double>::min());
    }

    // Proximal gradient step from z; returns the new point, adapting L when
    // backtracking.
    auto step_from = [&](const vec &z, long it) {
        const vec grad = smooth_gradient(p, z);
        detail::require_finite(grad, "gradient", it);
        for (;;) {
            vec next = prox(z - grad / L, w.scaled(1.0 / L));
            detail::require_finite(next, "iterate", it);
            if (cfg.step_mode == StepMode::fixed)
                return next;
            const vec d = next - z;
            const double upper = smooth_value(p, z) + grad.dot(d) + 0.5 * L * d.squaredNorm();
            if (smooth_value(p, next) <= upper)
                return next;
            L *= 2.0; // halve the step
            if (!std::isfinite(L))
                throw solver_error("backtracking failed to find a step", it);
        }
    };

    // The iteration itself runs on `last` (the newest iterate). When the
    // trace must be monotone, res.x only moves to iterates that do not raise
    // the objective; near the optimum, rounding can push single steps up by
    // an ulp or two. Any dual-feasible point bounds the optimum from below,
    // so the best dual value seen on either sequence certifies res.x.
    const bool monotone = cfg.algorithm == Algorithm::ista || cfg.restart_on_increase;
    vec last = res.x;
    double best_dual = -std::numeric_limits<double>::infinity();

    auto check_gap = [&]() {
        GapInfo g = duality_gap_info(p, res.x);
        best_dual = std::max(best_dual, g.dual);
        if (last != res.x)
            best_dual = std::max(best_dual, duality_gap_info(p, last).dual);
        g.dual = best_dual;
        g.gap = g.primal - g.dual;
        if (!std::isfinite(g.gap))
            throw solver_error("non-finite duality gap", res.iterations);
        const double rel = g.relative();
        res.gap_trace.push_back(rel);
        return rel <= cfg.gap_tolerance;
    };

    double f_best = objective(p, res.x);
    double f_last = f_best;
    res.objective_trace.push_back(f_best);
    res.converged = check_gap();

    vec z = res.x; // extrapolated point (FISTA)
    double t = 1.0;
    while (!res.converged && res.iterations < cfg.max_iterations) {
        const long it = res.iterations + 1;
        vec next;
        double f_next = 0.0;
        if (cfg.algorithm == Algorithm::ista) {
            next = step_from(last, it);
            f_next = objective(p, next);
        } else {
            next = step_from(z, it);
            f_next = objective(p, next);
            if (cfg.restart_on_increase && f_next > f_last) {
                // Drop the momentum and take a plain step from the last iterate.
                t = 1.0;
                next = step_from(last, it);
                f_next = objective(p, next);
                z = next;
            } else {
                const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                z = next + ((t - 1.0) / t_next) * (next - last);
                t = t_next;
            }
        }
        if (!std::isfinite(f_next))
            throw solver_error("non-finite objective", it);

        last = std::move(next);
        f_last = f_next;
        if (!monotone || f_last <= f_best) {
            res.x = last;
            f_best = f_last;
        }
        res.objective_trace.push_back(f_best);
        res.iterations = it;
        if (it % cfg.gap_check_interval == 0 || it == cfg.max_iterations)
            res.converged = check_gap();
    }

    res.lipschitz = L;
    res.clusters = cluster_report(res.x);
    return res;
}

} // namespace owl
