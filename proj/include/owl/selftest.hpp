#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "owl/norm.hpp"
#include "owl/prox.hpp"
#include "owl/solver.hpp"
#include "owl/weights.hpp"

namespace owl::selftest {

struct CheckResult {
    std::string name;
    long cases = 0;
    long failures = 0;

    bool passed() const noexcept { return failures == 0; }
};

/// Random valid weight vectors of every flavour the library constructs.
inline WeightVector random_weights(std::mt19937_64 &rng, index_t n) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return make_oscar(n, u(rng) + 0.01, u(rng) * 0.5);
    case 1: return make_l1(n, u(rng) + 0.01);
    case 2: return make_linf(n, u(rng) + 0.01);
    default: {
        vec v(n);
        for (auto &x : v)
            x = u(rng);
        std::sort(v.begin(), v.end(), std::greater<>());
        v[0] += 0.01;
        return make_custom(v);
    }
    }
}

inline vec random_vector(std::mt19937_64 &rng, index_t n, double scale = 3.0) {
    std::normal_distribution<double> g(0.0, scale);
    vec v(n);
    for (auto &x : v)
        x = g(rng);
    return v;
}

inline std::vector<CheckResult> run(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<index_t> small_n(1, 5);
    std::uniform_int_distribution<index_t> mid_n(1, 60);
    std::vector<CheckResult> out;

    {
        CheckResult r{"dual norm matches vertex enumeration"};
        for (int t = 0; t < 200; ++t, ++r.cases) {
            const index_t n = small_n(rng);
            const auto w = random_weights(rng, n);
            const vec x = random_vector(rng, n);
            const double fast = dual_norm(x, w);
            const double slow = dual_norm_by_vertex_enumeration(x, w);
            if (std::abs(fast - slow) > 1e-12 * std::max(1.0, std::abs(slow)))
                ++r.failures;
        }
        out.push_back(r);
    }
    {
        CheckResult r{"norm axioms and sandwich bounds"};
        std::uniform_real_distribution<double> alpha(-3.0, 3.0);
        for (int t = 0; t < 500; ++t, ++r.cases) {
            const index_t n = mid_n(rng);
            const auto w = random_weights(rng, n);
            const vec x = random_vector(rng, n);
            const vec z = random_vector(rng, n);
            const double a = alpha(rng);
            const double ox = evaluate(x, w);
            const double slack = 1e-12 * (1.0 + ox);
            const bool ok = evaluate(x + z, w) <= ox + evaluate(z, w) + slack &&
                            std::abs(evaluate(a * x, w) - std::abs(a) * ox) <= slack * (1 + std::abs(a)) &&
                            w.leading() * x.lpNorm<Eigen::Infinity>() <= ox + slack &&
                            ox <= w.leading() * x.lpNorm<1>() + slack;
            if (!ok)
                ++r.failures;
        }
        out.push_back(r);
    }
    {
        CheckResult r{"prox optimality certificate"};
        for (int t = 0; t < 300; ++t, ++r.cases) {
            const index_t n = mid_n(rng);
            const auto w = random_weights(rng, n);
            const vec v = random_vector(rng, n);
            if (!prox_certificate(v, prox(v, w), w).optimal)
                ++r.failures;
        }
        out.push_back(r);
    }
    {
        CheckResult r{"grouping yields non-increasing vbar - wbar"};
        for (int t = 0; t < 300; ++t, ++r.cases) {
            const index_t n = mid_n(rng);
            const auto w = random_weights(rng, n);
            const vec a = sort_by_abs_desc(random_vector(rng, n)).sorted.cwiseAbs();
            const auto g = group_and_average(a, w);
            if (!check_threshold_order(g.vbar, g.wbar))
                ++r.failures;
        }
        out.push_back(r);
    }
    {
        CheckResult r{"identity design reduces solve to prox"};
        SolverConfig cfg;
        for (int t = 0; t < 20; ++t, ++r.cases) {
            const index_t n = mid_n(rng);
            const auto w = random_weights(rng, n);
            const vec y = random_vector(rng, n);
            const auto res = solve(Problem(mat::Identity(n, n), y, w), cfg);
            if (!res.converged || (res.x - prox(y, w)).lpNorm<Eigen::Infinity>() > 1e-8)
                ++r.failures;
        }
        out.push_back(r);
    }
    return out;
}

} // namespace owl::selftest
