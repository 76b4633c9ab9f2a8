#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "owl/io.hpp"
#include "owl/norm.hpp"
#include "owl/prox.hpp"
#include "owl/selftest.hpp"
#include "owl/solver.hpp"

namespace owl::cli {

enum exit_code : int { ok = 0, failure = 1, not_converged = 2 };

inline constexpr std::uint64_t default_selftest_seed = 20130101;

namespace detail {

inline void emit(const std::string &text, const std::string &out_path, std::ostream &out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw io::parse_error("cannot write '" + out_path + "'");
    f << text;
}

inline std::uint64_t seed_from_env() {
    const char *s = std::getenv("OWL_SEED");
    if (s == nullptr || *s == '\0')
        return default_selftest_seed;
    try {
        return std::stoull(s);
    } catch (const std::exception &) {
        throw io::parse_error(std::string("OWL_SEED is not an unsigned integer: '") + s + "'");
    }
}

} // namespace detail

struct Options {
    std::string weights;
    std::string out_path;
    std::vector<std::string> inputs;
    std::string algorithm = "fista";
    double tol = 1e-8;
    long max_iter = 10000;
    bool header = false;
    bool dual = false;
    bool backtracking = false;
};

inline int cmd_solve(const Options &o, std::ostream &out, std::ostream &err) {
    const auto start = std::chrono::steady_clock::now();
    const mat A = io::load_csv_matrix(o.inputs.at(0), o.header);
    const vec y = io::load_csv_vector(o.inputs.at(1), o.header);
    if (A.rows() != y.size())
        throw dimension_error("matrix has " + std::to_string(A.rows()) + " rows but response has " +
                              std::to_string(y.size()) + " entries");
    const auto spec = io::parse_weight_spec(o.weights);
    const Problem problem(A, y, io::materialize(spec, A.cols()));

    SolverConfig cfg;
    cfg.algorithm = o.algorithm == "ista" ? Algorithm::ista : Algorithm::fista;
    cfg.gap_tolerance = o.tol;
    cfg.max_iterations = o.max_iter;
    cfg.step_mode = o.backtracking ? StepMode::backtracking : StepMode::fixed;
    const SolveResult res = solve(problem, cfg);

    io::RunReport rep;
    rep.rows = A.rows();
    rep.cols = A.cols();
    rep.weights = o.weights;
    rep.algorithm = o.algorithm;
    rep.x.assign(res.x.begin(), res.x.end());
    rep.objective = res.objective_trace.back();
    rep.duality_gap = res.gap_trace.back();
    rep.iterations = res.iterations;
    rep.converged = res.converged;
    rep.clusters = res.clusters;
    rep.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    detail::emit(io::format_report(rep), o.out_path, out);
    if (!res.converged) {
        err << "warning: no convergence after " << res.iterations << " iterations\n";
        return not_converged;
    }
    return ok;
}

inline int cmd_prox(const Options &o, std::ostream &out) {
    const vec v = io::load_csv_vector(o.inputs.at(0), o.header);
    const auto w = io::materialize(io::parse_weight_spec(o.weights), v.size());
    detail::emit(io::format_vector(prox(v, w)), o.out_path, out);
    return ok;
}

inline int cmd_norm(const Options &o, std::ostream &out) {
    const vec x = io::load_csv_vector(o.inputs.at(0), o.header);
    const auto w = io::materialize(io::parse_weight_spec(o.weights), x.size());
    const double value = o.dual ? dual_norm(x, w) : evaluate(x, w);
    detail::emit(io::format_double(value) + "\n", o.out_path, out);
    return ok;
}

inline int cmd_ball(const Options &o, std::ostream &out, std::ostream &err) {
    const auto w = io::materialize(io::parse_weight_spec(o.weights), 2);
    const BallPolygon ball = unit_ball_vertices_2d(w);
    if (ball.degenerate)
        err << "note: degenerate weights, some emitted points are not vertices\n";
    detail::emit(io::format_ball_csv(ball), o.out_path, out);
    return ok;
}

inline int cmd_selftest(std::ostream &out) {
    const std::uint64_t seed = detail::seed_from_env();
    out << "seed " << seed << "\n";
    bool all = true;
    for (const auto &r : selftest::run(seed)) {
        out << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.cases - r.failures << "/"
            << r.cases << ")\n";
        all = all && r.passed();
    }
    return all ? ok : failure;
}

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Sorted weighted l1 (OWL/OSCAR) norms, proximity operator and solver", "owl"};
    app.require_subcommand(1);
    Options o;

    const std::string weight_help = "oscar:<l1>,<l2> | l1:<lambda> | linf:<t1> | file:<path>";

    auto *solve_cmd = app.add_subcommand("solve", "Solve 0.5||y - Ax||^2 + Omega_w(x)");
    solve_cmd->add_option("matrix", o.inputs, "design matrix CSV, then response CSV")
        ->required()
        ->expected(2);
    solve_cmd->add_option("--weights", o.weights, weight_help)->required();
    solve_cmd->add_option("--algorithm", o.algorithm, "ista or fista")
        ->check(CLI::IsMember({"ista", "fista"}));
    solve_cmd->add_option("--tol", o.tol, "relative duality gap tolerance")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    solve_cmd->add_flag("--backtracking", o.backtracking, "backtracking step instead of 1/L");

    auto *prox_cmd = app.add_subcommand("prox", "Proximity operator of Omega_w at a vector");
    prox_cmd->add_option("vector", o.inputs, "vector CSV")->required()->expected(1);
    prox_cmd->add_option("--weights", o.weights, weight_help)->required();

    auto *norm_cmd = app.add_subcommand("norm", "Evaluate Omega_w or its dual");
    norm_cmd->add_option("vector", o.inputs, "vector CSV")->required()->expected(1);
    norm_cmd->add_option("--weights", o.weights, weight_help)->required();
    norm_cmd->add_flag("--dual", o.dual, "evaluate the dual norm");

    auto *ball_cmd = app.add_subcommand("ball", "Vertices of the 2-D unit ball as CSV");
    ball_cmd->add_option("--weights", o.weights, weight_help)->required();

    auto *selftest_cmd = app.add_subcommand("selftest", "Run the embedded invariant checks");

    for (auto *sub : {solve_cmd, prox_cmd, norm_cmd, ball_cmd}) {
        sub->add_option("--out", o.out_path, "output path (default stdout)");
        if (sub != ball_cmd)
            sub->add_flag("--header", o.header, "skip the first CSV line");
    }

    std::vector<const char *> argv;
    argv.push_back("owl");
    for (const auto &a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return failure;
    }

    try {
        if (solve_cmd->parsed())
            return cmd_solve(o, out, err);
        if (prox_cmd->parsed())
            return cmd_prox(o, out);
        if (norm_cmd->parsed())
            return cmd_norm(o, out);
        if (ball_cmd->parsed())
            return cmd_ball(o, out, err);
        if (selftest_cmd->parsed())
            return cmd_selftest(out);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
    return failure;
}

} // namespace owl::cli
