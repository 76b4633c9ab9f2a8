#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "owl/common.hpp"
#include "owl/norm.hpp"
#include "owl/solver.hpp"
#include "owl/weights.hpp"

namespace owl {

inline void to_json(nlohmann::ordered_json &j, const Cluster &c) {
    j = nlohmann::ordered_json{{"magnitude", c.magnitude}, {"zero", c.zero}, {"indices", c.indices}};
}

inline void from_json(const nlohmann::ordered_json &j, Cluster &c) {
    j.at("magnitude").get_to(c.magnitude);
    j.at("zero").get_to(c.zero);
    j.at("indices").get_to(c.indices);
}

} // namespace owl

namespace owl::io {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), end);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

} // namespace detail

inline double parse_double(std::string_view text) {
    text = detail::trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw parse_error("not a number: '" + std::string(text) + "'");
    return value;
}

// --- weight specifications ---------------------------------------------------

/// `oscar:<l1>,<l2>` | `l1:<lambda>` | `linf:<t1>` | `file:<path>`.
/// The dimension is supplied later from the data.
struct WeightSpec {
    enum class Kind { oscar, l1, linf, file };
    Kind kind = Kind::l1;
    double a = 0.0; // lambda1 / lambda / t1
    double b = 0.0; // lambda2 (oscar only)
    std::string path;

    friend bool operator==(const WeightSpec &, const WeightSpec &) = default;
};

inline WeightSpec parse_weight_spec(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw parse_error("weight spec needs the form kind:args, got '" + std::string(text) + "'");
    const std::string_view kind = text.substr(0, colon);
    const std::string_view args = text.substr(colon + 1);
    WeightSpec spec;
    if (kind == "oscar") {
        const auto comma = args.find(',');
        if (comma == std::string_view::npos)
            throw parse_error("oscar weights need two parameters: oscar:<lambda1>,<lambda2>");
        spec.kind = WeightSpec::Kind::oscar;
        spec.a = parse_double(args.substr(0, comma));
        spec.b = parse_double(args.substr(comma + 1));
    } else if (kind == "l1") {
        spec.kind = WeightSpec::Kind::l1;
        spec.a = parse_double(args);
    } else if (kind == "linf") {
        spec.kind = WeightSpec::Kind::linf;
        spec.a = parse_double(args);
    } else if (kind == "file") {
        if (args.empty())
            throw parse_error("file weight spec needs a path");
        spec.kind = WeightSpec::Kind::file;
        spec.path = std::string(args);
    } else {
        throw parse_error("unknown weight kind '" + std::string(kind) + "'");
    }
    return spec;
}

inline std::string format_weight_spec(const WeightSpec &spec) {
    switch (spec.kind) {
    case WeightSpec::Kind::oscar:
        return "oscar:" + format_double(spec.a) + "," + format_double(spec.b);
    case WeightSpec::Kind::l1: return "l1:" + format_double(spec.a);
    case WeightSpec::Kind::linf: return "linf:" + format_double(spec.a);
    case WeightSpec::Kind::file: return "file:" + spec.path;
    }
    return {};
}

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// One decimal weight per line; blank lines are ignored.
inline WeightVector parse_weight_file_contents(const std::string &contents) {
    std::vector<double> values;
    std::istringstream in(contents);
    std::string line;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty())
            continue;
        values.push_back(parse_double(line));
    }
    return make_custom(values);
}

inline WeightVector load_weight_file(const std::string &path) {
    return parse_weight_file_contents(read_text_file(path));
}

inline WeightVector materialize(const WeightSpec &spec, index_t n) {
    switch (spec.kind) {
    case WeightSpec::Kind::oscar: return make_oscar(n, spec.a, spec.b);
    case WeightSpec::Kind::l1: return make_l1(n, spec.a);
    case WeightSpec::Kind::linf: return make_linf(n, spec.a);
    case WeightSpec::Kind::file: {
        WeightVector w = load_weight_file(spec.path);
        if (w.size() != n)
            throw dimension_error("weight file has " + std::to_string(w.size()) +
                                  " entries, data needs " + std::to_string(n));
        return w;
    }
    }
    throw parse_error("invalid weight spec");
}

// --- CSV ------------------------------------------------------------------------

/// Row-major numeric CSV. Every row must have the same number of cells.
inline mat parse_csv_matrix(const std::string &contents, bool header = false) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(contents);
    std::string line;
    bool skip = header;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip) {
            skip = false;
            continue;
        }
        if (detail::trim(line).empty())
            continue;
        std::vector<double> row;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            try {
                row.push_back(parse_double(rest.substr(0, comma)));
            } catch (const parse_error &e) {
                throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
            }
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw parse_error("line " + std::to_string(lineno) + ": expected " +
                              std::to_string(rows.front().size()) + " columns, found " +
                              std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw parse_error("no data rows");
    mat m(static_cast<index_t>(rows.size()), static_cast<index_t>(rows.front().size()));
    for (index_t i = 0; i < m.rows(); ++i)
        for (index_t j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

/// A vector is either a single column or a single row.
inline vec parse_csv_vector(const std::string &contents, bool header = false) {
    const mat m = parse_csv_matrix(contents, header);
    if (m.cols() == 1)
        return m.col(0);
    if (m.rows() == 1)
        return m.row(0).transpose();
    throw parse_error("expected a single row or column, got " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()));
}

inline mat load_csv_matrix(const std::string &path, bool header = false) {
    try {
        return parse_csv_matrix(read_text_file(path), header);
    } catch (const parse_error &e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline vec load_csv_vector(const std::string &path, bool header = false) {
    try {
        return parse_csv_vector(read_text_file(path), header);
    } catch (const parse_error &e) {
        throw parse_error(path + ": " + e.what());
    }
}

/// One value per line.
inline std::string format_vector(const vec &v) {
    std::string out;
    for (index_t i = 0; i < v.size(); ++i) {
        out += format_double(v[i]);
        out += '\n';
    }
    return out;
}

/// `x,y` per line in polygon order.
inline std::string format_ball_csv(const BallPolygon &ball) {
    std::string out;
    for (const auto &p : ball.points) {
        out += format_double(p[0]);
        out += ',';
        out += format_double(p[1]);
        out += '\n';
    }
    return out;
}

// --- run report -----------------------------------------------------------------

struct RunReport {
    index_t rows = 0;
    index_t cols = 0;
    std::string weights; // weight spec as given
    std::string algorithm;
    std::vector<double> x;
    double objective = 0.0;
    double duality_gap = 0.0; // relative
    long iterations = 0;
    bool converged = false;
    std::vector<Cluster> clusters;
    double wall_time_ms = 0.0;

    friend bool operator==(const RunReport &, const RunReport &) = default;
};

inline void to_json(nlohmann::ordered_json &j, const RunReport &r) {
    j = nlohmann::ordered_json{
        {"input", {{"rows", r.rows}, {"cols", r.cols}, {"weights", r.weights}}},
        {"algorithm", r.algorithm},
        {"converged", r.converged},
        {"iterations", r.iterations},
        {"objective", r.objective},
        {"duality_gap", r.duality_gap},
        {"x", r.x},
        {"clusters", r.clusters},
        {"wall_time_ms", r.wall_time_ms},
    };
}

inline void from_json(const nlohmann::ordered_json &j, RunReport &r) {
    const auto &in = j.at("input");
    in.at("rows").get_to(r.rows);
    in.at("cols").get_to(r.cols);
    in.at("weights").get_to(r.weights);
    j.at("algorithm").get_to(r.algorithm);
    j.at("converged").get_to(r.converged);
    j.at("iterations").get_to(r.iterations);
    j.at("objective").get_to(r.objective);
    j.at("duality_gap").get_to(r.duality_gap);
    j.at("x").get_to(r.x);
    j.at("clusters").get_to(r.clusters);
    j.at("wall_time_ms").get_to(r.wall_time_ms);
}

inline std::string format_report(const RunReport &r) {
    return nlohmann::ordered_json(r).dump(2) + "\n";
}

inline RunReport parse_report(const std::string &text) {
    try {
        return nlohmann::ordered_json::parse(text).get<RunReport>();
    } catch (const nlohmann::json::exception &e) {
        throw parse_error(std::string("report: ") + e.what());
    }
}

} // namespace owl::io
