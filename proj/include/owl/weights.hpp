#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "owl/common.hpp"

namespace owl {

enum class weight_errc { empty, not_sorted, negative, zero_leading, bad_parameter };

inline const char *to_string(weight_errc e) {
    switch (e) {
    case weight_errc::empty: return "Empty";
    case weight_errc::not_sorted: return "NotSorted";
    case weight_errc::negative: return "Negative";
    case weight_errc::zero_leading: return "ZeroLeading";
    case weight_errc::bad_parameter: return "BadParameter";
    }
    return "Unknown";
}

class weight_error : public std::invalid_argument {
  public:
    weight_error(weight_errc code, const std::string &what)
        : std::invalid_argument(std::string(to_string(code)) + ": " + what), code_(code) {}

    weight_errc code() const noexcept { return code_; }

  private:
    weight_errc code_;
};

/// Non-increasing, non-negative weights with a strictly positive leading
/// entry. Under these conditions the sorted weighted l1 functional is a norm.
/// Instances are only obtainable through the validating factories below.
class WeightVector {
  public:
    const vec &values() const noexcept { return values_; }
    index_t size() const noexcept { return values_.size(); }
    double operator[](index_t i) const { return values_[i]; }
    double leading() const { return values_[0]; }

    /// Multiplies every weight by c > 0. Used to fold a step size into the
    /// weights: prox of c*Omega_w is prox of Omega_{c*w}.
    WeightVector scaled(double c) const {
        if (!(c > 0))
            throw weight_error(weight_errc::bad_parameter, "scale factor must be positive");
        return WeightVector(values_ * c);
    }

    friend WeightVector make_custom(const vec &values);

  private:
    explicit WeightVector(vec v) : values_(std::move(v)) {}
    vec values_;
};

/// Exact validation, no tolerance: values[i] >= values[i+1], values >= 0,
/// values[0] > 0.
inline WeightVector make_custom(const vec &values) {
    const index_t n = values.size();
    if (n == 0)
        throw weight_error(weight_errc::empty, "weight vector is empty");
    for (index_t i = 0; i < n; ++i) {
        if (!(values[i] >= 0)) // also rejects NaN
            throw weight_error(weight_errc::negative,
                               "weight " + std::to_string(i) + " is negative or NaN");
    }
    for (index_t i = 0; i + 1 < n; ++i) {
        if (values[i] < values[i + 1])
            throw weight_error(weight_errc::not_sorted,
                               "weights must be non-increasing (index " + std::to_string(i) +
                                   ")");
    }
    if (!(values[0] > 0))
        throw weight_error(weight_errc::zero_leading, "leading weight must be positive");
    if (!std::isfinite(values[0]))
        throw weight_error(weight_errc::bad_parameter, "weights must be finite");
    return WeightVector(values);
}

inline WeightVector make_custom(const std::vector<double> &values) {
    return make_custom(vec(Eigen::Map<const vec>(values.data(), static_cast<index_t>(values.size()))));
}

/// OSCAR weights: values[i] = lambda1 + lambda2 * (n - 1 - i).
inline WeightVector make_oscar(index_t n, double lambda1, double lambda2) {
    if (n < 1)
        throw weight_error(weight_errc::empty, "n must be at least 1");
    if (!(lambda1 >= 0) || !(lambda2 >= 0))
        throw weight_error(weight_errc::negative, "OSCAR parameters must be non-negative");
    vec v(n);
    for (index_t i = 0; i < n; ++i)
        v[i] = lambda1 + lambda2 * static_cast<double>(n - 1 - i);
    return make_custom(v);
}

/// Constant weights; the norm reduces to lambda * ||x||_1.
inline WeightVector make_l1(index_t n, double lambda) { return make_oscar(n, lambda, 0.0); }

/// (t1, 0, ..., 0); the norm reduces to t1 * ||x||_inf.
inline WeightVector make_linf(index_t n, double t1) {
    if (n < 1)
        throw weight_error(weight_errc::empty, "n must be at least 1");
    if (!(t1 > 0))
        throw weight_error(weight_errc::zero_leading, "t1 must be positive");
    vec v = vec::Zero(n);
    v[0] = t1;
    return make_custom(v);
}

} // namespace owl
