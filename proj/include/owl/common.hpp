#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace owl {

using vec = Eigen::VectorXd;
using mat = Eigen::MatrixXd;
using index_t = Eigen::Index;

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void check_same_size(index_t a, index_t b, const char *where) {
    if (a != b)
        throw dimension_error(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                              " vs " + std::to_string(b) + ")");
}

} // namespace owl
