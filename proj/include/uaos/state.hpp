#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace uaos {

/// State vector of a finite-dimensional system.
using StateVec = std::vector<double>;

inline double norm2(const StateVec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline void require_finite(const StateVec& x, const std::string& what) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]))
            throw std::runtime_error(what + ": non-finite entry at coordinate " +
                                     std::to_string(i));
    }
}

inline void require_dim(const StateVec& x, std::size_t n, const std::string& what) {
    if (x.size() != n)
        throw std::invalid_argument(what + ": expected dimension " + std::to_string(n) +
                                    ", got " + std::to_string(x.size()));
}

}  // namespace uaos
