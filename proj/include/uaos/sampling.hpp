#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "uaos/system.hpp"

namespace uaos {

/// Halton low-discrepancy sequence in [0,1)^dim (bases 2,3,5,7,11,13).
class Halton {
public:
    explicit Halton(int dim, std::uint64_t start = 1) : dim_(dim), index_(start) {}

    std::vector<double> next() {
        static const int bases[] = {2, 3, 5, 7, 11, 13};
        std::vector<double> p(dim_);
        for (int d = 0; d < dim_; ++d) p[d] = radical_inverse(index_, bases[d % 6]);
        ++index_;
        return p;
    }

private:
    static double radical_inverse(std::uint64_t i, int base) {
        double f = 1.0, r = 0.0;
        while (i > 0) {
            f /= base;
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        return r;
    }

    int dim_;
    std::uint64_t index_;
};

/// Quasi-random points in the closed ball of radius R in R^n (Halton + rejection).
inline std::vector<StateVec> quasi_ball(int n, double R, int count, std::uint64_t start = 1) {
    Halton h(n, start);
    std::vector<StateVec> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        auto p = h.next();
        StateVec x(n);
        double s = 0.0;
        for (int d = 0; d < n; ++d) {
            x[d] = R * (2.0 * p[d] - 1.0);
            s += x[d] * x[d];
        }
        if (s <= R * R) out.push_back(std::move(x));
    }
    return out;
}

/// Uniform rejection sampling from B_R intersected with the system domain.
/// Deterministic per seed.
std::vector<StateVec> sample_domain(const OdeSystem& sys, double R, int N, std::uint64_t seed);

/// Sampled initial histories for a delay system: cycles through the family
/// {constant, linear, random cubic polynomial on [-r,0]}, each rescaled until
/// the domain predicate holds. Deterministic per seed.
std::vector<History> sample_domain(const DelaySystem& sys, double R, int N, std::uint64_t seed);

/// Deterministic probe states just inside the radius-R shell (quasi-random
/// directions, rescaled into the domain when a predicate is present). Used by
/// sup estimation and sweeps so that boundary-dominated quantities are not
/// under-resolved by interior sampling.
std::vector<StateVec> shell_probes(const OdeSystem& sys, double R, int count);
std::vector<History> shell_probes(const DelaySystem& sys, double R, int count);

}  // namespace uaos
