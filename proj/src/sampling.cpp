#include "uaos/sampling.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace uaos {

std::vector<StateVec> sample_domain(const OdeSystem& sys, double R, int N,
                                    std::uint64_t seed) {
    if (R <= 0.0) throw std::invalid_argument("sample_domain: R must be > 0");
    if (N < 1) throw std::invalid_argument("sample_domain: N must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<StateVec> out;
    out.reserve(N);
    std::uint64_t draws = 0, rejects = 0;
    while (static_cast<int>(out.size()) < N) {
        StateVec x(sys.n);
        double s = 0.0;
        for (int d = 0; d < sys.n; ++d) {
            x[d] = R * u(rng);
            s += x[d] * x[d];
        }
        ++draws;
        bool ok = s < R * R;
        if (ok && sys.in_domain) ok = (*sys.in_domain)(x);
        if (ok) {
            out.push_back(std::move(x));
        } else {
            ++rejects;
            if (draws >= 1000000 && rejects * 1000 > draws * 999)
                throw std::runtime_error("sample_domain: domain too thin in B_R");
        }
    }
    return out;
}

namespace {

History make_history(const DelaySystem& sys, int family, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = sys.n;
    const double r = sys.r;
    // Polynomial coefficients per component: value = c0 + c1*s + c2*s^2 + c3*s^3
    std::vector<std::array<double, 4>> coeffs(n);
    for (int d = 0; d < n; ++d) {
        std::array<double, 4> c{u(rng), 0.0, 0.0, 0.0};
        if (family >= 1) c[1] = u(rng);
        if (family >= 2) {
            c[2] = u(rng);
            c[3] = u(rng);
        }
        coeffs[d] = c;
    }
    (void)r;
    return History(r, n, [coeffs, n](double s) {
        StateVec v(n);
        for (int d = 0; d < n; ++d) {
            const auto& c = coeffs[d];
            v[d] = c[0] + s * (c[1] + s * (c[2] + s * c[3]));
        }
        return v;
    });
}

History rescale_into_domain(const DelaySystem& sys, History h, double target_norm) {
    double sup = h.sup_norm();
    double scale = sup > 0.0 ? target_norm / sup : 0.0;
    History cur = h.scaled(scale);
    if (!sys.in_domain) return cur;
    for (int i = 0; i < 200; ++i) {
        if ((*sys.in_domain)(cur)) return cur;
        scale *= 0.8;
        cur = h.scaled(scale);
    }
    throw std::runtime_error("sample_domain: could not rescale history into domain");
}

}  // namespace

std::vector<History> sample_domain(const DelaySystem& sys, double R, int N,
                                   std::uint64_t seed) {
    if (R <= 0.0) throw std::invalid_argument("sample_domain: R must be > 0");
    if (N < 1) throw std::invalid_argument("sample_domain: N must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<History> out;
    out.reserve(N);
    for (int i = 0; i < N; ++i) {
        History h = make_history(sys, i % 3, rng);
        double target = R * (1.0 - 1e-3) * std::max(u01(rng), 1e-3);
        out.push_back(rescale_into_domain(sys, h, target));
    }
    return out;
}

std::vector<StateVec> shell_probes(const OdeSystem& sys, double R, int count) {
    std::vector<StateVec> out;
    out.reserve(count);
    if (sys.n == 1) {
        for (int i = 0; i < count; ++i) {
            StateVec x{(i % 2 == 0 ? 1.0 : -1.0) * R * (1.0 - 1e-6)};
            if (!sys.in_domain || (*sys.in_domain)(x)) out.push_back(x);
        }
        return out;
    }
    Halton h(sys.n, 7);
    int tries = 0;
    while (static_cast<int>(out.size()) < count && tries < 100 * count) {
        ++tries;
        auto p = h.next();
        StateVec dir(sys.n);
        double s = 0.0;
        for (int d = 0; d < sys.n; ++d) {
            dir[d] = 2.0 * p[d] - 1.0;
            s += dir[d] * dir[d];
        }
        if (s < 1e-12 || s > 1.0) continue;
        double nrm = std::sqrt(s);
        StateVec x(sys.n);
        double scale = R * (1.0 - 1e-6) / nrm;
        for (int d = 0; d < sys.n; ++d) x[d] = dir[d] * scale;
        if (sys.in_domain) {
            bool placed = false;
            for (int j = 0; j < 60; ++j) {
                if ((*sys.in_domain)(x)) {
                    placed = true;
                    break;
                }
                for (double& e : x) e *= 0.98;
            }
            if (!placed) continue;
        }
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<History> shell_probes(const DelaySystem& sys, double R, int count) {
    std::vector<History> out;
    out.reserve(count);
    std::mt19937_64 rng(424242);
    for (int i = 0; i < count; ++i) {
        History h = make_history(sys, i % 3, rng);
        out.push_back(rescale_into_domain(sys, h, R * (1.0 - 1e-6)));
    }
    return out;
}

}  // namespace uaos
