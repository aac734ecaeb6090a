#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <vector>

#include "nht/error.hpp"

namespace testing {

using nht::cplx;

inline std::vector<cplx> random_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (cplx& z : v) z = {g(rng), g(rng)};
    return v;
}

inline double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline double max_abs(std::span<const cplx> a) {
    double m = 0.0;
    for (const cplx& z : a) m = std::max(m, std::abs(z));
    return m;
}

inline std::vector<cplx> unit(std::vector<cplx> v) {
    double n2 = 0.0;
    for (const cplx& z : v) n2 += std::norm(z);
    for (cplx& z : v) z /= std::sqrt(n2);
    return v;
}

inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

// Pair every eigenvalue of a with its nearest unused partner in b.
inline double spectrum_gap(std::vector<cplx> a, std::vector<cplx> b) {
    double worst = 0.0;
    for (const cplx& z : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](const cplx& x, const cplx& y) {
            return std::abs(x - z) < std::abs(y - z);
        });
        worst = std::max(worst, std::abs(*it - z));
        b.erase(it);
    }
    return worst;
}

}  // namespace testing
