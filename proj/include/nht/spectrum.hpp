#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nht/model.hpp"

namespace nht {

// E(q) of the equivalent chain and its first two q-derivatives.
struct DispersionPoint {
    double q{0.0};
    cplx e;
    cplx de;
    cplx d2e;
};

// E(q) = -i gamma - 2 i kappa cos(2q) + 2 rho cos(q + dphi), q in [-pi, pi].
DispersionPoint dispersion_chain(double q, const LatticeParams& params);

struct MinibandPair {
    cplx e_plus;
    cplx e_minus;
};

// Two minibands of the zigzag lattice, q in the reduced zone [-pi/2, pi/2].
MinibandPair dispersion_zigzag(double q, const LatticeParams& params);

// Expansion constants at the two maxima of Im E(q), q1 = pi/2 and q2 = -pi/2.
// The energies are kept complex; they are real only when gamma = 2 kappa.
struct SaddleConstants {
    double q1{0.0};
    double q2{0.0};
    cplx e1, e2;
    cplx de1, de2;
    cplx d2e1, d2e2;
    // false when kappa = 0: Im E is flat and the two-packet asymptotics do not apply.
    bool selective{true};
    std::string note;
};

SaddleConstants saddle_constants(const LatticeParams& params);

inline constexpr std::size_t kMaxDenseSites = 2048;

// Eigenvalues of the dense operator, sorted by (Re, Im).
std::vector<cplx> finite_spectrum(const ChainOperator& op);
std::vector<cplx> finite_spectrum(const SparseOperator& op);

// Uniform grid including both endpoints.
std::vector<double> q_grid(double lo, double hi, std::size_t points = 512);

}  // namespace nht
