#include "nht/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nht {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZoneSlack = 1e-12;

std::vector<cplx> dense_spectrum(const Eigen::MatrixXcd& h) {
    if (static_cast<std::size_t>(h.rows()) > kMaxDenseSites) {
        throw ResourceError("finite_spectrum: " + std::to_string(h.rows()) +
                            " sites exceeds the dense-solve cap of " +
                            std::to_string(kMaxDenseSites));
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericalError("finite_spectrum: eigensolver failed");
    std::vector<cplx> ev(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

}  // namespace

DispersionPoint dispersion_chain(double q, const LatticeParams& params) {
    if (!(std::abs(q) <= kPi + kZoneSlack)) {
        throw DomainError("dispersion_chain: q outside the extended zone [-pi, pi]");
    }
    const double k = params.kappa;
    const double r = params.rho;
    const double arg = q + params.delta_phi();
    DispersionPoint p;
    p.q = q;
    p.e = cplx{2.0 * r * std::cos(arg), -params.gamma - 2.0 * k * std::cos(2.0 * q)};
    p.de = cplx{-2.0 * r * std::sin(arg), 4.0 * k * std::sin(2.0 * q)};
    p.d2e = cplx{-2.0 * r * std::cos(arg), 8.0 * k * std::cos(2.0 * q)};
    return p;
}

MinibandPair dispersion_zigzag(double q, const LatticeParams& params) {
    if (!(std::abs(q) <= 0.5 * kPi + kZoneSlack)) {
        throw DomainError("dispersion_zigzag: q outside the reduced zone [-pi/2, pi/2]");
    }
    const cplx common{0.0, -params.gamma - 2.0 * params.kappa * std::cos(2.0 * q)};
    const double band = 2.0 * params.rho * std::cos(q + params.delta_phi());
    return {common + band, common - band};
}

SaddleConstants saddle_constants(const LatticeParams& params) {
    SaddleConstants sc;
    sc.q1 = 0.5 * kPi;
    sc.q2 = -0.5 * kPi;
    const DispersionPoint p1 = dispersion_chain(sc.q1, params);
    const DispersionPoint p2 = dispersion_chain(sc.q2, params);
    sc.e1 = p1.e;
    sc.e2 = p2.e;
    sc.de1 = p1.de;
    sc.de2 = p2.de;
    sc.d2e1 = p1.d2e;
    sc.d2e2 = p2.d2e;
    if (!(params.kappa > 0.0)) {
        sc.selective = false;
        sc.note = "no imaginary-part selection (kappa = 0); two-packet asymptotics invalid";
    }
    return sc;
}

std::vector<cplx> finite_spectrum(const ChainOperator& op) {
    if (op.size() > kMaxDenseSites) {
        throw ResourceError("finite_spectrum: chain exceeds the dense-solve cap");
    }
    return dense_spectrum(op.to_dense());
}

std::vector<cplx> finite_spectrum(const SparseOperator& op) {
    if (op.size() > kMaxDenseSites) {
        throw ResourceError("finite_spectrum: operator exceeds the dense-solve cap");
    }
    return dense_spectrum(op.to_dense());
}

std::vector<double> q_grid(double lo, double hi, std::size_t points) {
    if (points < 2) throw ConfigError("q grid needs at least 2 points");
    std::vector<double> q(points);
    const double h = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) q[i] = lo + h * static_cast<double>(i);
    q.back() = hi;
    return q;
}

}  // namespace nht
