#include "nht/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include "nht/asymptotics.hpp"
#include "nht/model.hpp"
#include "nht/propagator.hpp"
#include "nht/spectrum.hpp"

namespace nht {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* label, double value) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s = %.3e", label, value);
    return buf;
}

CheckResult bounded(std::string name, const char* label, double value, double tol) {
    return {std::move(name), value <= tol, fmt(label, value) + " (tol " + fmt("", tol).substr(3) + ")"};
}

// Greedy nearest-neighbour pairing of two spectra; returns the largest distance.
double spectrum_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
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

CheckResult chain_equals_zigzag() {
    const LatticeParams p{0.3, 1.0, 0.6, 0.4, -0.9};
    const std::size_t cells = 12;
    std::vector<double> u(2 * cells);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sin(1.7 * static_cast<double>(i));
    const SiteField field = SiteField::custom(u);
    const auto [va, vb] = split_sublattices(field);
    // Same ordering, different gauge: compare spectra, not matrix elements.
    const double d = spectrum_distance(finite_spectrum(build_zigzag(p, va, vb, cells)),
                                       finite_spectrum(build_chain(p, field, 2 * cells)));
    return bounded("chain and zigzag spectra coincide", "max |dE|", d, 1e-9);
}

CheckResult gauge_invariance() {
    const LatticeParams p = LatticeParams::symmetric(0.3, 1.0, 0.6, 0.7);
    const std::size_t cells = 10;
    const SiteField va = SiteField::custom(std::vector<double>(cells, 0.2));
    const SiteField vb = SiteField::custom(std::vector<double>(cells, -0.1));
    const double d = spectrum_distance(finite_spectrum(build_zigzag(p, va, vb, cells)),
                                       finite_spectrum(build_zigzag(gauge_shift(p, 1.3), va, vb, cells)));
    return bounded("common flux shift leaves the spectrum unchanged", "max |dE|", d, 1e-9);
}

CheckResult dispersion_derivatives() {
    const LatticeParams p = LatticeParams::symmetric(0.3, 1.0, 0.6, 0.25 * kPi);
    const double h = 1e-4;
    double worst = 0.0;
    for (double q : q_grid(-kPi + 2 * h, kPi - 2 * h, 41)) {
        const DispersionPoint c = dispersion_chain(q, p);
        const cplx fd1 = (dispersion_chain(q + h, p).e - dispersion_chain(q - h, p).e) / (2 * h);
        const cplx fd2 = (dispersion_chain(q + h, p).e - 2.0 * c.e + dispersion_chain(q - h, p).e) / (h * h);
        worst = std::max({worst, std::abs(fd1 - c.de), std::abs(fd2 - c.d2e) * 1e-1});
    }
    return bounded("dispersion derivatives match finite differences", "max error", worst, 1e-6);
}

CheckResult minibands_fold_chain() {
    const LatticeParams p{0.3, 1.0, 0.6, 0.5, -0.2};
    double worst = 0.0;
    for (double q : q_grid(-0.5 * kPi, 0.5 * kPi, 33)) {
        const MinibandPair mb = dispersion_zigzag(q, p);
        // On the doubled cell the two minibands are E(k) at k = q and q + pi.
        const cplx a = dispersion_chain(q, p).e;
        const double q2 = q > 0 ? q - kPi : q + kPi;
        const cplx b = dispersion_chain(q2, p).e;
        const double d1 = std::max(std::abs(mb.e_plus - a), std::abs(mb.e_minus - b));
        const double d2 = std::max(std::abs(mb.e_plus - b), std::abs(mb.e_minus - a));
        worst = std::max(worst, std::min(d1, d2));
    }
    return bounded("zigzag minibands fold the chain band", "max |dE|", worst, 1e-9);
}

CheckResult tuned_auxiliary() {
    const double kappa = 0.3;
    AuxiliaryParams aux{0.2, 0.5, tune_auxiliary_energy(0.2, kappa, 0.5)};
    const EffectiveParams e = effective_params(aux);
    const double d = std::abs(e.kappa_eff - cplx{0.0, -kappa});
    return bounded("tuned auxiliary energy gives hopping -i kappa", "|kappa_eff + i kappa|", d, 1e-12);
}

CheckResult hermitian_bessel() {
    const LatticeParams p = LatticeParams::symmetric(0.0, 1.0, 0.0, 0.3);
    const double t = 6.0;
    const std::size_t size = 101;
    const ChainOperator op = build_chain(p, SiteField::clean(size), size);
    EvolveOptions eo;
    eo.t_final = t;
    eo.dt = 0.002;
    eo.sample_every = std::numeric_limits<std::size_t>::max();
    const Trajectory traj = evolve(op, InitialCondition::single_site(0), eo);
    const auto c = traj.final_state.physical();
    double worst = 0.0;
    for (long n = -30; n <= 30; ++n) {
        const double j = std::abs(std::cyl_bessel_j(static_cast<double>(std::abs(n)), 2.0 * p.rho * t));
        worst = std::max(worst, std::abs(std::abs(c[static_cast<std::size_t>(n + 50)]) - j));
    }
    return bounded("hermitian single-site spreading follows |J_n(2 rho t)|", "max error", worst, 1e-8);
}

CheckResult hermitian_norm() {
    const LatticeParams p = LatticeParams::symmetric(0.0, 1.0, 0.0, 0.9);
    const std::size_t size = 81;
    std::vector<double> u(size);
    for (std::size_t i = 0; i < size; ++i) u[i] = 0.8 * std::cos(2.3 * static_cast<double>(i));
    const ChainOperator op = build_chain(p, SiteField::custom(u), size);
    EvolveOptions eo;
    eo.t_final = 10.0;
    eo.dt = 0.005;
    eo.sample_every = std::numeric_limits<std::size_t>::max();
    const Trajectory traj = evolve(op, InitialCondition::single_site(0), eo);
    return bounded("hermitian evolution conserves the norm", "|ln P(t)|",
                   std::abs(traj.log_norm.back()), 1e-8);
}

CheckResult propagator_matches_bloch() {
    const LatticeParams p = LatticeParams::symmetric(0.3, 1.0, 0.6, 0.25 * kPi);
    const double t = 5.0;
    const std::size_t size = 121;
    const ChainOperator op = build_chain(p, SiteField::clean(size), size);
    EvolveOptions eo;
    eo.t_final = t;
    eo.dt = 0.002;
    eo.sample_every = std::numeric_limits<std::size_t>::max();
    const Trajectory traj = evolve(op, InitialCondition::single_site(0), eo);
    const auto c = traj.final_state.physical();
    const auto ref = bloch_integral_range(-40, 40, t, p);
    double worst = 0.0;
    double scale = 0.0;
    for (long n = -40; n <= 40; ++n) {
        const cplx b = ref[static_cast<std::size_t>(n + 40)];
        worst = std::max(worst, std::abs(c[static_cast<std::size_t>(n + 60)] - b));
        scale = std::max(scale, std::abs(b));
    }
    return bounded("propagator reproduces the Bloch integral", "max relative error", worst / scale, 1e-8);
}

std::vector<cplx> normalized(std::vector<cplx> c) {
    double n2 = 0.0;
    for (const cplx& z : c) n2 += std::norm(z);
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& z : c) z *= inv;
    return c;
}

CheckResult auxiliary_tracks_effective() {
    const LatticeParams p = LatticeParams::symmetric(0.3, 1.0, 0.6, 0.25 * kPi);
    // |U| / sigma = sigma / kappa = 30 with the tuned U.
    const double sigma = 9.0;
    const AuxiliaryParams aux{0.0, sigma, tune_auxiliary_energy(0.0, p.kappa, sigma)};
    const std::size_t cells = 24;
    const SiteField va = SiteField::clean(cells), vb = SiteField::clean(cells);
    const SparseOperator full = build_auxiliary(p, aux, va, vb, cells);
    const SparseOperator eff = build_effective(p, aux, va, vb, cells);

    std::vector<cplx> c0(2 * cells, cplx{});
    c0[cells] = 1.0;
    EvolveOptions eo;
    eo.t_final = 2.0;
    eo.sample_every = std::numeric_limits<std::size_t>::max();
    eo.dt = 0.05 / full.spectral_bound();
    const Trajectory a = evolve(full, StateVector{embed_in_auxiliary(c0), 0.0, 0.0}, eo);
    const Trajectory b = evolve(eff, StateVector{c0, 0.0, 0.0}, eo);
    const auto ca = normalized(extract_main(a.final_state.physical()));
    const auto cb = normalized(b.final_state.physical());
    double worst = 0.0;
    for (std::size_t i = 0; i < cb.size(); ++i) worst = std::max(worst, std::abs(ca[i] - cb[i]));
    return bounded("auxiliary-site model tracks the eliminated model", "max |dp|", worst, 2e-2);
}

}  // namespace

std::vector<CheckResult> run_invariant_checks() {
    const std::vector<std::function<CheckResult()>> checks{
        chain_equals_zigzag, gauge_invariance,    dispersion_derivatives,
        minibands_fold_chain, tuned_auxiliary,     hermitian_bessel,
        hermitian_norm,       propagator_matches_bloch, auxiliary_tracks_effective};
    std::vector<CheckResult> out;
    out.reserve(checks.size());
    for (const auto& check : checks) {
        try {
            out.push_back(check());
        } catch (const std::exception& e) {
            out.push_back({"(check raised)", false, e.what()});
        }
    }
    return out;
}

}  // namespace nht
