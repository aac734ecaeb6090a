#include "nht/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nht {

namespace {

constexpr cplx I{0.0, 1.0};

struct Scan {
    double max_abs2{0.0};
    double sum_abs2{0.0};
};

Scan scan(std::span<const cplx> v) {
    Scan s;
    for (const cplx& z : v) {
        const double a2 = std::norm(z);
        s.sum_abs2 += a2;
        s.max_abs2 = std::max(s.max_abs2, a2);
    }
    return s;
}

}  // namespace

std::vector<cplx> StateVector::physical() const {
    std::vector<cplx> out(amps);
    const double s = std::exp(log_scale);
    for (cplx& z : out) z *= s;
    return out;
}

double StateVector::log_norm() const {
    // scaled by the largest magnitude so that tiny amplitudes do not underflow
    double m = 0.0;
    for (const cplx& z : amps) m = std::max(m, std::abs(z));
    if (!(m > 0.0)) return -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (const cplx& z : amps) s += std::norm(z / m);
    return std::log(s) + 2.0 * (std::log(m) + log_scale);
}

double StateVector::renormalize() {
    double m = 0.0;
    for (const cplx& z : amps) m = std::max(m, std::abs(z));
    if (!std::isfinite(m)) throw NumericalError("state amplitude is not finite");
    if (m == 0.0) throw NumericalError("state vanished (zero norm)");
    if (m >= 0.5 && m <= 2.0) return m;
    int e = 0;
    std::frexp(m, &e);  // m = f 2^e, f in [0.5, 1)
    const int shift = 1 - e;  // brings m into [1, 2)
    for (cplx& z : amps) z = cplx{std::ldexp(z.real(), shift), std::ldexp(z.imag(), shift)};
    log_scale -= static_cast<double>(shift) * std::numbers::ln2;
    return std::ldexp(m, shift);
}

std::vector<cplx> prepare_state(const InitialCondition& init, std::size_t size, std::size_t origin) {
    if (origin >= size) throw ConfigError("trajectory origin outside the lattice");
    std::vector<cplx> c(size, cplx{});
    const long lo = -static_cast<long>(origin);
    const long hi = static_cast<long>(size) - 1 - static_cast<long>(origin);
    if (init.n0 < lo || init.n0 > hi) throw ConfigError("initial site n0 outside the lattice");
    if (init.kind == InitialCondition::Kind::single_site) {
        c[static_cast<std::size_t>(init.n0 - lo)] = 1.0;
        return c;
    }
    if (!(init.w0 > 0.0)) throw ConfigError("gaussian width w0 must be > 0");
    double norm2 = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        const double n = static_cast<double>(static_cast<long>(i) + lo);
        const double x = (n - static_cast<double>(init.n0)) / init.w0;
        c[i] = std::exp(-x * x) * std::exp(I * (init.q0 * n));
        norm2 += std::norm(c[i]);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& z : c) z *= inv;
    return c;
}

template <LatticeOperator Op>
double default_dt(const Op& op) {
    const double bound = op.spectral_bound();
    return bound > 0.0 ? 0.05 / bound : 0.05;
}

template <LatticeOperator Op>
Trajectory evolve_observed(const Op& op, StateVector initial, const EvolveOptions& opts,
                           const SampleObserver& observer) {
    const std::size_t size = op.size();
    if (initial.amps.size() != size) throw ConfigError("initial state size does not match operator");
    if (!(opts.t_final >= 0.0) || !std::isfinite(opts.t_final)) {
        throw ConfigError("t_final must be finite and >= 0");
    }
    if (opts.dt < 0.0 || !std::isfinite(opts.dt)) throw ConfigError("dt must be > 0");
    if (opts.sample_every == 0) throw ConfigError("sample_every must be >= 1");

    const double bound = op.spectral_bound();
    double dt = opts.dt > 0.0 ? opts.dt : default_dt(op);
    std::size_t steps = 0;
    if (opts.t_final > 0.0) {
        steps = static_cast<std::size_t>(std::ceil(opts.t_final / dt - 1e-9));
        steps = std::max<std::size_t>(steps, 1);
        dt = opts.t_final / static_cast<double>(steps);
    }
    if (dt * bound > kStabilityLimit * (1.0 + 1e-12)) {
        throw DomainError("dt = " + std::to_string(dt) + " violates the stability bound dt * " +
                          std::to_string(bound) + " <= " + std::to_string(kStabilityLimit));
    }

    Trajectory traj;
    traj.origin = opts.origin.value_or(size / 2);
    if (traj.origin >= size) throw ConfigError("trajectory origin outside the lattice");
    traj.dt = dt;
    traj.steps = steps;
    traj.sample_every = opts.sample_every;

    StateVector state = std::move(initial);
    state.renormalize();

    std::vector<cplx> w1(size), w2(size), normalized(size);
    const double edge2 = opts.edge_threshold * opts.edge_threshold;

    auto record = [&](double sum_abs2) {
        const double inv = 1.0 / std::sqrt(sum_abs2);
        for (std::size_t i = 0; i < size; ++i) normalized[i] = state.amps[i] * inv;
        const double ln_p = std::log(sum_abs2) + 2.0 * state.log_scale;
        traj.times.push_back(state.time);
        traj.log_norm.push_back(ln_p);
        observer(state.time, normalized, ln_p);
    };

    auto check_edges = [&](const Scan& s) {
        if (traj.edge_touch) return;
        if (std::norm(state.amps.front()) > edge2 * s.sum_abs2 ||
            std::norm(state.amps.back()) > edge2 * s.sum_abs2) {
            traj.edge_touch = true;
            traj.edge_touch_time = state.time;
        }
    };

    Scan s = scan(state.amps);
    check_edges(s);
    record(s.sum_abs2);

    // Classical RK4 on a linear autonomous system is the degree-4 Taylor
    // polynomial of exp(-i H dt); it is evaluated here in nested form,
    //   y + h G (y + h/2 G (y + h/3 G (y + h/4 G y))),  G = -i H_core.
    // The uniform part commutes with everything and is applied exactly:
    // growth/decay goes into log_scale, a real part into a phase.
    const cplx lambda = op.uniform();
    const double decay = lambda.imag() * dt;
    const cplx phase = std::exp(cplx{0.0, -lambda.real() * dt});
    const cplx s4 = -I * (dt / 4.0);
    const cplx s3 = -I * (dt / 3.0);
    const cplx s2 = -I * (dt / 2.0);
    const cplx s1 = -I * dt;
    for (std::size_t k = 1; k <= steps; ++k) {
        std::span<const cplx> y = state.amps;
        op.apply_fused_core(s4, y, y, w1);
        op.apply_fused_core(s3, w1, y, w2);
        op.apply_fused_core(s2, w2, y, w1);
        op.apply_fused_core(s1, w1, y, w2);
        state.amps.swap(w2);
        if (lambda.real() != 0.0) {
            for (cplx& z : state.amps) z *= phase;
        }
        state.log_scale += decay;
        state.time = static_cast<double>(k) * dt;

        state.renormalize();
        s = scan(state.amps);
        check_edges(s);
        if (k % opts.sample_every == 0 || k == steps) record(s.sum_abs2);
    }

    traj.final_state = std::move(state);
    return traj;
}

template <LatticeOperator Op>
Trajectory evolve(const Op& op, StateVector initial, const EvolveOptions& opts) {
    std::vector<std::vector<cplx>> states;
    Trajectory traj = evolve_observed(op, std::move(initial), opts,
                                      [&](double, std::span<const cplx> p, double) {
                                          states.emplace_back(p.begin(), p.end());
                                      });
    traj.states = std::move(states);
    return traj;
}

template <LatticeOperator Op>
Trajectory evolve(const Op& op, const InitialCondition& init, const EvolveOptions& opts) {
    const std::size_t origin = opts.origin.value_or(op.size() / 2);
    StateVector state{prepare_state(init, op.size(), origin), 0.0, 0.0};
    EvolveOptions o = opts;
    o.origin = origin;
    Trajectory traj = evolve(op, std::move(state), o);
    traj.init = init;
    return traj;
}

template <LatticeOperator Op>
double convergence_check(const Op& op, const InitialCondition& init, double t_final, double dt) {
    EvolveOptions coarse;
    coarse.t_final = t_final;
    coarse.dt = dt;
    coarse.sample_every = std::numeric_limits<std::size_t>::max();
    EvolveOptions fine = coarse;
    fine.dt = 0.5 * dt;
    const Trajectory a = evolve(op, init, coarse);
    const Trajectory b = evolve(op, init, fine);
    const auto& pa = a.states.back();
    const auto& pb = b.states.back();
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        diff = std::max(diff, std::abs(pa[i] - pb[i]));
        scale = std::max(scale, std::abs(pb[i]));
    }
    return diff / scale;
}

std::size_t min_lattice_size(const LatticeParams& params, double t_final, std::size_t margin) {
    if (!(t_final >= 0.0)) throw ConfigError("t_final must be >= 0");
    const double v_max = 2.0 * params.rho + 4.0 * params.kappa;
    const double n = 2.0 * v_max * t_final + 2.0 * static_cast<double>(margin);
    return static_cast<std::size_t>(std::ceil(n - 1e-9));
}

template double default_dt(const ChainOperator&);
template double default_dt(const SparseOperator&);
template Trajectory evolve(const ChainOperator&, const InitialCondition&, const EvolveOptions&);
template Trajectory evolve(const SparseOperator&, const InitialCondition&, const EvolveOptions&);
template Trajectory evolve(const ChainOperator&, StateVector, const EvolveOptions&);
template Trajectory evolve(const SparseOperator&, StateVector, const EvolveOptions&);
template Trajectory evolve_observed(const ChainOperator&, StateVector, const EvolveOptions&,
                                    const SampleObserver&);
template Trajectory evolve_observed(const SparseOperator&, StateVector, const EvolveOptions&,
                                    const SampleObserver&);
template double convergence_check(const ChainOperator&, const InitialCondition&, double, double);
template double convergence_check(const SparseOperator&, const InitialCondition&, double, double);

}  // namespace nht
