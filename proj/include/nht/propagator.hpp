#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nht/model.hpp"

namespace nht {

template <class Op>
concept LatticeOperator = requires(const Op& op, std::span<const cplx> x, std::span<cplx> y, cplx s) {
    { op.size() } -> std::convertible_to<std::size_t>;
    { op.spectral_bound() } -> std::convertible_to<double>;
    op.apply(x, y);
    op.apply_fused(s, x, x, y);
    op.apply_fused_core(s, x, x, y);
    { op.uniform() } -> std::convertible_to<cplx>;
};

// Physical amplitudes are amps * exp(log_scale). amps is kept with
// max|amps| in [0.5, 2] by exact power-of-two rescaling.
struct StateVector {
    std::vector<cplx> amps;
    double log_scale{0.0};
    double time{0.0};

    std::vector<cplx> physical() const;
    // ln sum_n |c_n|^2
    double log_norm() const;
    // Fold a power of two into log_scale when max|amps| leaves [0.5, 2].
    // Returns max|amps| after rescaling.
    double renormalize();
};

struct InitialCondition {
    enum class Kind { single_site, gaussian };

    Kind kind{Kind::single_site};
    long n0{0};        // signed site index, relative to the trajectory origin
    double w0{10.0};   // gaussian width (sites)
    double q0{0.0};    // carrier wave number

    static InitialCondition single_site(long n0 = 0) { return {Kind::single_site, n0, 0.0, 0.0}; }
    static InitialCondition gaussian(long n0, double w0, double q0) {
        return {Kind::gaussian, n0, w0, q0};
    }
};

// Unit-norm chain-ordered amplitudes; c_n(0) ∝ exp[-(n-n0)^2/w0^2 + i q0 n] for gaussians.
std::vector<cplx> prepare_state(const InitialCondition& init, std::size_t size, std::size_t origin);

struct EvolveOptions {
    double t_final{0.0};
    double dt{0.0};                   // 0 selects default_dt(op)
    std::size_t sample_every{1};      // in steps
    std::optional<std::size_t> origin;  // array index of n = 0; default size / 2
    double edge_threshold{1e-8};      // normalized |p| at an end site that counts as a touch
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<cplx>> states;  // normalized p_n(t) = c_n / sqrt(P)
    std::vector<double> log_norm;           // ln P(t)
    StateVector final_state;
    std::size_t origin{0};
    double dt{0.0};
    std::size_t steps{0};
    std::size_t sample_every{1};
    bool edge_touch{false};
    double edge_touch_time{-1.0};
    std::optional<InitialCondition> init;

    std::size_t sites() const noexcept { return final_state.amps.size(); }
    // signed position of array index i
    long position(std::size_t i) const noexcept {
        return static_cast<long>(i) - static_cast<long>(origin);
    }
};

// Called once per sample with the normalized state.
using SampleObserver = std::function<void(double t, std::span<const cplx> p, double log_norm)>;

// 0.05 / spectral bound.
template <LatticeOperator Op>
double default_dt(const Op& op);

// Largest admissible dt * spectral_bound.
inline constexpr double kStabilityLimit = 0.1;

template <LatticeOperator Op>
Trajectory evolve(const Op& op, const InitialCondition& init, const EvolveOptions& opts);

// Evolve an arbitrary (not necessarily normalized) initial state.
template <LatticeOperator Op>
Trajectory evolve(const Op& op, StateVector initial, const EvolveOptions& opts);

// Same integration, but samples are only handed to `observer`; the returned
// trajectory carries times, log norms and the final state, without `states`.
template <LatticeOperator Op>
Trajectory evolve_observed(const Op& op, StateVector initial, const EvolveOptions& opts,
                           const SampleObserver& observer);

// Max-norm relative difference of the final normalized states at dt and dt/2.
template <LatticeOperator Op>
double convergence_check(const Op& op, const InitialCondition& init, double t_final, double dt);

// N >= 2 v_max t_final + 2 margin, v_max = 2 rho + 4 kappa.
std::size_t min_lattice_size(const LatticeParams& params, double t_final, std::size_t margin);

}  // namespace nht
