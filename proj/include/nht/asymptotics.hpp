#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nht/model.hpp"
#include "nht/propagator.hpp"
#include "nht/spectrum.hpp"

namespace nht {

inline constexpr std::size_t kDefaultPanels = 1024;

// c_n(t) = 1/(2 pi) ∫ dq exp[i q n - i E(q) t] over the extended zone, for the
// single-site excitation c_n(0) = delta_{n,0} of the clean chain.
// Uniform trapezoid rule; spectrally accurate for the periodic integrand.
cplx bloch_integral(long n, double t, const LatticeParams& params,
                    std::size_t panels = kDefaultPanels);

// Same, for every n in [n_lo, n_hi]; the integrand samples are shared.
std::vector<cplx> bloch_integral_range(long n_lo, long n_hi, double t, const LatticeParams& params,
                                       std::size_t panels = kDefaultPanels);

// The Bloch integral only describes the clean lattice; a non-zero field is a
// contract violation.
cplx bloch_integral(long n, double t, const LatticeParams& params, const SiteField& field,
                    std::size_t panels = kDefaultPanels);

// One of the two Gaussian packets of the long-time expansion.
struct AsymptoticPacket {
    double q_c{0.0};
    cplx e, de, d2e;
    cplx weight;  // sqrt(1 / (2 pi i E'' t))

    cplx amplitude(long n, double t) const;
};

AsymptoticPacket asymptotic_packet(const SaddleConstants& sc, int which, double t);

// Sum of the packets around q1 = pi/2 and q2 = -pi/2.
cplx asymptotic_amplitude(long n, double t, const SaddleConstants& sc);

enum class Direction { left, right };

// Slope of the tracked peak position of |p_n| (n > 0 for right, n < 0 for
// left, positions relative to the trajectory origin) versus time, fitted over
// the second half of the trajectory. Empty when the packet cannot be resolved.
std::optional<double> group_velocity_fit(const Trajectory& traj, Direction direction);

// Sub-site peak position of |p| restricted to the given half line, by
// parabolic interpolation around the discrete argmax.
std::optional<double> peak_position(const std::vector<cplx>& p, std::size_t origin,
                                    Direction direction);

}  // namespace nht
