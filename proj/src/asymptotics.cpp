#include "nht/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nht {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMinPanels = 64;

std::vector<cplx> phase_samples(double t, const LatticeParams& params, std::size_t panels) {
    if (panels < kMinPanels) throw ConfigError("bloch_integral needs at least 64 panels");
    std::vector<cplx> f(panels);
    const double h = 2.0 * kPi / static_cast<double>(panels);
    for (std::size_t j = 0; j < panels; ++j) {
        const double q = -kPi + h * static_cast<double>(j);
        f[j] = std::exp(-I * dispersion_chain(q, params).e * t);
    }
    return f;
}

cplx fourier_sum(std::span<const cplx> f, long n) {
    const std::size_t panels = f.size();
    const double h = 2.0 * kPi / static_cast<double>(panels);
    cplx acc{};
    for (std::size_t j = 0; j < panels; ++j) {
        const double q = -kPi + h * static_cast<double>(j);
        acc += f[j] * std::exp(I * (q * static_cast<double>(n)));
    }
    return acc / static_cast<double>(panels);
}

}  // namespace

cplx bloch_integral(long n, double t, const LatticeParams& params, std::size_t panels) {
    const auto f = phase_samples(t, params, panels);
    return fourier_sum(f, n);
}

std::vector<cplx> bloch_integral_range(long n_lo, long n_hi, double t, const LatticeParams& params,
                                       std::size_t panels) {
    if (n_hi < n_lo) throw ConfigError("bloch_integral_range: empty site range");
    const auto f = phase_samples(t, params, panels);
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (long n = n_lo; n <= n_hi; ++n) out.push_back(fourier_sum(f, n));
    return out;
}

cplx bloch_integral(long n, double t, const LatticeParams& params, const SiteField& field,
                    std::size_t panels) {
    if (field.max_abs() != 0.0) {
        throw ContractError("bloch_integral holds only for the clean lattice (U_n = 0)");
    }
    return bloch_integral(n, t, params, panels);
}

cplx AsymptoticPacket::amplitude(long n, double t) const {
    const cplx xc = static_cast<double>(n) - de * t;
    return weight * std::exp(I * (q_c * static_cast<double>(n)) - I * e * t) *
           std::exp(-(xc * xc) / (2.0 * I * d2e * t));
}

AsymptoticPacket asymptotic_packet(const SaddleConstants& sc, int which, double t) {
    if (!(t > 0.0)) throw DomainError("asymptotic_amplitude: t must be > 0");
    if (!sc.selective) throw DomainError("asymptotic_amplitude: " + sc.note);
    AsymptoticPacket p;
    if (which == 1) {
        p = AsymptoticPacket{sc.q1, sc.e1, sc.de1, sc.d2e1, {}};
    } else {
        p = AsymptoticPacket{sc.q2, sc.e2, sc.de2, sc.d2e2, {}};
    }
    p.weight = std::sqrt(1.0 / (2.0 * kPi * I * p.d2e * t));
    return p;
}

cplx asymptotic_amplitude(long n, double t, const SaddleConstants& sc) {
    return asymptotic_packet(sc, 1, t).amplitude(n, t) + asymptotic_packet(sc, 2, t).amplitude(n, t);
}

std::optional<double> peak_position(const std::vector<cplx>& p, std::size_t origin,
                                    Direction direction) {
    std::size_t lo = 0, hi = 0;  // inclusive search range
    if (direction == Direction::right) {
        if (origin + 1 >= p.size()) return std::nullopt;
        lo = origin + 1;
        hi = p.size() - 1;
    } else {
        if (origin == 0) return std::nullopt;
        lo = 0;
        hi = origin - 1;
    }
    std::size_t best = lo;
    for (std::size_t i = lo; i <= hi; ++i) {
        if (std::abs(p[i]) > std::abs(p[best])) best = i;
    }
    if (std::abs(p[best]) == 0.0) return std::nullopt;
    // A peak pinned to the restricted range's inner edge is not a separated packet.
    const std::size_t inner = direction == Direction::right ? lo : hi;
    if (best == inner) return std::nullopt;
    double offset = 0.0;
    if (best > 0 && best + 1 < p.size()) {
        const double ym = std::abs(p[best - 1]);
        const double y0 = std::abs(p[best]);
        const double yp = std::abs(p[best + 1]);
        const double denom = ym - 2.0 * y0 + yp;
        if (denom < 0.0) offset = 0.5 * (ym - yp) / denom;
    }
    return static_cast<double>(best) + offset - static_cast<double>(origin);
}

std::optional<double> group_velocity_fit(const Trajectory& traj, Direction direction) {
    const std::size_t samples = traj.states.size();
    if (samples < 4) return std::nullopt;
    std::vector<double> ts, xs;
    for (std::size_t k = samples / 2; k < samples; ++k) {
        const auto x = peak_position(traj.states[k], traj.origin, direction);
        if (!x) return std::nullopt;
        ts.push_back(traj.times[k]);
        xs.push_back(*x);
    }
    if (ts.size() < 2) return std::nullopt;
    const double m = static_cast<double>(ts.size());
    double st = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sx += xs[i];
    }
    st /= m;
    sx /= m;
    double stt = 0.0, stx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - st) * (ts[i] - st);
        stx += (ts[i] - st) * (xs[i] - sx);
    }
    if (stt == 0.0) return std::nullopt;
    return stx / stt;
}

}  // namespace nht
