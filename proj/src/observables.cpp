#include "nht/observables.hpp"

#include <algorithm>
#include <cmath>

namespace nht {

SpreadMetrics spread_of(std::span<const cplx> p, std::size_t origin) {
    double w = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double a2 = std::norm(p[i]);
        const double n = static_cast<double>(i) - static_cast<double>(origin);
        w += a2;
        m1 += n * a2;
    }
    if (!(w > 0.0) || !std::isfinite(w)) throw NumericalError("spread_metrics: zero-norm state");
    m1 /= w;
    // Central second moment, accumulated around the mean for accuracy.
    double m2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = static_cast<double>(i) - static_cast<double>(origin) - m1;
        m2 += d * d * std::norm(p[i]);
    }
    m2 /= w;
    SpreadMetrics s;
    s.mean = m1;
    s.sigma = std::sqrt(std::max(m2, 0.0));
    return s;
}

std::vector<SpreadMetrics> spread_metrics(const Trajectory& traj) {
    std::vector<SpreadMetrics> out;
    out.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        SpreadMetrics s = spread_of(traj.states[k], traj.origin);
        s.time = traj.times[k];
        s.norm_log = traj.log_norm[k];
        out.push_back(s);
    }
    return out;
}

int count_pulses(std::span<const double> times, std::span<const double> trace, double threshold,
                 double min_separation) {
    if (trace.empty()) return 0;
    const double top = *std::max_element(trace.begin(), trace.end());
    if (!(top > 0.0)) return 0;
    const double level = threshold * top;

    struct Peak {
        double t;
        double v;
    };
    std::vector<Peak> peaks;
    const std::size_t n = trace.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double v = trace[k];
        if (v < level) continue;
        const bool left_ok = k == 0 || v > trace[k - 1];
        const bool right_ok = k + 1 == n || v >= trace[k + 1];
        if (!left_ok || !right_ok) continue;
        if (!peaks.empty() && times[k] - peaks.back().t < min_separation) {
            if (v > peaks.back().v) peaks.back() = {times[k], v};
            continue;
        }
        peaks.push_back({times[k], v});
    }
    return static_cast<int>(peaks.size());
}

ScatterReport scatter_report(const Trajectory& traj, long n1, long n2, const ScatterOptions& opts) {
    if (traj.states.empty()) throw ConfigError("scatter_report: empty trajectory");
    if (n2 < n1) std::swap(n1, n2);
    if (!traj.init || traj.init->kind != InitialCondition::Kind::gaussian) {
        throw ContractError("scatter_report needs a trajectory launched from a gaussian packet");
    }
    if (!(opts.speed > 0.0)) throw ConfigError("scatter_report: packet speed must be > 0");
    if (!(opts.w0 > 0.0)) throw ConfigError("scatter_report: w0 must be > 0");

    ScatterReport r;
    const long n0 = traj.init->n0;
    if (n0 < n1) {
        r.rightward = true;
    } else if (n0 > n2) {
        r.rightward = false;
    } else {
        throw ContractError("scatter_report: packet launched inside the scattering region");
    }

    const auto& p = traj.states.back();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const long n = traj.position(i);
        const double a2 = std::norm(p[i]);
        if (n >= n1 && n <= n2) {
            r.resident += a2;
        } else if ((n > n2) == r.rightward) {
            r.transmitted += a2;
        } else {
            r.reflected += a2;
        }
    }

    const long offset = static_cast<long>(std::lround(4.0 * opts.w0));
    r.probe_site = r.rightward ? n2 + offset : n1 - offset;
    const long probe_index = r.probe_site + static_cast<long>(traj.origin);
    if (probe_index < 0 || probe_index >= static_cast<long>(traj.sites())) {
        throw ConfigError("scatter_report: probe site outside the lattice");
    }
    r.probe_times = traj.times;
    r.probe_trace.reserve(traj.states.size());
    for (const auto& s : traj.states) {
        r.probe_trace.push_back(std::abs(s[static_cast<std::size_t>(probe_index)]));
    }
    r.echoes = count_pulses(r.probe_times, r.probe_trace, opts.pulse_threshold,
                            opts.w0 / opts.speed);
    const auto top = std::max_element(r.probe_trace.begin(), r.probe_trace.end());
    r.complete = *top > 0.0 && std::next(top) != r.probe_trace.end();
    return r;
}

}  // namespace nht
