#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nht/propagator.hpp"

namespace nht {

struct SpreadMetrics {
    double time{0.0};
    double norm_log{0.0};  // ln P(t)
    double sigma{0.0};     // standard deviation of |p_n|^2 (sites)
    double mean{0.0};      // first moment (sites, relative to the origin)
};

// Moments of |p_n|^2 for one normalized state; positions are i - origin.
SpreadMetrics spread_of(std::span<const cplx> p, std::size_t origin);

std::vector<SpreadMetrics> spread_metrics(const Trajectory& traj);

struct ScatterOptions {
    double pulse_threshold{0.1};  // fraction of the probe-trace maximum
    double w0{10.0};              // packet width; sets the probe offset and pulse separation
    double speed{0.0};            // |group velocity| of the launched packet, sites per time
};

struct ScatterReport {
    double transmitted{0.0};
    double reflected{0.0};
    double resident{0.0};
    int echoes{0};
    bool complete{true};      // false when the pulse is still arriving at t_final
    bool rightward{true};
    long probe_site{0};
    std::vector<double> probe_times;
    std::vector<double> probe_trace;  // |p_probe(t)|
};

// Splits the final normalized probability around the scattering region
// [n1, n2] (signed positions) and counts transmitted pulses at the probe site
// n2 + 4 w0 (or n1 - 4 w0 for a leftward packet).
ScatterReport scatter_report(const Trajectory& traj, long n1, long n2, const ScatterOptions& opts);

// Local maxima above threshold * max, merged when closer than min_separation in time.
int count_pulses(std::span<const double> times, std::span<const double> trace, double threshold,
                 double min_separation);

}  // namespace nht
