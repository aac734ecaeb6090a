#include "nht/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "nht/observables.hpp"

namespace nht {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t member_seed(std::uint64_t base_seed, std::uint64_t k) noexcept {
    return mix64(mix64(base_seed) ^ mix64(k + 0x632BE59BD9B4E019ULL));
}

double uniform_open(std::uint64_t seed, std::uint64_t k) noexcept {
    const std::uint64_t bits = mix64(seed + 0x9E3779B97F4A7C15ULL * (k + 1));
    // 53 random bits, centered in their bin: strictly inside (0, 1).
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

SiteField draw_disorder(std::uint64_t seed, std::size_t size, double delta, std::size_t first,
                        std::size_t last) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("disorder delta must be >= 0");
    if (size > 0 && (first > last || last >= size)) {
        throw ConfigError("disorder region outside the lattice");
    }
    SiteField f;
    f.values.assign(size, 0.0);
    f.kind = FieldKind::uniform_disorder;
    f.delta = delta;
    f.n1 = first;
    f.n2 = last;
    if (delta == 0.0) return f;
    for (std::size_t i = first; i <= last && i < size; ++i) {
        double v = delta * (2.0 * uniform_open(seed, i) - 1.0);
        if (std::abs(v) >= delta) v = std::nextafter(v, 0.0);
        f.values[i] = v;
    }
    return f;
}

SiteField draw_disorder(std::uint64_t seed, std::size_t size, double delta) {
    return draw_disorder(seed, size, delta, 0, size == 0 ? 0 : size - 1);
}

double ensemble_dt(const EnsembleSpec& spec) {
    if (spec.scenario.dt > 0.0) return spec.scenario.dt;
    const LatticeParams& p = spec.scenario.params;
    const double bound = std::abs(p.gamma) + 2.0 * p.kappa + 2.0 * p.rho + spec.delta;
    return bound > 0.0 ? 0.05 / bound : 0.05;
}

namespace {

struct MemberOutput {
    std::vector<double> times;
    std::vector<double> sigma;
    bool edge_touch{false};
};

MemberOutput run_member(const EnsembleSpec& spec, std::uint64_t seed, double dt,
                        std::size_t sample_every) {
    const EnsembleScenario& sc = spec.scenario;
    const SiteField field = draw_disorder(seed, sc.size, spec.delta);
    const ChainOperator op = build_chain(sc.params, field, sc.size);
    EvolveOptions opts;
    opts.t_final = sc.t_final;
    opts.dt = dt;
    opts.sample_every = sample_every;
    opts.origin = sc.size / 2;
    StateVector init{prepare_state(sc.init, sc.size, *opts.origin), 0.0, 0.0};
    MemberOutput out;
    const Trajectory traj = evolve_observed(
        op, std::move(init), opts, [&](double t, std::span<const cplx> p, double) {
            out.times.push_back(t);
            out.sigma.push_back(spread_of(p, *opts.origin).sigma);
        });
    out.edge_touch = traj.edge_touch;
    return out;
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
    if (spec.realizations == 0) throw ConfigError("ensemble needs at least one realization");
    if (!(spec.delta >= 0.0)) throw ConfigError("disorder delta must be >= 0");
    if (!(spec.scenario.sample_interval > 0.0)) throw ConfigError("sample_interval must be > 0");
    spec.scenario.params.validate();

    EnsembleResult res;
    const double dt_req = ensemble_dt(spec);
    const double t_final = spec.scenario.t_final;
    // Same effective dt as evolve() will use, so sample times line up across members.
    double dt = dt_req;
    if (t_final > 0.0) {
        const auto steps = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(t_final / dt_req - 1e-9)));
        dt = t_final / static_cast<double>(steps);
    }
    res.dt = dt;
    res.sample_every = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(spec.scenario.sample_interval / dt)));

    const std::size_t count = spec.realizations;
    res.seeds.resize(count);
    for (std::size_t k = 0; k < count; ++k) res.seeds[k] = member_seed(spec.base_seed, k);

    std::vector<MemberOutput> members(count);
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
            try {
                members[k] = run_member(spec, res.seeds[k], dt_req, res.sample_every);
            } catch (...) {
                failures[k] = std::current_exception();
            }
        }
    };
    unsigned threads = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    for (std::size_t k = 0; k < count; ++k) {
        if (!failures[k]) continue;
        std::string why = "unknown error";
        try {
            std::rethrow_exception(failures[k]);
        } catch (const std::exception& e) {
            why = e.what();
        } catch (...) {
        }
        throw NumericalError("ensemble member " + std::to_string(k) + " (seed " +
                             std::to_string(res.seeds[k]) + ") failed: " + why);
    }

    res.times = members.front().times;
    const std::size_t samples = res.times.size();
    res.sigma_mean.assign(samples, 0.0);
    res.sigma_stderr.assign(samples, 0.0);
    res.member_sigma.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        if (members[k].sigma.size() != samples) throw NumericalError("ensemble sample mismatch");
        if (members[k].edge_touch) ++res.edge_touches;
        for (std::size_t j = 0; j < samples; ++j) res.sigma_mean[j] += members[k].sigma[j];
        res.member_sigma.push_back(std::move(members[k].sigma));
    }
    const double r = static_cast<double>(count);
    for (std::size_t j = 0; j < samples; ++j) res.sigma_mean[j] /= r;
    if (count > 1) {
        for (std::size_t j = 0; j < samples; ++j) {
            double ss = 0.0;
            for (std::size_t k = 0; k < count; ++k) {
                const double d = res.member_sigma[k][j] - res.sigma_mean[j];
                ss += d * d;
            }
            res.sigma_stderr[j] = std::sqrt(ss / (r - 1.0) / r);
        }
    }
    return res;
}

}  // namespace nht
