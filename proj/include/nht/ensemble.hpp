#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nht/model.hpp"
#include "nht/propagator.hpp"

namespace nht {

// splitmix64 output function.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Seed of realization k, derived from the base seed by counter-based mixing.
std::uint64_t member_seed(std::uint64_t base_seed, std::uint64_t k) noexcept;

// Value k of the counter-based stream of `seed`, uniform on the open interval (0, 1).
double uniform_open(std::uint64_t seed, std::uint64_t k) noexcept;

// i.i.d. uniform values on (-delta, delta).
SiteField draw_disorder(std::uint64_t seed, std::size_t size, double delta);

// Same stream, but only sites [first, last] (array indices) are disordered.
SiteField draw_disorder(std::uint64_t seed, std::size_t size, double delta, std::size_t first,
                        std::size_t last);

struct EnsembleScenario {
    LatticeParams params;
    std::size_t size{400};
    double t_final{100.0};
    double dt{0.0};               // 0: 0.05 / (gamma + 2 kappa + 2 rho + delta)
    double sample_interval{1.0};  // time between sigma samples
    InitialCondition init{InitialCondition::single_site(0)};
};

struct EnsembleSpec {
    std::size_t realizations{100};
    std::uint64_t base_seed{0};
    double delta{1.0};
    EnsembleScenario scenario;
    unsigned threads{0};  // 0: hardware concurrency
};

struct EnsembleResult {
    std::vector<double> times;
    std::vector<double> sigma_mean;
    std::vector<double> sigma_stderr;
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<double>> member_sigma;  // [realization][sample]
    std::size_t edge_touches{0};                     // members whose front reached an end site
    double dt{0.0};
    std::size_t sample_every{1};
};

// Members are independent and may run on several threads; the reduction runs in
// realization order, so the result does not depend on scheduling.
EnsembleResult run_ensemble(const EnsembleSpec& spec);

// Time step used by run_ensemble for a given spec.
double ensemble_dt(const EnsembleSpec& spec);

}  // namespace nht
