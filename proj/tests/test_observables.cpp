#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nht/ensemble.hpp"
#include "nht/model.hpp"
#include "nht/observables.hpp"
#include "nht/propagator.hpp"
#include "nht/spectrum.hpp"
#include "support.hpp"

using namespace nht;

namespace {

constexpr double pi = std::numbers::pi;

Trajectory run(const ChainOperator& op, InitialCondition init, double t, std::size_t every,
               double dt = 0.0) {
    EvolveOptions o;
    o.t_final = t;
    o.dt = dt;
    o.sample_every = every;
    return evolve(op, init, o);
}

struct Scatter {
    ScatterReport report;
    Trajectory traj;
};

// Packet launched 4 w0 before the region, probe 4 w0 beyond it.
Scatter scatter_run(const LatticeParams& p, double q0, long n1, long n2, const std::string& kind) {
    const double w0 = 10.0;
    const double v = dispersion_chain(q0, p).de.real();
    const bool right = v > 0;
    const long n0 = right ? n1 - 40 : n2 + 40;
    const long probe = right ? n2 + 40 : n1 - 40;
    const double tf = (std::abs(probe - n0) + 2.0 * (n2 - n1) + 4 * w0) / std::abs(v);
    const std::size_t size = min_lattice_size(p, tf, std::abs(n0) + 40) | 1U;
    const std::size_t origin = size / 2;
    SiteField f = SiteField::clean(size);
    if (kind == "defects") {
        f = SiteField::defect_pair(size, 1.0, origin + n1, origin + n2);
    } else if (kind == "disorder") {
        f = draw_disorder(7, size, 1.0, origin + n1, origin + n2);
    }
    const auto op = build_chain(p, f, size);
    EvolveOptions o;
    o.t_final = tf;
    o.sample_every = std::max<std::size_t>(1, std::size_t(std::lround(0.25 / default_dt(op))));
    Trajectory tr = evolve(op, InitialCondition::gaussian(n0, w0, q0), o);
    ScatterOptions so;
    so.w0 = w0;
    so.speed = std::abs(v);
    return {scatter_report(tr, n1, n2, so), std::move(tr)};
}

}  // namespace

TEST_CASE("spread of a single site") {
    std::vector<cplx> p(11);
    p[7] = 1.0;
    const SpreadMetrics s = spread_of(p, 5);
    CHECK(s.sigma == 0.0);
    CHECK(s.mean == 2.0);
    CHECK_THROWS_AS(spread_of(std::vector<cplx>(4), 1), NumericalError);
}

TEST_CASE("spread moments against the definition") {
    std::vector<cplx> p{{0.5, 0}, {0, 0.5}, {0.5, 0.5}, {0, 0}, {-0.5, 0}};
    const auto q = testing::unit(p);
    double m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double n = double(i) - 2.0;
        m1 += n * std::norm(q[i]);
        m2 += n * n * std::norm(q[i]);
    }
    const SpreadMetrics s = spread_of(q, 2);
    CHECK(s.mean == doctest::Approx(m1));
    CHECK(s.sigma * s.sigma == doctest::Approx(m2 - m1 * m1));
}

TEST_CASE("hermitian clean chain: sigma(t) = sqrt(2) rho t") {
    const double rho = 1.0;
    const auto p = LatticeParams{0, rho, 0, 0, 0};
    const std::size_t n = min_lattice_size(p, 50, 20) | 1U;
    const Trajectory tr = run(build_chain(p, SiteField::clean(n), n), InitialCondition::single_site(0), 50.0, 80);
    for (const SpreadMetrics& m : spread_metrics(tr)) {
        if (m.time < 5.0) continue;
        CHECK(m.sigma == doctest::Approx(std::sqrt(2.0) * rho * m.time).epsilon(0.02));
        CHECK(std::abs(m.mean) < 1e-9);
    }
}

TEST_CASE("non-hermitian clean chain, phi = pi/4: d sigma/dt -> sqrt(2)") {
    const auto p = LatticeParams::symmetric(0.3, 1.0, 0.6, pi / 4);
    const std::size_t n = min_lattice_size(p, 45, 20) | 1U;
    const Trajectory tr = run(build_chain(p, SiteField::clean(n), n), InitialCondition::single_site(0), 45.0, 32);
    const auto m = spread_metrics(tr);
    // slope over a window centered at t = 40
    const SpreadMetrics* a = nullptr;
    const SpreadMetrics* b = nullptr;
    for (const auto& s : m) {
        if (!a && s.time >= 35.0) a = &s;
        if (s.time <= 45.0) b = &s;
    }
    const double slope = (b->sigma - a->sigma) / (b->time - a->time);
    CHECK(slope == doctest::Approx(std::sqrt(2.0)).epsilon(0.10));
}

TEST_CASE("metrics are invariant under gamma") {
    const auto a = LatticeParams::symmetric(0.3, 1.0, 0.0, 0.5);
    const auto b = LatticeParams::symmetric(0.3, 1.0, 2.0, 0.5);
    const auto ta = run(build_chain(a, SiteField::clean(121), 121), InitialCondition::single_site(0), 10, 50, 0.01);
    const auto tb = run(build_chain(b, SiteField::clean(121), 121), InitialCondition::single_site(0), 10, 50, 0.01);
    const auto ma = spread_metrics(ta), mb = spread_metrics(tb);
    for (std::size_t k = 0; k < ma.size(); ++k) {
        CHECK(ma[k].sigma == doctest::Approx(mb[k].sigma).epsilon(1e-10));
        CHECK(ma[k].mean == doctest::Approx(mb[k].mean).epsilon(1e-10));
    }
}

TEST_CASE("pulse counting") {
    const std::vector<double> t{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<double> y{0, 1, 0, 0, 0.5, 0, 0.05, 0.2, 0.1, 0};
    CHECK(count_pulses(t, y, 0.1, 1.5) == 3);
    CHECK(count_pulses(t, y, 0.3, 1.5) == 2);
    CHECK(count_pulses(t, y, 0.1, 5.0) == 2);
    CHECK(count_pulses({}, {}, 0.1, 1.0) == 0);
    const std::vector<double> flat(10, 0.0);
    CHECK(count_pulses(t, flat, 0.1, 1.0) == 0);
}

TEST_CASE("free propagation: transmitted, no reflection, one pulse") {
    const auto p = LatticeParams::symmetric(0.3, 1.0, 0.6, pi / 4);
    const Scatter s = scatter_run(p, -pi / 2, -20, 0, "clean");
    CHECK(s.report.rightward);
    CHECK(s.report.transmitted == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.report.reflected < 1e-6);
    CHECK(s.report.echoes == 1);
    CHECK(s.report.complete);
    CHECK(s.report.transmitted + s.report.reflected + s.report.resident <= 1.0 + 1e-9);
    CHECK(s.report.probe_site == 40);
}

TEST_CASE("hermitian defect pair: echoes and reflection") {
    const auto p = LatticeParams::symmetric(0.0, 1.0, 0.0, pi / 4);
    const Scatter s = scatter_run(p, -pi / 2, -20, 0, "defects");
    CHECK(s.report.echoes >= 2);
    CHECK(s.report.reflected > 0.05);
    CHECK(s.report.transmitted + s.report.reflected + s.report.resident <= 1.0 + 1e-9);
}

TEST_CASE("non-hermitian defect pair: single transmitted pulse in both directions") {
    const auto p = LatticeParams::symmetric(0.3, 1.0, 0.6, pi / 4);
    for (double q0 : {-pi / 2, pi / 2}) {
        const Scatter s = scatter_run(p, q0, -20, 0, "defects");
        CHECK(s.report.rightward == (q0 < 0));
        CHECK(s.report.echoes == 1);
        CHECK(s.report.reflected < 0.01);
    }
}

TEST_CASE("mirror symmetry swaps left and right") {
    // phi -> -phi together with n -> -n maps a rightward run onto a leftward one.
    const auto a = LatticeParams::symmetric(0.3, 1.0, 0.6, pi / 4);
    const auto b = LatticeParams::symmetric(0.3, 1.0, 0.6, -pi / 4);
    const Scatter ra = scatter_run(a, -pi / 2, -10, 10, "defects");
    const Scatter rb = scatter_run(b, pi / 2, -10, 10, "defects");
    CHECK(ra.report.rightward != rb.report.rightward);
    CHECK(ra.report.transmitted == doctest::Approx(rb.report.transmitted).epsilon(1e-8));
    CHECK(std::abs(ra.report.reflected - rb.report.reflected) < 1e-8);
    CHECK(ra.report.echoes == rb.report.echoes);
}

TEST_CASE("scatter report contracts") {
    const auto p = LatticeParams::symmetric(0.3, 1.0, 0.6, pi / 4);
    const auto op = build_chain(p, SiteField::clean(101), 101);
    const Trajectory single = run(op, InitialCondition::single_site(0), 1.0, 10);
    ScatterOptions so;
    so.speed = 1.0;
    CHECK_THROWS_AS(scatter_report(single, -5, 5, so), ContractError);
    const Trajectory inside = run(op, InitialCondition::gaussian(0, 3, pi / 2), 1.0, 10);
    CHECK_THROWS_AS(scatter_report(inside, -5, 5, so), ContractError);
    const Trajectory left = run(op, InitialCondition::gaussian(-20, 3, -pi / 2), 1.0, 10);
    CHECK_THROWS_AS(scatter_report(left, -5, 5, ScatterOptions{}), ConfigError);
    so.w0 = 20;  // probe at 5 + 80, outside
    CHECK_THROWS_AS(scatter_report(left, -5, 5, so), ConfigError);
    // t_final too short: the pulse has not yet reached the probe
    so.w0 = 3;
    const auto r = scatter_report(left, -5, 5, so);
    CHECK_FALSE(r.complete);
}
