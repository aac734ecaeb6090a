#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nht/model.hpp"
#include "nht/spectrum.hpp"
#include "support.hpp"

using namespace nht;
using testing::max_diff;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

std::vector<cplx> times(const auto& op, const std::vector<cplx>& x) {
    std::vector<cplx> y(x.size());
    op.apply(x, y);
    return y;
}

std::vector<cplx> generator(const auto& op, const std::vector<cplx>& x) {
    std::vector<cplx> y(x.size());
    op.apply_generator(x, y);
    return y;
}

// Right-hand side of the zigzag amplitude equations, written out term by term.
std::vector<cplx> zigzag_rhs(const LatticeParams& p, const std::vector<double>& va,
                             const std::vector<double>& vb, const std::vector<cplx>& s) {
    const std::size_t cells = va.size();
    auto a = [&](long n) { return n < 0 || n >= long(cells) ? cplx{} : s[2 * n]; };
    auto b = [&](long n) { return n < 0 || n >= long(cells) ? cplx{} : s[2 * n + 1]; };
    std::vector<cplx> h(s.size());
    for (long n = 0; n < long(cells); ++n) {
        h[2 * n] = (-I * p.gamma + va[n]) * a(n) - I * p.kappa * (a(n + 1) + a(n - 1)) +
                   p.rho * (std::exp(I * p.phi) * b(n) + std::exp(I * p.phi_prime) * b(n - 1));
        h[2 * n + 1] = (-I * p.gamma + vb[n]) * b(n) - I * p.kappa * (b(n + 1) + b(n - 1)) +
                       p.rho * (std::exp(-I * p.phi) * a(n) + std::exp(-I * p.phi_prime) * a(n + 1));
    }
    return h;
}

}  // namespace

TEST_CASE("lattice parameters") {
    LatticeParams p{0.3, 1.0, 0.6, pi / 4, -pi / 4};
    CHECK(p.delta_phi() == doctest::Approx(pi / 4));
    CHECK(p.dissipative());
    p.gamma = 0.5;
    CHECK_FALSE(p.dissipative());
    CHECK_NOTHROW(p.validate());
    p.kappa = -0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.kappa = 0.3;
    p.rho = std::nan("");
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("auxiliary parameters must be lossy") {
    CHECK_NOTHROW(AuxiliaryParams{0.0, 1.0, {0.0, -1.0}}.validate());
    CHECK_THROWS_AS((AuxiliaryParams{0.0, 1.0, {1.0, 0.0}}.validate()), ConfigError);
    CHECK_THROWS_AS((AuxiliaryParams{0.0, 1.0, {0.0, 2.0}}.validate()), ConfigError);
    CHECK(AuxiliaryParams{0.0, 0.5, {0.0, -15.0}}.elimination_ratio() == doctest::Approx(30.0));
}

TEST_CASE("site fields") {
    const SiteField d = SiteField::defect_pair(10, 1.0, 7, 3);
    CHECK(d.n1 == 3);
    CHECK(d.n2 == 7);
    for (std::size_t i = 0; i < 10; ++i) CHECK(d.values[i] == (i == 3 || i == 7 ? 1.0 : 0.0));
    CHECK_THROWS_AS(SiteField::defect_pair(10, 1.0, 3, 3), ConfigError);
    CHECK_THROWS_AS(SiteField::defect_pair(10, 1.0, 3, 10), ConfigError);

    const SiteField c = SiteField::custom({1, 2, 3, 4, 5, 6});
    const auto [va, vb] = split_sublattices(c);
    CHECK(va.values == std::vector<double>{1, 3, 5});
    CHECK(vb.values == std::vector<double>{2, 4, 6});
    CHECK(interleave(va, vb).values == c.values);
    CHECK_THROWS_AS(split_sublattices(SiteField::custom({1, 2, 3})), ConfigError);
}

TEST_CASE("zigzag operator: diagonal-only case") {
    const LatticeParams p{0.0, 0.0, 1.0, 0.0, 0.0};
    const auto op = build_zigzag(p, SiteField::clean(2), SiteField::clean(2), 2);
    std::mt19937_64 rng(1);
    const auto x = testing::random_state(4, rng);
    const auto g = generator(op, x);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(g[i] + x[i]) < 1e-15);
}

TEST_CASE("zigzag operator: imaginary hopping acts as real coupling of the generator") {
    const LatticeParams p{0.3, 0.0, 0.0, 0.0, 0.0};
    const auto op = build_zigzag(p, SiteField::clean(3), SiteField::clean(3), 3);
    std::vector<cplx> x(6);
    x[0] = 1.0;  // a_0
    const auto g = generator(op, x);
    // d a_1 / dt = -i (-i kappa) a_0 = -kappa a_0
    CHECK(std::abs(g[2] - cplx{-0.3, 0.0}) < 1e-15);
    CHECK(std::abs(g[1]) == 0.0);
    CHECK(std::abs(g[4]) == 0.0);
}

TEST_CASE("zigzag operator matches the written-out amplitude equations") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    const std::size_t cells = 9;
    for (int trial = 0; trial < 5; ++trial) {
        const LatticeParams p{0.5 * (u(rng) + 1), u(rng) + 1.5, u(rng), 3 * u(rng), 3 * u(rng)};
        std::vector<double> va(cells), vb(cells);
        for (auto& v : va) v = u(rng);
        for (auto& v : vb) v = u(rng);
        const auto op = build_zigzag(p, SiteField::custom(va), SiteField::custom(vb), cells);
        const auto x = testing::random_state(2 * cells, rng);
        CHECK(max_diff(times(op, x), zigzag_rhs(p, va, vb, x)) < 1e-13);
    }
}

TEST_CASE("zigzag and chain operators coincide for phi' = -phi") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    const std::size_t cells = 16;
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = LatticeParams::symmetric(0.5 * (u(rng) + 1), u(rng) + 1.5, u(rng), 3 * u(rng));
        std::vector<double> w(2 * cells);
        for (auto& v : w) v = u(rng);
        const SiteField field = SiteField::custom(w);
        const auto [va, vb] = split_sublattices(field);
        const auto zz = build_zigzag(p, va, vb, cells);
        const auto ch = build_chain(p, field, 2 * cells);
        const auto x = testing::random_state(2 * cells, rng);
        CHECK(max_diff(generator(zz, x), generator(ch, x)) < 1e-12);
    }
}

TEST_CASE("chain operator entries") {
    const LatticeParams p{0.3, 1.0, 0.6, 0.0, 0.0};
    const auto op = build_chain(p, SiteField::clean(8), 8);
    for (const cplx& d : op.diag()) CHECK(d == cplx{});
    CHECK(op.uniform() == cplx{0.0, -0.6});
    CHECK(std::abs(op.to_dense()(3, 3) - cplx{0.0, -0.6}) < 1e-15);
    CHECK(std::abs(op.nnn() - cplx{0.0, -0.3}) < 1e-15);
    CHECK(std::abs(op.nn_fwd() - 1.0) < 1e-15);

    const auto herm = build_chain(LatticeParams{0.0, 1.0, 0.0, 0.0, 0.0}, SiteField::clean(8), 8);
    const Eigen::MatrixXcd m = herm.to_dense();
    CHECK((m - m.adjoint()).norm() < 1e-15);
    CHECK(std::abs(m(3, 4) - 1.0) < 1e-15);
    CHECK(std::abs(m(3, 5)) == 0.0);

    CHECK_THROWS_AS(build_chain(p, SiteField::clean(2), 2), ConfigError);
    CHECK_THROWS_AS(build_chain(p, SiteField::clean(7), 8), ConfigError);
    CHECK_THROWS_AS(build_zigzag(p, SiteField::clean(1), SiteField::clean(1), 1), ConfigError);
    CHECK_THROWS_AS(build_zigzag(p, SiteField::clean(4), SiteField::clean(3), 4), ConfigError);
}

TEST_CASE("chain operator is banded with bandwidth 5") {
    const LatticeParams p{0.3, 1.0, 0.6, 0.4, -0.4};
    const std::size_t n = 12;
    const auto op = build_chain(p, SiteField::clean(n), n);
    for (std::size_t site = 0; site < n; ++site) {
        std::vector<cplx> e(n);
        e[site] = 1.0;
        const auto y = times(op, e);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t dist = i > site ? i - site : site - i;
            if (dist > 2) CHECK(y[i] == cplx{});
        }
    }
}

TEST_CASE("hermitian limit: <x, H y> = <H x, y>") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> w(40);
    for (auto& v : w) v = u(rng);
    const auto op = build_chain(LatticeParams{0.0, 1.3, 0.0, 0.7, -0.2}, SiteField::custom(w), 40);
    for (int k = 0; k < 5; ++k) {
        const auto x = testing::random_state(40, rng);
        const auto y = testing::random_state(40, rng);
        CHECK(std::abs(testing::dot(x, times(op, y)) - testing::dot(times(op, x), y)) < 1e-12);
    }
}

TEST_CASE("fused application equals base + scale * H x") {
    std::mt19937_64 rng(5);
    const LatticeParams p{0.3, 1.0, 0.6, 0.4, -0.9};
    const auto chain = build_chain(p, SiteField::clean(20), 20);
    const auto zz = build_zigzag(p, SiteField::clean(10), SiteField::clean(10), 10);
    const auto x = testing::random_state(20, rng);
    const auto base = testing::random_state(20, rng);
    const cplx s{0.1, -0.7};
    auto check = [&](const auto& op) {
        std::vector<cplx> out(20);
        op.apply_fused(s, x, base, out);
        const auto hx = times(op, x);
        for (std::size_t i = 0; i < 20; ++i) CHECK(std::abs(out[i] - (base[i] + s * hx[i])) < 1e-14);
    };
    check(chain);
    check(zz);
}

TEST_CASE("sparse operator accumulates duplicate entries") {
    const SparseOperator op(3, {{0, 1, 1.0}, {0, 1, 2.0}, {2, 0, {0, 1}}, {1, 1, 0.5}});
    const Eigen::MatrixXcd m = op.to_dense();
    CHECK(m(0, 1) == cplx{3.0, 0.0});
    CHECK(m(2, 0) == cplx{0.0, 1.0});
    CHECK(m(1, 1) == cplx{0.5, 0.0});
    CHECK(op.spectral_bound() == doctest::Approx(3.0));
}

TEST_CASE("spectral bound dominates the spectrum") {
    const LatticeParams p{0.3, 1.0, 0.6, 0.9, -0.9};
    const auto op = build_chain(p, SiteField::custom(std::vector<double>(30, 0.8)), 30);
    for (const cplx& e : finite_spectrum(op)) CHECK(std::abs(e) <= op.spectral_bound());
}

TEST_CASE("tune_auxiliary_energy") {
    // (eps = 0, kappa = 0.3, sigma = 1) -> U = -(10/3) i
    const cplx u = tune_auxiliary_energy(0.0, 0.3, 1.0);
    CHECK(std::abs(u - cplx{0.0, -10.0 / 3.0}) < 1e-14);
    CHECK(std::abs(0.0 - 1.0 / u - cplx{0.0, -0.3}) < 1e-15);

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> r(0.01, 2.0);
    for (int k = 0; k < 100; ++k) {
        const double eps = r(rng) - 1.0, kappa = r(rng), sigma = r(rng);
        const cplx tuned = tune_auxiliary_energy(eps, kappa, sigma);
        const EffectiveParams e = effective_params({eps, sigma, tuned});
        CHECK(std::abs(e.kappa_eff - cplx{0.0, -kappa}) < 1e-14);
        // delta = -2 eps - 2 i kappa on the tuned curve
        CHECK(std::abs(e.delta - cplx{-2 * eps, -2 * kappa}) < 1e-13);
    }
    CHECK_THROWS_AS(tune_auxiliary_energy(0.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(tune_auxiliary_energy(0.1, 0.3, 0.0), DomainError);
}

TEST_CASE("effective_params") {
    // 0.1 - 0.25 / (-2i) = 0.1 - 0.125 i,  -2 * 0.25 / (-2i) = -0.25 i
    const EffectiveParams e = effective_params({0.1, 0.5, {0.0, -2.0}});
    CHECK(std::abs(e.kappa_eff - cplx{0.1, -0.125}) < 1e-15);
    CHECK(std::abs(e.delta - cplx{0.0, -0.25}) < 1e-15);
    CHECK(std::abs(e.delta - 2.0 * (e.kappa_eff - 0.1)) < 1e-15);
    CHECK(e.residual_bound == doctest::Approx(0.25));
    CHECK_THROWS_AS(effective_params({0.1, 0.5, {0.0, 0.0}}), DomainError);
}

TEST_CASE("auxiliary operator: coupling rows") {
    const LatticeParams p{0.0, 0.0, 0.0, 0.0, 0.0};
    const AuxiliaryParams aux{0.0, 0.7, {0.0, -5.0}};
    const std::size_t cells = 4;
    const auto op = build_auxiliary(p, aux, SiteField::clean(cells), SiteField::clean(cells), cells);
    CHECK(op.size() == auxiliary_size(cells));
    // i dA_m/dt = U A_m + sigma (a_m + a_{m-1}), with A_m at 4m+2 for m < cells.
    const std::size_t m = 2;
    std::vector<cplx> x(op.size());
    x[4 * m] = 1.0;        // a_m
    x[4 * (m - 1)] = 2.0;  // a_{m-1}
    x[4 * m + 2] = 0.5;    // A_m
    const auto g = generator(op, x);
    CHECK(std::abs(g[4 * m + 2] - (-I) * (aux.u_site * 0.5 + 0.7 * 3.0)) < 1e-14);
    CHECK_THROWS_AS(build_auxiliary(p, AuxiliaryParams{0.0, 0.7, {0.0, 1.0}}, SiteField::clean(cells),
                                    SiteField::clean(cells), cells),
                    ConfigError);
}

TEST_CASE("auxiliary operator with sigma = 0 reduces to a zigzag with hopping epsilon") {
    std::mt19937_64 rng(7);
    const LatticeParams p{0.0, 1.0, 0.3, 0.5, -0.1};
    const AuxiliaryParams aux{0.4, 0.0, {0.0, -3.0}};
    const std::size_t cells = 6;
    std::vector<double> va(cells, 0.1), vb(cells, -0.2);
    const auto full = build_auxiliary(p, aux, SiteField::custom(va), SiteField::custom(vb), cells);
    // A zigzag whose imaginary hopping is replaced by the real epsilon.
    const auto zz = build_zigzag(p, SiteField::custom(va), SiteField::custom(vb), cells);
    const auto main = testing::random_state(2 * cells, rng);
    std::vector<cplx> expect = times(zz, main);
    for (std::size_t i = 0; i < 2 * cells; ++i) {
        if (i + 2 < 2 * cells) expect[i] += 0.4 * main[i + 2];
        if (i >= 2) expect[i] += 0.4 * main[i - 2];
    }
    const auto got = extract_main(times(full, embed_in_auxiliary(main)));
    CHECK(max_diff(got, expect) < 1e-14);
}

TEST_CASE("embedding and extraction are inverse") {
    std::mt19937_64 rng(8);
    const auto main = testing::random_state(10, rng);
    const auto aux = embed_in_auxiliary(main);
    CHECK(aux.size() == auxiliary_size(5));
    CHECK(max_diff(extract_main(aux), main) == 0.0);
    CHECK(aux[auxiliary_main_index(3)] == main[3]);
    CHECK(aux[2] == cplx{});
}

TEST_CASE("effective operator on the tuned curve is the zigzag lattice up to a uniform shift") {
    std::mt19937_64 rng(9);
    const auto p = LatticeParams::symmetric(0.3, 1.0, 0.6, pi / 4);
    const double eps = 0.2, sigma = 2.0;
    const AuxiliaryParams aux{eps, sigma, tune_auxiliary_energy(eps, p.kappa, sigma)};
    const std::size_t cells = 7;
    const auto eff = build_effective(p, aux, SiteField::clean(cells), SiteField::clean(cells), cells);
    const auto zz = build_zigzag(p, SiteField::clean(cells), SiteField::clean(cells), cells);
    const auto x = testing::random_state(2 * cells, rng);
    auto expect = times(zz, x);
    const cplx delta{-2 * eps, -2 * p.kappa};
    for (std::size_t i = 0; i < x.size(); ++i) expect[i] += delta * x[i];
    CHECK(max_diff(times(eff, x), expect) < 1e-13);
}

TEST_CASE("gauge_shift") {
    const LatticeParams p = LatticeParams::symmetric(0.3, 1.0, 0.6, pi / 4);
    const LatticeParams s = gauge_shift(p, pi / 4);
    CHECK(s.phi == doctest::Approx(pi / 2));
    CHECK(s.phi_prime == doctest::Approx(0.0));
    CHECK(s.delta_phi() == doctest::Approx(pi / 4));
    const LatticeParams id = gauge_shift(p, 0.0);
    CHECK(id.phi == p.phi);
    CHECK(id.phi_prime == p.phi_prime);
}
