#include "nht/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nht {

namespace {

constexpr cplx I{0.0, 1.0};

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw ConfigError(std::string("parameter '") + name + "' must be finite");
    }
}

void require_field_size(const SiteField& f, std::size_t expected, const char* what) {
    if (f.size() != expected) {
        throw ConfigError(std::string(what) + ": field has " + std::to_string(f.size()) +
                          " sites, expected " + std::to_string(expected));
    }
}

}  // namespace

void LatticeParams::validate() const {
    require_finite(kappa, "kappa");
    require_finite(rho, "rho");
    require_finite(gamma, "gamma");
    require_finite(phi, "phi");
    require_finite(phi_prime, "phi_prime");
    if (kappa < 0.0) throw ConfigError("kappa must be >= 0 (signs live in the phases)");
    if (rho < 0.0) throw ConfigError("rho must be >= 0 (signs live in the phases)");
}

double AuxiliaryParams::elimination_ratio() const {
    if (sigma == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(u_site) / sigma;
}

void AuxiliaryParams::validate() const {
    require_finite(epsilon, "epsilon");
    require_finite(sigma, "sigma");
    if (!std::isfinite(u_site.real()) || !std::isfinite(u_site.imag())) {
        throw ConfigError("parameter 'u_site' must be finite");
    }
    if (sigma < 0.0) throw ConfigError("sigma must be >= 0");
    if (u_site.imag() >= 0.0) {
        throw ConfigError("auxiliary sites must be lossy: Im(u_site) < 0");
    }
}

const char* to_string(FieldKind kind) noexcept {
    switch (kind) {
        case FieldKind::clean: return "clean";
        case FieldKind::uniform_disorder: return "uniform";
        case FieldKind::defect_pair: return "defect_pair";
        case FieldKind::custom: return "custom";
    }
    return "unknown";
}

double SiteField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

SiteField SiteField::clean(std::size_t size) {
    SiteField f;
    f.values.assign(size, 0.0);
    return f;
}

SiteField SiteField::defect_pair(std::size_t size, double v0, std::size_t n1, std::size_t n2) {
    if (n1 >= size || n2 >= size) throw ConfigError("defect site outside the lattice");
    if (n1 == n2) throw ConfigError("defect sites must be distinct");
    SiteField f;
    f.values.assign(size, 0.0);
    f.values[n1] = v0;
    f.values[n2] = v0;
    f.kind = FieldKind::defect_pair;
    f.v0 = v0;
    f.n1 = std::min(n1, n2);
    f.n2 = std::max(n1, n2);
    return f;
}

SiteField SiteField::custom(std::vector<double> values) {
    SiteField f;
    f.values = std::move(values);
    f.kind = FieldKind::custom;
    return f;
}

std::pair<SiteField, SiteField> split_sublattices(const SiteField& chain_field) {
    if (chain_field.size() % 2 != 0) {
        throw ConfigError("sublattice split needs an even number of chain sites");
    }
    const std::size_t cells = chain_field.size() / 2;
    std::vector<double> a(cells), b(cells);
    for (std::size_t n = 0; n < cells; ++n) {
        a[n] = chain_field.values[2 * n];
        b[n] = chain_field.values[2 * n + 1];
    }
    return {SiteField::custom(std::move(a)), SiteField::custom(std::move(b))};
}

SiteField interleave(const SiteField& va, const SiteField& vb) {
    require_field_size(vb, va.size(), "interleave");
    std::vector<double> c(2 * va.size());
    for (std::size_t n = 0; n < va.size(); ++n) {
        c[2 * n] = va.values[n];
        c[2 * n + 1] = vb.values[n];
    }
    return SiteField::custom(std::move(c));
}

// ---------------------------------------------------------------------------
// ChainOperator

ChainOperator::ChainOperator(std::vector<cplx> diag, cplx nn_fwd, cplx nn_bwd, cplx nnn, cplx uniform)
    : diag_(std::move(diag)), nn_fwd_(nn_fwd), nn_bwd_(nn_bwd), nnn_(nnn), uniform_(uniform) {
    if (diag_.empty()) throw ConfigError("chain operator needs at least one site");
}

namespace {

// (H x)_n with bounds checks, used on the two sites next to each edge.
inline cplx chain_row(const ChainOperator& op, std::span<const cplx> x, std::size_t n) {
    const std::size_t size = x.size();
    cplx h = op.diag()[n] * x[n];
    if (n + 1 < size) h += op.nn_fwd() * x[n + 1];
    if (n >= 1) h += op.nn_bwd() * x[n - 1];
    if (n + 2 < size) h += op.nnn() * x[n + 2];
    if (n >= 2) h += op.nnn() * x[n - 2];
    return h;
}

template <class Store>
inline void chain_sweep(const ChainOperator& op, std::span<const cplx> x, Store&& store) {
    const std::size_t size = op.size();
    if (x.size() != size) throw ConfigError("state size does not match operator size");
    const cplx* d = op.diag().data();
    const cplx* xp = x.data();
    const cplx f = op.nn_fwd();
    const cplx b = op.nn_bwd();
    const cplx g = op.nnn();
    if (size < 5) {
        for (std::size_t n = 0; n < size; ++n) store(n, chain_row(op, x, n));
        return;
    }
    store(0, chain_row(op, x, 0));
    store(1, chain_row(op, x, 1));
    for (std::size_t n = 2; n + 2 < size; ++n) {
        const cplx h = d[n] * xp[n] + f * xp[n + 1] + b * xp[n - 1] + g * (xp[n + 2] + xp[n - 2]);
        store(n, h);
    }
    store(size - 2, chain_row(op, x, size - 2));
    store(size - 1, chain_row(op, x, size - 1));
}

}  // namespace

void ChainOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
    chain_sweep(*this, x, [&](std::size_t n, cplx h) { y[n] = h + uniform_ * x[n]; });
}

void ChainOperator::apply_generator(std::span<const cplx> x, std::span<cplx> y) const {
    chain_sweep(*this, x, [&](std::size_t n, cplx h) { y[n] = -I * (h + uniform_ * x[n]); });
}

void ChainOperator::apply_fused(cplx scale, std::span<const cplx> x, std::span<const cplx> base,
                                std::span<cplx> out) const {
    chain_sweep(*this, x, [&](std::size_t n, cplx h) { out[n] = base[n] + scale * (h + uniform_ * x[n]); });
}

void ChainOperator::apply_fused_core(cplx scale, std::span<const cplx> x, std::span<const cplx> base,
                                     std::span<cplx> out) const {
    chain_sweep(*this, x, [&](std::size_t n, cplx h) { out[n] = base[n] + scale * h; });
}

double ChainOperator::spectral_bound() const noexcept {
    // diag = -i gamma + U_n, so |Im| = gamma and |Re| = |U_n|.
    double gamma = 0.0;
    double umax = 0.0;
    for (const cplx& c : diag_) {
        const cplx d = c + uniform_;
        gamma = std::max(gamma, std::abs(d.imag()));
        umax = std::max(umax, std::abs(d.real()));
    }
    return gamma + 2.0 * std::abs(nnn_) + std::max(std::abs(nn_fwd_), std::abs(nn_bwd_)) * 2.0 +
           umax;
}

Eigen::MatrixXcd ChainOperator::to_dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        h(i, i) = diag_[static_cast<std::size_t>(i)] + uniform_;
        if (i + 1 < n) h(i, i + 1) = nn_fwd_;
        if (i >= 1) h(i, i - 1) = nn_bwd_;
        if (i + 2 < n) h(i, i + 2) = nnn_;
        if (i >= 2) h(i, i - 2) = nnn_;
    }
    return h;
}

// ---------------------------------------------------------------------------
// SparseOperator

SparseOperator::SparseOperator(std::size_t size, std::vector<Entry> entries, cplx uniform)
    : size_(size), uniform_(uniform) {
    if (size == 0) throw ConfigError("sparse operator needs at least one site");
    std::sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) {
        return l.row != r.row ? l.row < r.row : l.col < r.col;
    });
    row_start_.assign(size + 1, 0);
    const Entry* prev = nullptr;
    for (const Entry& e : entries) {
        if (e.row >= size || e.col >= size) throw ConfigError("sparse entry out of range");
        if (prev != nullptr && prev->row == e.row && prev->col == e.col) {
            values_.back() += e.value;
        } else {
            cols_.push_back(e.col);
            values_.push_back(e.value);
            ++row_start_[e.row + 1];
        }
        prev = &e;
    }
    for (std::size_t r = 0; r < size; ++r) row_start_[r + 1] += row_start_[r];
}

void SparseOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
    if (x.size() != size_ || y.size() != size_) throw ConfigError("state size mismatch");
    for (std::size_t r = 0; r < size_; ++r) {
        cplx h{};
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) h += values_[k] * x[cols_[k]];
        y[r] = h + uniform_ * x[r];
    }
}

void SparseOperator::apply_generator(std::span<const cplx> x, std::span<cplx> y) const {
    apply(x, y);
    for (cplx& v : y) v *= -I;
}

void SparseOperator::apply_fused(cplx scale, std::span<const cplx> x, std::span<const cplx> base,
                                 std::span<cplx> out) const {
    if (x.size() != size_ || out.size() != size_ || base.size() != size_) {
        throw ConfigError("state size mismatch");
    }
    for (std::size_t r = 0; r < size_; ++r) {
        cplx h = uniform_ * x[r];
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) h += values_[k] * x[cols_[k]];
        out[r] = base[r] + scale * h;
    }
}

void SparseOperator::apply_fused_core(cplx scale, std::span<const cplx> x, std::span<const cplx> base,
                                      std::span<cplx> out) const {
    if (x.size() != size_ || out.size() != size_ || base.size() != size_) {
        throw ConfigError("state size mismatch");
    }
    for (std::size_t r = 0; r < size_; ++r) {
        cplx h{};
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) h += values_[k] * x[cols_[k]];
        out[r] = base[r] + scale * h;
    }
}

double SparseOperator::spectral_bound() const noexcept {
    double bound = 0.0;
    for (std::size_t r = 0; r < size_; ++r) {
        double s = 0.0;
        bool has_diag = false;
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
            if (cols_[k] == r) {
                has_diag = true;
                s += std::abs(values_[k] + uniform_);
            } else {
                s += std::abs(values_[k]);
            }
        }
        if (!has_diag) s += std::abs(uniform_);
        bound = std::max(bound, s);
    }
    return bound;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
    const auto n = static_cast<Eigen::Index>(size_);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t r = 0; r < size_; ++r) {
        h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = uniform_;
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
            h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[k])) += values_[k];
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

// Zigzag entries with a general intra-sublattice hopping and a uniform on-site shift.
SparseOperator zigzag_with(const LatticeParams& params, const SiteField& va, const SiteField& vb,
                           std::size_t cells, cplx intra, cplx shift, const char* what) {
    if (cells < 2) throw ConfigError(std::string(what) + ": needs at least 2 cells");
    require_field_size(va, cells, what);
    require_field_size(vb, cells, what);

    const cplx loss = cplx{0.0, -params.gamma} + shift;
    const cplx ab = params.rho * std::exp(I * params.phi);             // a_n <- b_n
    const cplx ab_prev = params.rho * std::exp(I * params.phi_prime);  // a_n <- b_{n-1}

    auto ia = [](std::size_t n) { return 2 * n; };
    auto ib = [](std::size_t n) { return 2 * n + 1; };

    std::vector<SparseOperator::Entry> e;
    e.reserve(10 * cells);
    for (std::size_t n = 0; n < cells; ++n) {
        e.push_back({ia(n), ia(n), va.values[n]});
        e.push_back({ib(n), ib(n), vb.values[n]});
        if (n + 1 < cells) {
            e.push_back({ia(n), ia(n + 1), intra});
            e.push_back({ib(n), ib(n + 1), intra});
            e.push_back({ib(n), ia(n + 1), std::conj(ab_prev)});
        }
        if (n >= 1) {
            e.push_back({ia(n), ia(n - 1), intra});
            e.push_back({ib(n), ib(n - 1), intra});
            e.push_back({ia(n), ib(n - 1), ab_prev});
        }
        e.push_back({ia(n), ib(n), ab});
        e.push_back({ib(n), ia(n), std::conj(ab)});
    }
    return SparseOperator(2 * cells, std::move(e), loss);
}

}  // namespace

SparseOperator build_zigzag(const LatticeParams& params, const SiteField& va,
                            const SiteField& vb, std::size_t cells) {
    params.validate();
    return zigzag_with(params, va, vb, cells, cplx{0.0, -params.kappa}, cplx{}, "build_zigzag");
}

SparseOperator build_effective(const LatticeParams& params, const AuxiliaryParams& aux,
                               const SiteField& va, const SiteField& vb, std::size_t cells) {
    params.validate();
    aux.validate();
    const EffectiveParams eff = effective_params(aux);
    return zigzag_with(params, va, vb, cells, eff.kappa_eff, eff.delta, "build_effective");
}

ChainOperator build_chain(const LatticeParams& params, const SiteField& u, std::size_t size) {
    params.validate();
    if (size < 3) throw ConfigError("chain needs at least 3 sites");
    require_field_size(u, size, "build_chain");
    const double dphi = params.delta_phi();
    std::vector<cplx> diag(size);
    for (std::size_t n = 0; n < size; ++n) diag[n] = u.values[n];
    return ChainOperator(std::move(diag), params.rho * std::exp(I * dphi),
                         params.rho * std::exp(-I * dphi), cplx{0.0, -params.kappa},
                         cplx{0.0, -params.gamma});
}

SparseOperator build_auxiliary(const LatticeParams& params, const AuxiliaryParams& aux,
                               const SiteField& va, const SiteField& vb, std::size_t cells) {
    params.validate();
    aux.validate();
    if (cells < 2) throw ConfigError("auxiliary lattice needs at least 2 cells");
    require_field_size(va, cells, "build_auxiliary (A sublattice)");
    require_field_size(vb, cells, "build_auxiliary (B sublattice)");

    const cplx loss{0.0, -params.gamma};
    const cplx ab = params.rho * std::exp(I * params.phi);
    const cplx ab_prev = params.rho * std::exp(I * params.phi_prime);
    const double eps = aux.epsilon;
    const double sig = aux.sigma;

    auto ia = [](std::size_t n) { return 4 * n; };
    auto ib = [](std::size_t n) { return 4 * n + 1; };
    // Auxiliary sites A_m, B_m for m = 0..cells; A_m sits between a_{m-1} and a_m.
    auto iA = [cells](std::size_t m) { return m < cells ? 4 * m + 2 : 4 * cells; };
    auto iB = [cells](std::size_t m) { return m < cells ? 4 * m + 3 : 4 * cells + 1; };

    std::vector<SparseOperator::Entry> e;
    e.reserve(20 * cells);
    for (std::size_t n = 0; n < cells; ++n) {
        e.push_back({ia(n), ia(n), loss + va.values[n]});
        e.push_back({ib(n), ib(n), loss + vb.values[n]});
        if (n + 1 < cells) {
            e.push_back({ia(n), ia(n + 1), eps});
            e.push_back({ib(n), ib(n + 1), eps});
            e.push_back({ib(n), ia(n + 1), std::conj(ab_prev)});
        }
        if (n >= 1) {
            e.push_back({ia(n), ia(n - 1), eps});
            e.push_back({ib(n), ib(n - 1), eps});
            e.push_back({ia(n), ib(n - 1), ab_prev});
        }
        e.push_back({ia(n), ib(n), ab});
        e.push_back({ib(n), ia(n), std::conj(ab)});
        // i da_n/dt += sigma (A_n + A_{n+1})
        e.push_back({ia(n), iA(n), sig});
        e.push_back({ia(n), iA(n + 1), sig});
        e.push_back({ib(n), iB(n), sig});
        e.push_back({ib(n), iB(n + 1), sig});
    }
    for (std::size_t m = 0; m <= cells; ++m) {
        e.push_back({iA(m), iA(m), aux.u_site});
        e.push_back({iB(m), iB(m), aux.u_site});
        // i dA_m/dt = U A_m + sigma (a_m + a_{m-1})
        if (m < cells) {
            e.push_back({iA(m), ia(m), sig});
            e.push_back({iB(m), ib(m), sig});
        }
        if (m >= 1) {
            e.push_back({iA(m), ia(m - 1), sig});
            e.push_back({iB(m), ib(m - 1), sig});
        }
    }
    return SparseOperator(auxiliary_size(cells), std::move(e));
}

std::vector<cplx> embed_in_auxiliary(std::span<const cplx> main_state) {
    if (main_state.size() % 2 != 0) throw ConfigError("main-lattice state must have 2*cells sites");
    const std::size_t cells = main_state.size() / 2;
    std::vector<cplx> out(auxiliary_size(cells), cplx{});
    for (std::size_t i = 0; i < main_state.size(); ++i) out[auxiliary_main_index(i)] = main_state[i];
    return out;
}

std::vector<cplx> extract_main(std::span<const cplx> auxiliary_state) {
    if (auxiliary_state.size() < 6 || (auxiliary_state.size() - 2) % 4 != 0) {
        throw ConfigError("not an auxiliary-model state");
    }
    const std::size_t cells = (auxiliary_state.size() - 2) / 4;
    std::vector<cplx> out(2 * cells);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = auxiliary_state[auxiliary_main_index(i)];
    return out;
}

cplx tune_auxiliary_energy(double epsilon, double kappa, double sigma) {
    if (epsilon == 0.0 && kappa == 0.0) {
        throw DomainError("tune_auxiliary_energy: epsilon = kappa = 0 (division by zero)");
    }
    if (!(sigma > 0.0)) throw DomainError("tune_auxiliary_energy: sigma must be > 0");
    const double s2 = sigma * sigma;
    return s2 * cplx{epsilon, -kappa} / (epsilon * epsilon + kappa * kappa);
}

EffectiveParams effective_params(const AuxiliaryParams& aux) {
    if (aux.u_site == cplx{}) throw DomainError("effective_params: u_site = 0 (division by zero)");
    const double s2 = aux.sigma * aux.sigma;
    const cplx ratio = s2 / aux.u_site;
    return EffectiveParams{aux.epsilon - ratio, -2.0 * ratio, aux.sigma / std::abs(aux.u_site)};
}

LatticeParams gauge_shift(const LatticeParams& params, double chi) {
    LatticeParams out = params;
    out.phi += chi;
    out.phi_prime += chi;
    return out;
}

}  // namespace nht
