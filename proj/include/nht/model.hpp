// model.hpp: lattice parameters, on-site fields and the three equivalent
// operator representations of the non-Hermitian zigzag lattice.
//
// Site ordering conventions
//   chain     : c_0 .. c_{N-1}
//   zigzag    : a_0, b_0, a_1, b_1, ...   (identical to the chain ordering,
//               c_{2n} = a_n, c_{2n+1} = b_n)
//   auxiliary : a_n, b_n, A_n, B_n for n < cells, followed by A_cells, B_cells
//
// All operators store the Hamiltonian H; the equation of motion is
// d(state)/dt = -i H state, available through apply_generator().

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nht/error.hpp"

namespace nht {

struct LatticeParams {
    double kappa{0.0};      // imaginary intra-sublattice hopping magnitude
    double rho{1.0};        // inter-sublattice hopping magnitude
    double gamma{0.0};      // uniform loss rate
    double phi{0.0};        // lower-plaquette Peierls phase
    double phi_prime{0.0};  // upper-plaquette Peierls phase

    // Phase of the equivalent chain hopping, (phi - phi') / 2.
    double delta_phi() const noexcept { return 0.5 * (phi - phi_prime); }

    // gamma >= 2 kappa: the lattice is passive. Reported, never enforced.
    bool dissipative() const noexcept { return gamma >= 2.0 * kappa; }

    void validate() const;

    // Convenience constructor using the phi' = -phi convention.
    static LatticeParams symmetric(double kappa, double rho, double gamma, double phi) {
        return LatticeParams{kappa, rho, gamma, phi, 0.0 - phi};
    }
};

struct AuxiliaryParams {
    double epsilon{0.0};  // Hermitian hopping between adjacent sites of a sublattice
    double sigma{0.0};    // coupling to the lossy auxiliary sites
    cplx u_site{0.0, -1.0};

    // |U| / sigma; adiabatic elimination needs this to be large.
    double elimination_ratio() const;
    void validate() const;
};

enum class FieldKind { clean, uniform_disorder, defect_pair, custom };

const char* to_string(FieldKind kind) noexcept;

struct SiteField {
    std::vector<double> values;
    FieldKind kind{FieldKind::clean};
    double delta{0.0};      // uniform_disorder half width
    double v0{0.0};         // defect_pair strength
    std::size_t n1{0};      // defect_pair sites (array indices)
    std::size_t n2{0};

    std::size_t size() const noexcept { return values.size(); }
    double max_abs() const noexcept;

    static SiteField clean(std::size_t size);
    static SiteField defect_pair(std::size_t size, double v0, std::size_t n1, std::size_t n2);
    static SiteField custom(std::vector<double> values);
};

// Chain -> sublattices: V^A_n = U_{2n}, V^B_n = U_{2n+1}. Requires an even size.
std::pair<SiteField, SiteField> split_sublattices(const SiteField& chain_field);
// Sublattices -> chain, inverse of split_sublattices.
SiteField interleave(const SiteField& va, const SiteField& vb);

// Banded operator of the equivalent linear chain:
//   (H c)_n = (-i gamma + U_n) c_n + rho e^{i dphi} c_{n+1} + rho e^{-i dphi} c_{n-1}
//             - i kappa (c_{n+2} + c_{n-2})
// with open boundaries.
//
// Both operator classes keep the multiple of the identity (the uniform loss
// -i gamma) apart from the rest: H = core + uniform * 1. apply() and friends
// act with the full H, the *_core variants without the uniform term, so the
// integrator can treat that factor exactly.
class ChainOperator {
public:
    // diag excludes the uniform part.
    ChainOperator(std::vector<cplx> diag, cplx nn_fwd, cplx nn_bwd, cplx nnn, cplx uniform = {});

    std::size_t size() const noexcept { return diag_.size(); }
    std::span<const cplx> diag() const noexcept { return diag_; }
    cplx nn_fwd() const noexcept { return nn_fwd_; }
    cplx nn_bwd() const noexcept { return nn_bwd_; }
    cplx nnn() const noexcept { return nnn_; }
    cplx uniform() const noexcept { return uniform_; }

    // y = H x
    void apply(std::span<const cplx> x, std::span<cplx> y) const;
    // y = -i H x
    void apply_generator(std::span<const cplx> x, std::span<cplx> y) const;
    // out = base + scale * H x; out must not alias x.
    void apply_fused(cplx scale, std::span<const cplx> x, std::span<const cplx> base,
                     std::span<cplx> out) const;
    void apply_fused_core(cplx scale, std::span<const cplx> x, std::span<const cplx> base,
                          std::span<cplx> out) const;

    // gamma + 2 kappa + 2 rho + max|U_n|, an upper bound of the spectral radius.
    double spectral_bound() const noexcept;

    Eigen::MatrixXcd to_dense() const;

private:
    std::vector<cplx> diag_;
    cplx nn_fwd_;
    cplx nn_bwd_;
    cplx nnn_;
    cplx uniform_;
};

// General sparse operator (CSR) used for the zigzag and auxiliary-site models.
class SparseOperator {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        cplx value;
    };

    // entries exclude the uniform part.
    SparseOperator(std::size_t size, std::vector<Entry> entries, cplx uniform = {});

    std::size_t size() const noexcept { return size_; }
    cplx uniform() const noexcept { return uniform_; }

    void apply(std::span<const cplx> x, std::span<cplx> y) const;
    void apply_generator(std::span<const cplx> x, std::span<cplx> y) const;
    void apply_fused(cplx scale, std::span<const cplx> x, std::span<const cplx> base,
                     std::span<cplx> out) const;
    void apply_fused_core(cplx scale, std::span<const cplx> x, std::span<const cplx> base,
                          std::span<cplx> out) const;

    // Gershgorin bound: max_i sum_j |H_ij|.
    double spectral_bound() const noexcept;

    Eigen::MatrixXcd to_dense() const;

private:
    std::size_t size_;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> cols_;
    std::vector<cplx> values_;
    cplx uniform_;
};

SparseOperator build_zigzag(const LatticeParams& params, const SiteField& va,
                            const SiteField& vb, std::size_t cells);

ChainOperator build_chain(const LatticeParams& params, const SiteField& u, std::size_t size);

SparseOperator build_auxiliary(const LatticeParams& params, const AuxiliaryParams& aux,
                               const SiteField& va, const SiteField& vb, std::size_t cells);

// Zigzag lattice obtained by eliminating the auxiliary sites: intra-sublattice
// hopping kappa_eff and a uniform on-site shift delta (see effective_params).
// params.kappa is ignored.
SparseOperator build_effective(const LatticeParams& params, const AuxiliaryParams& aux,
                               const SiteField& va, const SiteField& vb, std::size_t cells);

// Number of amplitudes of the auxiliary model for the given number of cells.
constexpr std::size_t auxiliary_size(std::size_t cells) noexcept { return 4 * cells + 2; }
// Index of the main-lattice chain site `chain_index` inside the auxiliary state.
constexpr std::size_t auxiliary_main_index(std::size_t chain_index) noexcept {
    return 4 * (chain_index / 2) + chain_index % 2;
}
// Embed a chain-ordered main-lattice state (length 2 cells) into the auxiliary layout.
std::vector<cplx> embed_in_auxiliary(std::span<const cplx> main_state);
// Extract the main-lattice amplitudes, chain ordered.
std::vector<cplx> extract_main(std::span<const cplx> auxiliary_state);

// Auxiliary site energy that makes the effective hopping exactly -i kappa:
// U = sigma^2 (epsilon - i kappa) / (epsilon^2 + kappa^2).
cplx tune_auxiliary_energy(double epsilon, double kappa, double sigma);

struct EffectiveParams {
    cplx kappa_eff;          // epsilon - sigma^2 / U
    cplx delta;              // -2 sigma^2 / U
    double residual_bound;   // sigma / |U|
};

EffectiveParams effective_params(const AuxiliaryParams& aux);

// Common shift phi -> phi + chi, phi' -> phi' + chi. Leaves delta_phi() unchanged.
LatticeParams gauge_shift(const LatticeParams& params, double chi);

}  // namespace nht
