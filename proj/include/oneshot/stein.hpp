#pragma once

// Typical projectors, the product-of-typical-projectors operator and its
// four sufficient conditions for the collapse of the hypothesis-testing rate,
// exact quantum i.i.d. rate scans via the permutation-symmetric block
// decomposition of tensor powers, and the two-level toy sequence whose
// smoothed min/max rates collapse away from the KL rate.

#include <optional>

#include "oneshot/divergence.hpp"
#include "oneshot/linalg.hpp"

namespace oneshot::stein {

// ── Schur–Weyl block calculus for qubit tensor powers ────────────────────────
// A^{⊗n} on (C²)^{⊗n} decomposes as ⊕_j det(A)^{(n−2j)/2} π_j(A) ⊗ I_{m_j}
// over spins j = n/2, n/2−1, …; π_j is the degree-2j polynomial irrep and
// m_j = C(n, n/2−j) − C(n, n/2−j−1).
Matrix spin_rep(const Matrix& a, int two_j);

struct BlockOp {
    struct Block {
        double mult;  // m_j
        Matrix op;    // det-scaled π_j block, dim 2j+1
    };
    std::vector<Block> blocks;
    double trace() const;
};
BlockOp tensor_power_blocks(const Matrix& site, int n);

// exact D_H^η for a permutation-invariant pair given in block form
double block_d_hyp(const BlockOp& rho, const BlockOp& sigma, double eta);

// ── Typical projectors for product states ────────────────────────────────────
// Type-class selection in the eigenbasis of site^{⊗n}: keep product
// eigenvectors whose −(1/n)·log-eigenvalue lies in [center−ε, center+ε].
struct TypicalProjector {
    int n = 0;
    double center = 0;  // s (entropy rate) or m (relative exponent)
    double eps = 0;
    double dim = 0;       // tr Π
    double rho_mass = 0;  // tr[Π (site ρ)^{⊗n}] for the generating ρ
    std::vector<bool> kept_types;  // indexed like the type enumeration
    std::optional<Matrix> dense;   // materialized for site_dim^n ≤ 2^10
};
TypicalProjector iid_typical_projector(const SubnormalizedState& site_rho, int n, double eps);
// relative variant windows −(1/n) ln of the eigenvalues of weight^{⊗n}
TypicalProjector relative_typical_projector(const HermitianOperator& site_weight, int n,
                                            double eps, double m_target,
                                            const SubnormalizedState* site_rho = nullptr);

// ── The W-operator sufficient condition ──────────────────────────────────────
// W = Π_ρ Π_rel; conditions (1) W†W ≤ I, (2) tr[WσW†] ≤ e^{−n(c−2ε)},
// (3) W†ρW ≤ e^{n(c+2ε)}σ, (4) Re tr[Wρ] close to 1.
struct TypicalityReport {
    int n = 0;
    double eps = 0;
    double c = 0;
    double trace_pi_rho = 0;      // tr[Π_ρ ρ_n]
    double trace_pi_rel_rho = 0;  // tr[Π_rel ρ_n]
    double dim_pi_rho = 0;        // tr Π_ρ
    bool cond1 = false, cond2 = false, cond3 = false, cond4 = false;
    double slack1 = 0, slack2 = 0, slack3 = 0;
    double overlap = 0;          // Re tr[Wρ_n]
    double cond4_threshold = 0;  // 1 − δ used for the flag
    double residual = 0;         // tr[(I−W)(I−W†)ρ_n]
    // candidate-test bounds on (1/n) D_H^η implied by the four conditions
    double implied_lower(double eta) const;
    double implied_upper() const;
};
TypicalityReport build_and_verify_W(const Matrix& rho_n, const Matrix& sigma_n,
                                    const Matrix& pi_rho, const Matrix& pi_rel, double c,
                                    double eps, int n, double cond4_threshold = 0.85);

// ── Quantum i.i.d. rate scan ─────────────────────────────────────────────────
struct QuantumRateRow {
    int n = 0;
    double eta = 0;
    double rate = 0;  // (1/n) D_H^η(ρ^{⊗n} ‖ (e^{−βH})^{⊗n})
    double kl = 0;    // single-letter D(ρ‖e^{−βH})
};
std::vector<QuantumRateRow> quantum_rate_scan(const SubnormalizedState& site_rho,
                                              const HermitianOperator& site_h, double beta,
                                              const std::vector<double>& etas,
                                              const std::vector<int>& ns);

// ── Toy counterexample: ρ_n = (1−1/n)|0⟩⟨0| + (1/n)|1⟩⟨1|, H_n = n²β|1⟩⟨1| ──
struct ToyRow {
    int n = 0;
    double kl_rate = 0;    // (1/n) D_KL(ρ_n‖σ_n) → β
    double d0_rate = 0;    // (1/n) D_0^ε  → 0
    double dmax_rate = 0;  // (1/n) D_max^ε → 0
};
std::vector<ToyRow> toy_counterexample(double beta, const std::vector<int>& ns,
                                       double eps = 0.1);

// exact commuting smoothed values in the log domain (atoms (p_i, ln σ_i));
// shared by the toy sequence and usable as an independent oracle
double log_domain_d_zero_smooth(const RealVector& p, const RealVector& log_sigma, double eps);
double log_domain_d_max_smooth(const RealVector& p, const RealVector& log_sigma, double eps);

}  // namespace oneshot::stein
