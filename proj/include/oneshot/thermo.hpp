#pragma once

// Thermodynamic constructions: Gibbs data, Hamiltonian discretization,
// coherence-mode analysis, dephasing by time averaging, coherence-suppression
// checks, the pinching-based smoothing candidate, thermomajorization,
// measure-and-prepare Gibbs-preserving conversions, energy-conserving
// dilations, and the reference-frame postselection identity.
//
// Divergences against a Gibbs background always use the unnormalized weight
// e^{−βH} as second argument.

#include "oneshot/channel.hpp"
#include "oneshot/divergence.hpp"
#include "oneshot/linalg.hpp"

namespace oneshot::thermo {

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateError : std::runtime_error {
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

// ── Gibbs data ───────────────────────────────────────────────────────────────
struct GibbsSpec {
    HermitianOperator hamiltonian;
    double beta;
    Matrix weight;       // e^{−βH}
    Matrix state;        // e^{−βH}/Z
    double z;            // partition function
    double free_energy;  // −β⁻¹ ln Z

    HermitianOperator weight_op() const { return HermitianOperator(weight); }
};
GibbsSpec gibbs(const HermitianOperator& h, double beta);

// ── Hamiltonian discretization (eigenvalues clamped to δ·⌊E/δ⌋) ─────────────
struct BinnedHamiltonian {
    HermitianOperator original;
    double delta;
    int k0;                        // E_k = (k + k0)δ
    int m;                         // number of bins
    std::vector<double> energies;  // bin energies, k = 0..m−1
    std::vector<Matrix> blocks;    // projectors P_k (zero for unoccupied bins)
    Matrix binned;                 // H' = Σ E_k P_k
};
BinnedHamiltonian discretize(const HermitianOperator& h, double delta);

struct AssistedBudget {
    double w = 0;        // work, energy units
    double eta = 0;      // coherence bound ‖H_C‖∞
    double epsilon = 0;  // output trace-distance error
};

// ── Coherence modes ρ = Σ_ω ρ^{(ω)}, ω = kδ ─────────────────────────────────
// Returned vector has 2m−1 entries; entry j carries mode k = j − (m−1), i.e.
// ρ^{(kδ)} = Σ_{a−b=k} P_a ρ P_b.  Mode 0 is the pinched part.
std::vector<Matrix> coherence_modes(const Matrix& rho, const BinnedHamiltonian& hb);

// ρ̄ = (1/K') Σ_{n<K'} e^{−2πin H'/(K'δ)} ρ e^{+2πin H'/(K'δ)}
Matrix time_average(const Matrix& rho, const BinnedHamiltonian& hb, int k_prime);

// ── Coherence suppression ────────────────────────────────────────────────────
// Premise: D_max(ρ‖e^{−βH'}) ≤ S+Δ' and D_{1/2}(ρ‖e^{−βH'}) ≥ S−Δ'.
// Then every off-diagonal block obeys ‖P_k ρ P_k'‖₁ ≤ e^{−β|E_k−E_k'|/2 + Δ'}.
struct SuppressionReport {
    double worst_slack = 0;  // min over pairs of (bound − norm); ≥ 0 when clean
    double d_max_value = 0;
    double d_half_value = 0;
};
SuppressionReport suppression_check(const SubnormalizedState& rho, const BinnedHamiltonian& hb,
                                    double beta, double s_mid, double delta_prime);

// ── Pinching-based smoothing candidate ───────────────────────────────────────
// Builds ρ' (optimizer of D_{1/2}^ε against e^{−βH'}), solves the relaxed
// max-divergence program min{α : ρ' ≤ αγ' + F, F ⪰ 0, tr F ≤ 2ε}, and forms
// G = γ'^{1/2}(γ' + α⁻¹ D_{H'}(F))^{−1/2},  τ̃ = Gρ'G†/tr.
struct SmoothingCandidate {
    Matrix tau;            // τ̃ (normalized state)
    double s_mid = 0;      // S
    double delta_prime = 0;
    double alpha = 0;      // relaxed program optimum
    double dist_to_rho = 0;
};
SmoothingCandidate smoothing_candidate(const SubnormalizedState& rho,
                                       const BinnedHamiltonian& hb, double beta, double eps);

// ── Thermomajorization ───────────────────────────────────────────────────────
// Piecewise-linear concave curve through cumulative (Σ e^{−βE_i}, Σ p_i) in
// β-order (p_i e^{βE_i} descending), evaluated with flat extension.
struct ThermoCurve {
    std::vector<double> xs;  // breakpoints, x₀ = 0
    std::vector<double> ys;
    double operator()(double x) const;
};
ThermoCurve curve_from_atoms(const RealVector& populations, const RealVector& weights);
bool curve_dominates(const ThermoCurve& a, const ThermoCurve& b, double tol = 1e-12);

// ρ must commute with the Hamiltonian (semiclassical); populations are read in
// the common eigenbasis.
ThermoCurve thermomajorization_curve(const SubnormalizedState& rho, const GibbsSpec& g);
bool tm_convertible(const SubnormalizedState& rho, const SubnormalizedState& rho_prime,
                    const GibbsSpec& g);

// ── Work of transition ───────────────────────────────────────────────────────
// distill = +β⁻¹ D_0^ε(ρ‖e^{−βH}) (extractable work),
// form    = +β⁻¹ D_max^ε(ρ‖e^{−βH}) (formation cost); distill ≤ form.
enum class Direction { Distill, Form };
DivergenceResult work_of_transition(const SubnormalizedState& rho, const GibbsSpec& g,
                                    double eps, Direction dir);

// ── Measure-and-prepare Gibbs-preserving conversion ─────────────────────────
// Requires D_max(ρ'‖σ') ≤ D_0(ρ‖σ) with σ, σ' normalized; the returned CPTP
// channel maps ρ ↦ ρ' and σ ↦ σ' exactly.  Internal classical post-processing
// matrix M = [[1, 1−(1−c')/(1−c)], [0, (1−c')/(1−c)]].
struct GpmConstruction {
    Channel channel;
    Eigen::Matrix2d m;  // column-stochastic post-processing
    double c;           // e^{−D_0(ρ‖σ)}
    double c_prime;     // e^{−D_max(ρ'‖σ')}
};
GpmConstruction gpm_construct(const SubnormalizedState& rho, const SubnormalizedState& sigma,
                              const SubnormalizedState& rho_prime,
                              const SubnormalizedState& sigma_prime);

// E(e^{−βH_in}) ≤ e^{−βH_out} up to slack = λ_max(E(w_in) − w_out)
struct GibbsSubReport {
    bool ok = false;
    double slack = 0;
};
GibbsSubReport is_gibbs_subpreserving(const Channel& e, const GibbsSpec& g_in,
                                      const GibbsSpec& g_out, double tol = 1e-9);

// ── Energy-conserving partial isometries and their dilations ────────────────
bool energy_conserving_check(const Matrix& v, const HermitianOperator& h_in,
                             const HermitianOperator& h_out);

struct LadderSpec {
    std::vector<double> levels;  // battery energies
    int idx_initial = 0;         // |E⟩_W
    int idx_final = 0;           // |E'⟩_W
};
struct DilationResult {
    Matrix u;  // unitary on K ⊗ L ⊗ W, energy conserving
    int dim_k = 0, dim_l = 0, dim_w = 0;
    Vector f_state;  // |f⟩_K (energy eigenstate)
    Vector i_state;  // |i⟩_L (energy eigenstate)
};
// f_index / i_index select energy eigenstates of H_in / H_out (ascending
// order); the energy balance e_i + q_i = e_f + q_f must hold to 1e-9.
DilationResult dilate_isometry(const Matrix& v, const HermitianOperator& h_in,
                               const HermitianOperator& h_out, int f_index, int i_index,
                               const LadderSpec& ladder);

// ── Reference-frame postselection ────────────────────────────────────────────
// induced = d_C·⟨η| D_{H'+H_C}(ρ ⊗ η) |η⟩ for the uniform ladder state η on a
// d_C-level δ-spaced ladder; equals ρ − Σ_k (|k|/d_C) ρ^{(kδ)} when d_C ≥ m.
struct ReferenceFrameReport {
    Matrix induced;
    double deviation = 0;  // ½‖ρ − induced‖₁
    double bound = 0;      // min_K [K²/(2 d_C) + ½ m² ξ'(K)]
};
ReferenceFrameReport reference_frame_postselect(const SubnormalizedState& rho,
                                                const BinnedHamiltonian& hb, int d_c);

// ── Quasi-monotonicity audit ────────────────────────────────────────────────
// D_H^ξ(ρ‖e^{−βH}) + β(w+2η) + ln((ξ+ε)/ξ) ≥ D_H^{ξ+ε}(ρ'‖e^{−βH'})
struct QuasiMonotonicityReport {
    bool holds = false;
    double lhs = 0, rhs = 0;  // certified lhs lower and rhs upper
};
QuasiMonotonicityReport quasi_monotonicity_audit(const SubnormalizedState& rho,
                                                 const SubnormalizedState& rho_prime,
                                                 const AssistedBudget& budget,
                                                 const GibbsSpec& g_in, const GibbsSpec& g_out,
                                                 double xi);

}  // namespace oneshot::thermo
