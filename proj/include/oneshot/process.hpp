#pragma once

// Classical finite-alphabet translation-invariant processes on one-sided
// windows [1..n]: i.i.d., Markov, transfer-matrix Gibbs chains and finite
// mixtures; exact marginals, KL rates, relative typical sets, classical
// Neyman–Pearson hypothesis testing, and ergodicity/mixing diagnostics.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "oneshot/divergence.hpp"
#include "oneshot/linalg.hpp"

namespace oneshot::ergodic {

using RealMatrix = Eigen::MatrixXd;

struct DegenerateError : std::runtime_error {
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

constexpr long kEnumerationCap = 1L << 22;  // largest admissible B^n

// Transfer-matrix data of the infinite-volume Gibbs chain of a symmetric
// nearest-neighbour coupling h(x,y):  T(x,y) = e^{−βh(x,y)}, top eigenpair
// (e^{λ*}, |λ*⟩) inducing σ(y|x) = ⟨y|λ*⟩ e^{−βh(x,y)} / (e^{λ*}⟨x|λ*⟩) and
// stationary π(x) = ⟨x|λ*⟩².
struct TransferGibbs {
    RealMatrix coupling;
    double beta = 0;
    RealMatrix t;
    double lambda_star = 0;       // ln of the top eigenvalue
    RealVector top_vec;           // Perron eigenvector, positive entries
    RealMatrix conditional;       // conditional(y, x) = σ(y|x), columns sum to 1
    RealVector stationary;        // π
    double second_eigenvalue = 0; // next eigenvalue of T (signed)
    double free_energy_density() const { return -lambda_star / beta; }
};

class FiniteProcess {
  public:
    enum class Kind { IID, Markov, TransferGibbs, Mixture };

    static FiniteProcess iid(RealVector p);
    // transition(y, x) = P(y|x), columns sum to 1; chain must be irreducible
    static FiniteProcess markov(RealMatrix transition);
    static FiniteProcess transfer_gibbs(RealMatrix coupling, double beta);
    static FiniteProcess mixture(std::vector<FiniteProcess> components, RealVector weights);

    Kind kind() const { return kind_; }
    int alphabet() const { return alphabet_; }

    // exact distribution over B^n; index = Σ x_i B^{n−i} (x₁ most significant)
    RealVector marginal(int n) const;

    const RealVector& stationary() const { return stationary_; }
    const RealMatrix& conditional() const { return conditional_; }
    const TransferGibbs& transfer() const;
    const std::vector<FiniteProcess>& components() const { return components_; }
    const RealVector& weights() const { return weights_; }

  private:
    FiniteProcess() = default;
    Kind kind_ = Kind::IID;
    int alphabet_ = 0;
    RealVector stationary_;    // single-site marginal (all kinds)
    RealMatrix conditional_;   // P(y|x) for IID/Markov/TransferGibbs
    std::vector<TransferGibbs> transfer_;  // nonempty for TransferGibbs
    std::vector<FiniteProcess> components_;
    RealVector weights_;
};

TransferGibbs induced_gibbs_chain(const RealMatrix& coupling, double beta);

// single-letter KL divergence rate; σ must be IID/Markov/TransferGibbs and
// absolutely continuous along ρ's transitions
double kl_rate(const FiniteProcess& rho, const FiniteProcess& sigma);

// ── Relative typical set  Q_n = {X : |n⁻¹ ln(ρ_n/σ_n) − D| ≤ ε} ─────────────
struct RelativeTypicalStats {
    double rate = 0;        // D = kl_rate
    double rho_mass = 0;    // ρ_n[Q_n]
    double sigma_mass = 0;  // σ_n[Q_n]
    long set_size = 0;
    bool equipartition_ok = true;  // every member within the exponent window
    bool rho_mass_ok = false;      // ρ[Q] > 1 − ε
    bool sigma_bounds_ok = false;  // (1−ε)e^{−n(D+ε)} < σ[Q] < e^{−n(D−ε)}
};
RelativeTypicalStats relative_typical_set(const FiniteProcess& rho, const FiniteProcess& sigma,
                                          int n, double eps);

// exact classical Neyman–Pearson value of D_H^η for explicit distributions
struct ClassicalHypResult {
    double value = 0;
    double beta_sigma = 0;  // optimal tr[σQ]
};
ClassicalHypResult classical_d_hyp(const RealVector& p, const RealVector& s, double eta);

// ── Rate scans ───────────────────────────────────────────────────────────────
struct ScanRow {
    int n = 0;
    double eta = 0;
    double rate = 0;  // (1/n) D_H^η(ρ_n‖σ_n)
    double lower = 0, upper = 0;
    double kl = 0;
};
std::vector<ScanRow> spectral_rate_scan(const FiniteProcess& rho, const FiniteProcess& sigma,
                                        const std::vector<double>& etas,
                                        const std::vector<int>& ns);

// tr[ρ_n 1{ρ_n − e^{na} σ_n ≥ 0}] over a grid of exponents a
struct NagaokaRow {
    int n = 0;
    double a = 0;
    double mass = 0;
};
std::vector<NagaokaRow> nagaoka_scan(const FiniteProcess& rho, const FiniteProcess& sigma,
                                     const std::vector<int>& ns, const std::vector<double>& as);

// ── Diagnostics ──────────────────────────────────────────────────────────────
// variance of the shift average of a single-site observable over a window of
// 2m+1 sites, computed exactly from pair marginals
double ergodicity_diagnostic(const FiniteProcess& p, const RealVector& observable, int m);

// |E[A₁ B₁₊ₛ] − E[A]E[B]| for shifts s = 1..max_shift
std::vector<double> mixing_diagnostic(const FiniteProcess& p, const RealVector& a,
                                      const RealVector& b, int max_shift);

// largest α₁ and smallest α₂ with α₁^{k−1} σ_m^{⊗k} ≤ σ_{km} ≤ α₂^{k−1} σ_m^{⊗k}
struct SandwichReport {
    double alpha1 = 0;
    double alpha2 = 0;
};
SandwichReport gibbs_sandwich_check(const RealMatrix& coupling, double beta, int m, int k);

// Seeded Monte-Carlo estimate of E_ρ[(1/n) ln(ρ_n/σ_n)] for windows beyond
// the enumeration cap; explicitly labeled as an estimate.
struct SampledEstimate {
    double value = 0;
    double std_error = 0;
    long samples = 0;
    std::uint64_t seed = 0;
    bool is_estimate = true;
};
SampledEstimate sampled_log_ratio_rate(const FiniteProcess& rho, const FiniteProcess& sigma,
                                       int n, long samples, std::uint64_t seed);

}  // namespace oneshot::ergodic
