#pragma once

// One-shot divergences and entropies: exact D_0, D_{1/2}, D_1, D_max, the
// hypothesis-testing divergence D_H^η, and their smoothed variants over the
// generalized-trace-distance ball.  Values in nats; every result carries a
// certified [lower, upper] interval and, where available, an optimality
// witness that reproduces the value on re-evaluation.

#include <optional>

#include "oneshot/linalg.hpp"
#include "oneshot/sdp.hpp"

namespace oneshot {

struct SupportError : std::runtime_error {
    explicit SupportError(const std::string& what) : std::runtime_error(what) {}
};
struct CertificationError : std::runtime_error {
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

struct DivergenceResult {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<Matrix> test_q;      // optimal test (D_0 support projector, D_H test)
    std::optional<double> mu;          // dual scalar (D_H threshold, D_max λ)
    std::optional<Matrix> dual_x;      // dual operator of D_H
    std::optional<Matrix> smooth_tau;  // optimal smoothing candidate
    bool interval_only = false;        // true when only a certified interval is known
};

// default certification width carried by exact results
constexpr double kCertWidth = 1e-6;
// support-condition threshold: tr[(I − P_σ) ρ] above this raises SupportError
constexpr double kSupportTol = 1e-10;

// ── Exact divergences (second argument is any positive operator) ─────────────
DivergenceResult d_kl(const SubnormalizedState& rho, const HermitianOperator& sigma);
DivergenceResult d_min_zero(const SubnormalizedState& rho, const HermitianOperator& sigma);
DivergenceResult d_min_half(const SubnormalizedState& rho, const HermitianOperator& sigma);
DivergenceResult d_max(const SubnormalizedState& rho, const HermitianOperator& sigma);

enum class Alpha { Zero, Half, One, Infinity };
double renyi_entropy(const SubnormalizedState& rho, Alpha alpha);

// ── Hypothesis-testing divergence ────────────────────────────────────────────
//   D_H^η(ρ‖σ) = −ln( η⁻¹ min { tr[σQ] : 0 ≤ Q ≤ I, tr[ρQ] ≥ η } )
// Primary algorithm: quantum Neyman–Pearson bisection over Q(μ)=Proj{ρ−μσ>0}
// with fractional weighting of the boundary projector so tr[ρQ] = η exactly.
// With certify=true the value is cross-checked against SDP solves of the
// primal and the dual; disagreement beyond 1e-6 raises CertificationError.
DivergenceResult d_hyp(const SubnormalizedState& rho, const HermitianOperator& sigma,
                       double eta, bool certify = true);

// ── Smooth divergences over B^ε(ρ) = {τ ⪰ 0, tr τ ≤ 1, D(τ,ρ) ≤ ε} ──────────
DivergenceResult d_max_smooth(const SubnormalizedState& rho, const HermitianOperator& sigma,
                              double eps);
DivergenceResult d_half_smooth(const SubnormalizedState& rho, const HermitianOperator& sigma,
                               double eps);
DivergenceResult d_zero_smooth(const SubnormalizedState& rho, const HermitianOperator& sigma,
                               double eps);

struct SmoothEntropies {
    DivergenceResult h_min;  // −D_max^ε(ρ‖I)
    DivergenceResult h_max;  // −D_0^ε(ρ‖I)
};
SmoothEntropies smooth_entropies(const SubnormalizedState& rho, double eps);

// true when tr[(I − P_σ)ρ] ≤ kSupportTol
bool support_contained(const SubnormalizedState& rho, const HermitianOperator& sigma);

}  // namespace oneshot
