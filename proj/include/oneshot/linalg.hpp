#pragma once

// Dense Hermitian linear algebra substrate: operators, states, distances,
// projectors, pinching, tensor calculus.  All logarithms are natural (nats).

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oneshot {

using Cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// ── Numerical tolerances ─────────────────────────────────────────────────────
constexpr double kHermTol = 1e-12;       // allowed anti-Hermitian part at construction
constexpr double kPsdClampTol = 1e-10;   // eigenvalues in [-kPsdClampTol, 0) clamp to 0
constexpr double kRankTolRel = 1e-10;    // support rank cutoff, relative to largest eigenvalue
constexpr double kResolutionTol = 1e-10; // sum-to-identity check for block resolutions
constexpr int kTensorDimCap = 1 << 14;   // largest admissible total dimension

// ── Errors ───────────────────────────────────────────────────────────────────
struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct NotHermitian : std::runtime_error {
    explicit NotHermitian(const std::string& what) : std::runtime_error(what) {}
};
struct NotPositive : std::runtime_error {
    explicit NotPositive(const std::string& what) : std::runtime_error(what) {}
};
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// ── HermitianOperator ─────────────────────────────────────────────────────────
// The universal carrier for states, Hamiltonians, Gibbs weights and tests.
// Construction symmetrizes (A+A†)/2 and rejects inputs whose anti-Hermitian
// part exceeds kHermTol entrywise.
class HermitianOperator {
  public:
    explicit HermitianOperator(Matrix m, std::string label = {});

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }
    const std::string& label() const { return label_; }

    double trace() const { return mat_.trace().real(); }
    Cx entry(int i, int j) const { return mat_(i, j); }

    static HermitianOperator identity(int dim, std::string label = {});
    static HermitianOperator zero(int dim, std::string label = {});
    static HermitianOperator diagonal(const RealVector& d, std::string label = {});

  private:
    Matrix mat_;
    std::string label_;
};

// ── SubnormalizedState ────────────────────────────────────────────────────────
// Positive operator with trace in (0, 1].  Eigenvalues in [-1e-10, 0) are
// tolerated (round-off); anything more negative is rejected.
class SubnormalizedState {
  public:
    explicit SubnormalizedState(HermitianOperator op);
    explicit SubnormalizedState(Matrix m, std::string label = {})
        : SubnormalizedState(HermitianOperator(std::move(m), std::move(label))) {}

    int dim() const { return op_.dim(); }
    const HermitianOperator& op() const { return op_; }
    const Matrix& matrix() const { return op_.matrix(); }
    double trace() const { return trace_; }

  private:
    HermitianOperator op_;
    double trace_;
};

// ── Eigendecomposition ───────────────────────────────────────────────────────
struct EigResult {
    RealVector values;  // ascending
    Matrix vectors;     // columns; A = V diag(values) V†
};
EigResult eig_hermitian(const HermitianOperator& a);
EigResult eig_hermitian(const Matrix& a);

// Square root / inverse square root / log of a PSD operator.  neg_tol is the
// most negative eigenvalue accepted (then clamped to zero).
Matrix psd_sqrt(const Matrix& a, double neg_tol = kPsdClampTol);
Matrix psd_inv_sqrt_on_support(const Matrix& a, double rank_tol_rel = kRankTolRel);
double lambda_max(const Matrix& a);
double lambda_min(const Matrix& a);

// Schatten norms.
double trace_norm(const Matrix& a);     // sum of singular values
double operator_norm(const Matrix& a);  // largest singular value

// ── Distances ────────────────────────────────────────────────────────────────
// Generalized trace distance  D(ρ,ρ') = ½‖ρ−ρ'‖₁ + ½|tr ρ − tr ρ'|.
double trace_distance(const SubnormalizedState& rho, const SubnormalizedState& rho_prime);
double trace_distance(const Matrix& rho, const Matrix& rho_prime);

// Fidelity  F(X,Y) = ‖X^{1/2} Y^{1/2}‖₁  for X, Y ≥ 0.
double fidelity(const HermitianOperator& x, const HermitianOperator& y);
double fidelity(const Matrix& x, const Matrix& y);

// Purified distance  P(ρ,σ) = √(1 − F(ρ,σ)²)  for normalized states.
double purified_distance(const SubnormalizedState& rho, const SubnormalizedState& sigma);

// ── Projectors and pinching ──────────────────────────────────────────────────
// Projector onto the support of a PSD operator; rank_tol is relative to the
// largest eigenvalue.
HermitianOperator support_projector(const HermitianOperator& a, double rank_tol = kRankTolRel);

// Projector onto the eigenspaces of X with nonnegative eigenvalues, Proj{X ≥ 0}.
HermitianOperator positive_part_projector(const HermitianOperator& x);

// Pinching D(X) = Σ_k P_k X P_k for a complete orthogonal resolution {P_k}.
HermitianOperator pinch(const HermitianOperator& rho, const std::vector<HermitianOperator>& blocks);
Matrix pinch(const Matrix& rho, const std::vector<Matrix>& blocks);

// ── Tensor calculus ──────────────────────────────────────────────────────────
Matrix tensor(const Matrix& a, const Matrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator tensor_power(const HermitianOperator& a, int n, int dim_cap = kTensorDimCap);

// Partial trace over the complement of `keep`; `dims` are the subsystem
// dimensions in tensor order (leftmost factor = slowest index).
Matrix partial_trace(const Matrix& a, const std::vector<int>& dims, const std::vector<int>& keep);
HermitianOperator partial_trace(const HermitianOperator& a, const std::vector<int>& dims,
                                const std::vector<int>& keep);

// ── JSON (de)serialization ───────────────────────────────────────────────────
// Matrix literals as { "dim": n, "re": [[...]], "im": [[...]] }.
std::string to_json(const HermitianOperator& a);
HermitianOperator hermitian_from_json(const std::string& text);

}  // namespace oneshot
