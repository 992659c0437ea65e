#pragma once

// Small dense semidefinite-program solver: primal-dual interior point with
// Nesterov-Todd scaling over complex Hermitian blocks, homogeneous self-dual
// embedding for infeasibility detection.
//
// Canonical form handled internally:
//     min Σ_b tr[C_b X_b]   s.t.  Σ_b tr[A_{i,b} X_b]  rel_i  b_i,   X_b ⪰ 0,
// with rel ∈ {≤, =, ≥}; inequalities get 1x1 slack blocks.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oneshot/linalg.hpp"

namespace oneshot::sdp {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded, MaxIterations };

struct Term {
    int block;
    Matrix coeff;  // Hermitian, dim matched to the block
};

struct Constraint {
    std::vector<Term> terms;
    Relation rel;
    double rhs;
};

class SdpProblem {
  public:
    // Returns the index of a fresh PSD variable block of the given dimension.
    int add_block(int dim);

    // Accumulates Σ_b tr[C_b X_b] into the objective.
    void add_objective(int block, Matrix coeff);
    void set_sense(Sense s) { sense_ = s; }

    void add_constraint(std::vector<Term> terms, Relation rel, double rhs);

    // Expands the matrix relation Σ_k terms_k(X) = RHS (entrywise, Hermitian)
    // into scalar constraints over an orthonormal Hermitian basis.  Each term
    // contributes tr[(E† coeff E) X_b] for the embedding E of that block into
    // the constraint space; `embed` maps a basis element B to the coefficient
    // matrix on that block.
    struct MatrixTerm {
        int block;
        // coefficient of tr[· X_block] for basis element B of the constraint space
        std::function<Matrix(const Matrix& basis_elem)> coeff_of;
    };
    void add_matrix_equality(const std::vector<MatrixTerm>& terms, const Matrix& rhs);

    int block_dim(int b) const { return block_dims_[b]; }
    int num_blocks() const { return static_cast<int>(block_dims_.size()); }
    int total_dim() const;
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const std::vector<Term>& objective() const { return objective_; }
    Sense sense() const { return sense_; }

    std::string to_json() const;

  private:
    std::vector<int> block_dims_;
    std::vector<Term> objective_;
    std::vector<Constraint> constraints_;
    Sense sense_ = Sense::Minimize;
};

struct SdpSolution {
    Status status = Status::MaxIterations;
    double value = 0.0;       // objective in the problem's own sense
    double dual_value = 0.0;  // dual objective, same sense
    std::vector<Matrix> primal;
    std::vector<double> dual_multipliers;  // per added scalar constraint
    double gap = 0.0;             // relative duality gap of the returned point
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    // Infeasible: dual improving ray (y, Z implicit); Unbounded: primal ray.
    std::vector<double> certificate_y;
    std::vector<Matrix> certificate_x;

    std::string to_json() const;
};

SdpSolution solve(const SdpProblem& p, double tol = 1e-8, int max_iter = 200);

// Orthonormal Hermitian basis of d×d matrices (d² elements; ⟨B_i,B_j⟩ = δ_ij).
std::vector<Matrix> hermitian_basis(int d);

// total variable dimension admitted by solve()
constexpr int kSdpDimCap = 128;

}  // namespace oneshot::sdp
