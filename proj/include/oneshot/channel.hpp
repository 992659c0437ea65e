#pragma once

// CP trace-nonincreasing maps in Kraus form, plus seeded random generators
// for operators, states, unitaries and channels (the DPI test harness).

#include <cstdint>
#include <random>

#include "oneshot/linalg.hpp"

namespace oneshot {

class Channel {
  public:
    Channel(std::vector<Matrix> kraus_ops, bool trace_preserving);

    int dim_in() const { return static_cast<int>(kraus_[0].cols()); }
    int dim_out() const { return static_cast<int>(kraus_[0].rows()); }
    bool trace_preserving() const { return trace_preserving_; }
    const std::vector<Matrix>& kraus_ops() const { return kraus_; }

    Matrix apply(const Matrix& rho) const;

    static Channel identity(int dim);
    static Channel depolarizing(int dim);  // fully depolarizing, X ↦ tr(X)·I/d
    static Channel partial_trace_channel(const std::vector<int>& dims,
                                         const std::vector<int>& keep);

  private:
    std::vector<Matrix> kraus_;
    bool trace_preserving_;
};

SubnormalizedState apply_channel(const Channel& e, const SubnormalizedState& rho);

// ── Seeded randomness (all deterministic under a fixed 64-bit seed) ──────────
using Rng = std::mt19937_64;

Matrix random_gaussian_matrix(int rows, int cols, Rng& rng);
Matrix random_unitary(int dim, Rng& rng);                       // Haar via QR
HermitianOperator random_hermitian(int dim, Rng& rng);          // GUE-normalized
SubnormalizedState random_density(int dim, Rng& rng);           // full-rank state
SubnormalizedState random_density_rank(int dim, int rank, Rng& rng);
Channel random_channel(int dim_in, int dim_out, std::uint64_t seed);

}  // namespace oneshot
