#include "oneshot/channel.hpp"

#include <Eigen/QR>
#include <cmath>

namespace oneshot {

Channel::Channel(std::vector<Matrix> kraus_ops, bool trace_preserving)
    : kraus_(std::move(kraus_ops)), trace_preserving_(trace_preserving) {
    if (kraus_.empty()) throw DimensionMismatch("Channel: no Kraus operators");
    const auto rows = kraus_[0].rows();
    const auto cols = kraus_[0].cols();
    Matrix kk = Matrix::Zero(cols, cols);
    for (const auto& k : kraus_) {
        if (k.rows() != rows || k.cols() != cols)
            throw DimensionMismatch("Channel: inconsistent Kraus dimensions");
        kk += k.adjoint() * k;
    }
    const Matrix gap = Matrix::Identity(cols, cols) - kk;
    if (lambda_min(gap) < -1e-10)
        throw NotPositive("Channel: sum K†K exceeds identity");
    if (trace_preserving_ && gap.cwiseAbs().maxCoeff() > 1e-10)
        throw NotPositive("Channel: flagged trace-preserving but sum K†K != I");
}

Matrix Channel::apply(const Matrix& rho) const {
    if (rho.rows() != dim_in()) throw DimensionMismatch("Channel::apply: dimension mismatch");
    Matrix out = Matrix::Zero(dim_out(), dim_out());
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
}

Channel Channel::identity(int dim) {
    return Channel({Matrix::Identity(dim, dim)}, true);
}

Channel Channel::depolarizing(int dim) {
    // Kraus set {|i⟩⟨j|/√d}: X ↦ tr(X) I/d.
    std::vector<Matrix> ks;
    ks.reserve(dim * dim);
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            Matrix k = Matrix::Zero(dim, dim);
            k(i, j) = s;
            ks.push_back(std::move(k));
        }
    return Channel(std::move(ks), true);
}

Channel Channel::partial_trace_channel(const std::vector<int>& dims, const std::vector<int>& keep) {
    long total = 1, dkeep = 1;
    std::vector<bool> kept(dims.size(), false);
    for (int k : keep) kept[k] = true;
    for (size_t s = 0; s < dims.size(); ++s) {
        total *= dims[s];
        if (kept[s]) dkeep *= dims[s];
    }
    // One Kraus operator per traced-out basis multi-index.
    std::vector<long> stride(dims.size());
    long acc = 1;
    for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
        stride[s] = acc;
        acc *= dims[s];
    }
    auto enumerate = [&](bool which) {
        std::vector<long> offsets{0};
        for (size_t s = 0; s < dims.size(); ++s) {
            if (kept[s] != which) continue;
            std::vector<long> next;
            for (long base : offsets)
                for (int v = 0; v < dims[s]; ++v) next.push_back(base + v * stride[s]);
            offsets.swap(next);
        }
        return offsets;
    };
    const auto keep_off = enumerate(true);
    const auto trace_off = enumerate(false);
    std::vector<Matrix> ks;
    ks.reserve(trace_off.size());
    for (long t : trace_off) {
        Matrix k = Matrix::Zero(dkeep, total);
        for (long i = 0; i < dkeep; ++i) k(i, keep_off[i] + t) = 1.0;
        ks.push_back(std::move(k));
    }
    return Channel(std::move(ks), true);
}

SubnormalizedState apply_channel(const Channel& e, const SubnormalizedState& rho) {
    return SubnormalizedState(e.apply(rho.matrix()));
}

// ── Seeded randomness ────────────────────────────────────────────────────────

Matrix random_gaussian_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double re = n(rng);
            const double im = n(rng);
            m(i, j) = Cx(re, im);
        }
    return m;
}

Matrix random_unitary(int dim, Rng& rng) {
    Matrix g = random_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix phases so the distribution is Haar
    for (int i = 0; i < dim; ++i) {
        const Cx d = r(i, i);
        const double a = std::abs(d);
        q.col(i) *= (a > 0 ? d / a : Cx(1, 0));
    }
    return q;
}

HermitianOperator random_hermitian(int dim, Rng& rng) {
    Matrix g = random_gaussian_matrix(dim, dim, rng);
    Matrix h = (g + g.adjoint()) / 2.0;
    return HermitianOperator(std::move(h));
}

SubnormalizedState random_density(int dim, Rng& rng) {
    Matrix g = random_gaussian_matrix(dim, dim, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return SubnormalizedState(std::move(rho));
}

SubnormalizedState random_density_rank(int dim, int rank, Rng& rng) {
    Matrix g = random_gaussian_matrix(dim, rank, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return SubnormalizedState(std::move(rho));
}

Channel random_channel(int dim_in, int dim_out, std::uint64_t seed) {
    Rng rng(seed);
    // Stinespring: random isometry C^in → C^out ⊗ C^env, env = in (so a CPTP
    // map always exists); Kraus K_e = (I ⊗ ⟨e|) V.
    const int env = dim_in;
    Matrix g = random_gaussian_matrix(dim_out * env, dim_in, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix v = Matrix(qr.householderQ()).leftCols(dim_in);
    std::vector<Matrix> ks;
    ks.reserve(env);
    for (int e = 0; e < env; ++e) {
        Matrix k(dim_out, dim_in);
        for (int o = 0; o < dim_out; ++o) k.row(o) = v.row(o * env + e);
        ks.push_back(std::move(k));
    }
    return Channel(std::move(ks), true);
}

}  // namespace oneshot
