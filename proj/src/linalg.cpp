#include "oneshot/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace oneshot {

// ── HermitianOperator ─────────────────────────────────────────────────────────

HermitianOperator::HermitianOperator(Matrix m, std::string label)
    : mat_(std::move(m)), label_(std::move(label)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
        throw DimensionMismatch("HermitianOperator: matrix must be square, dim >= 1");
    const Matrix anti = mat_ - mat_.adjoint();
    const double dev = anti.cwiseAbs().maxCoeff();
    if (dev > 2 * kHermTol)
        throw NotHermitian("HermitianOperator: deviation from Hermiticity " + std::to_string(dev));
    mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
}

HermitianOperator HermitianOperator::identity(int dim, std::string label) {
    return HermitianOperator(Matrix::Identity(dim, dim), std::move(label));
}

HermitianOperator HermitianOperator::zero(int dim, std::string label) {
    return HermitianOperator(Matrix::Zero(dim, dim), std::move(label));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& d, std::string label) {
    Matrix m = Matrix::Zero(d.size(), d.size());
    for (int i = 0; i < d.size(); ++i) m(i, i) = d(i);
    return HermitianOperator(std::move(m), std::move(label));
}

// ── SubnormalizedState ────────────────────────────────────────────────────────

SubnormalizedState::SubnormalizedState(HermitianOperator op) : op_(std::move(op)) {
    trace_ = op_.trace();
    const double lmin = lambda_min(op_.matrix());
    if (lmin < -kPsdClampTol)
        throw NotPositive("SubnormalizedState: eigenvalue " + std::to_string(lmin));
    if (trace_ <= 0.0 || trace_ > 1.0 + kPsdClampTol)
        throw NotPositive("SubnormalizedState: trace " + std::to_string(trace_) +
                          " outside (0, 1]");
}

// ── Eigendecomposition ───────────────────────────────────────────────────────

EigResult eig_hermitian(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eig_hermitian: eigensolver failed");
    return EigResult{es.eigenvalues(), es.eigenvectors()};
}

EigResult eig_hermitian(const HermitianOperator& a) { return eig_hermitian(a.matrix()); }

Matrix psd_sqrt(const Matrix& a, double neg_tol) {
    EigResult e = eig_hermitian(a);
    const double scale = std::max(1.0, std::abs(e.values(e.values.size() - 1)));
    RealVector v = e.values;
    for (int i = 0; i < v.size(); ++i) {
        if (v(i) < -neg_tol * scale)
            throw NotPositive("psd_sqrt: eigenvalue " + std::to_string(v(i)));
        v(i) = std::sqrt(std::max(0.0, v(i)));
    }
    return e.vectors * v.asDiagonal() * e.vectors.adjoint();
}

Matrix psd_inv_sqrt_on_support(const Matrix& a, double rank_tol_rel) {
    EigResult e = eig_hermitian(a);
    const double cutoff = rank_tol_rel * std::max(1e-300, e.values.maxCoeff());
    RealVector v = RealVector::Zero(e.values.size());
    for (int i = 0; i < v.size(); ++i)
        if (e.values(i) > cutoff) v(i) = 1.0 / std::sqrt(e.values(i));
    return e.vectors * v.asDiagonal() * e.vectors.adjoint();
}

double lambda_max(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double lambda_min(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double trace_norm(const Matrix& a) {
    if (a.rows() == a.cols() && (a - a.adjoint()).cwiseAbs().maxCoeff() < 1e-13) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }
    if (a.rows() <= 64 && a.cols() <= 64) {
        Eigen::JacobiSVD<Matrix> svd(a);
        return svd.singularValues().sum();
    }
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues().sum();
}

double operator_norm(const Matrix& a) {
    if (a.rows() == a.cols() && (a - a.adjoint()).cwiseAbs().maxCoeff() < 1e-13) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (a.rows() <= 64 && a.cols() <= 64) {
        Eigen::JacobiSVD<Matrix> svd(a);
        return svd.singularValues().maxCoeff();
    }
    // largest singular value through the Gram matrix: accurate for the top of
    // the spectrum and much faster than a full SVD at these sizes
    Matrix gram = a.adjoint() * a;
    gram = 0.5 * (gram + gram.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// ── Distances ────────────────────────────────────────────────────────────────

double trace_distance(const Matrix& rho, const Matrix& rho_prime) {
    if (rho.rows() != rho_prime.rows())
        throw DimensionMismatch("trace_distance: dimension mismatch");
    const double tn = trace_norm(rho - rho_prime);
    const double dt = std::abs(rho.trace().real() - rho_prime.trace().real());
    return 0.5 * tn + 0.5 * dt;
}

double trace_distance(const SubnormalizedState& rho, const SubnormalizedState& rho_prime) {
    return trace_distance(rho.matrix(), rho_prime.matrix());
}

double fidelity(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows()) throw DimensionMismatch("fidelity: dimension mismatch");
    const Matrix sx = psd_sqrt(x, 1e-8);
    const Matrix sy = psd_sqrt(y, 1e-8);
    return trace_norm(sx * sy);
}

double fidelity(const HermitianOperator& x, const HermitianOperator& y) {
    return fidelity(x.matrix(), y.matrix());
}

double purified_distance(const SubnormalizedState& rho, const SubnormalizedState& sigma) {
    const double f = fidelity(rho.matrix(), sigma.matrix());
    return std::sqrt(std::max(0.0, 1.0 - f * f));
}

// ── Projectors and pinching ──────────────────────────────────────────────────

HermitianOperator support_projector(const HermitianOperator& a, double rank_tol) {
    EigResult e = eig_hermitian(a);
    const double cutoff = rank_tol * std::max(1e-300, e.values.maxCoeff());
    Matrix p = Matrix::Zero(a.dim(), a.dim());
    for (int i = 0; i < e.values.size(); ++i)
        if (e.values(i) > cutoff) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
    return HermitianOperator(std::move(p));
}

HermitianOperator positive_part_projector(const HermitianOperator& x) {
    EigResult e = eig_hermitian(x);
    Matrix p = Matrix::Zero(x.dim(), x.dim());
    for (int i = 0; i < e.values.size(); ++i)
        if (e.values(i) >= 0.0) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
    return HermitianOperator(std::move(p));
}

Matrix pinch(const Matrix& rho, const std::vector<Matrix>& blocks) {
    if (blocks.empty()) throw DimensionMismatch("pinch: no blocks");
    Matrix sum = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& p : blocks) {
        if (p.rows() != rho.rows()) throw DimensionMismatch("pinch: block dimension mismatch");
        sum += p;
    }
    if ((sum - Matrix::Identity(rho.rows(), rho.cols())).cwiseAbs().maxCoeff() > kResolutionTol)
        throw DimensionMismatch("pinch: blocks do not sum to the identity");
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& p : blocks) out += p * rho * p;
    return out;
}

HermitianOperator pinch(const HermitianOperator& rho, const std::vector<HermitianOperator>& blocks) {
    std::vector<Matrix> ms;
    ms.reserve(blocks.size());
    for (const auto& b : blocks) ms.push_back(b.matrix());
    return HermitianOperator(pinch(rho.matrix(), ms));
}

// ── Tensor calculus ──────────────────────────────────────────────────────────

Matrix tensor(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
    if (static_cast<long>(a.dim()) * b.dim() > kTensorDimCap)
        throw CapExceeded("tensor: dimension cap exceeded");
    return HermitianOperator(tensor(a.matrix(), b.matrix()));
}

HermitianOperator tensor_power(const HermitianOperator& a, int n, int dim_cap) {
    if (n < 1) throw DimensionMismatch("tensor_power: n must be >= 1");
    double total = 1;
    for (int i = 0; i < n; ++i) {
        total *= a.dim();
        if (total > dim_cap) throw CapExceeded("tensor_power: dimension cap exceeded");
    }
    Matrix out = a.matrix();
    for (int i = 1; i < n; ++i) out = tensor(out, a.matrix());
    return HermitianOperator(std::move(out));
}

Matrix partial_trace(const Matrix& a, const std::vector<int>& dims, const std::vector<int>& keep) {
    long total = 1;
    for (int d : dims) total *= d;
    if (total != a.rows()) throw DimensionMismatch("partial_trace: dims do not match matrix");

    std::vector<bool> kept(dims.size(), false);
    for (int k : keep) {
        if (k < 0 || k >= static_cast<int>(dims.size()))
            throw DimensionMismatch("partial_trace: bad keep index");
        kept[k] = true;
    }
    long dkeep = 1, dtrace = 1;
    for (size_t s = 0; s < dims.size(); ++s) (kept[s] ? dkeep : dtrace) *= dims[s];

    // strides of each subsystem in the flattened index (row-major tensor order)
    std::vector<long> stride(dims.size());
    long acc = 1;
    for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
        stride[s] = acc;
        acc *= dims[s];
    }

    // enumerate kept and traced multi-indices
    auto enumerate = [&](bool which) {
        std::vector<long> offsets{0};
        for (size_t s = 0; s < dims.size(); ++s) {
            if (kept[s] != which) continue;
            std::vector<long> next;
            next.reserve(offsets.size() * dims[s]);
            for (long base : offsets)
                for (int v = 0; v < dims[s]; ++v) next.push_back(base + v * stride[s]);
            offsets.swap(next);
        }
        return offsets;
    };
    const std::vector<long> keep_off = enumerate(true);
    const std::vector<long> trace_off = enumerate(false);

    Matrix out = Matrix::Zero(dkeep, dkeep);
    for (long i = 0; i < dkeep; ++i)
        for (long j = 0; j < dkeep; ++j) {
            Cx sum = 0;
            for (long t : trace_off) sum += a(keep_off[i] + t, keep_off[j] + t);
            out(i, j) = sum;
        }
    return out;
}

HermitianOperator partial_trace(const HermitianOperator& a, const std::vector<int>& dims,
                                const std::vector<int>& keep) {
    return HermitianOperator(partial_trace(a.matrix(), dims, keep));
}

// ── JSON ─────────────────────────────────────────────────────────────────────

std::string to_json(const HermitianOperator& a) {
    nlohmann::json j;
    j["dim"] = a.dim();
    std::vector<std::vector<double>> re(a.dim(), std::vector<double>(a.dim()));
    std::vector<std::vector<double>> im(a.dim(), std::vector<double>(a.dim()));
    for (int i = 0; i < a.dim(); ++i)
        for (int k = 0; k < a.dim(); ++k) {
            re[i][k] = a.entry(i, k).real();
            im[i][k] = a.entry(i, k).imag();
        }
    j["re"] = re;
    j["im"] = im;
    return j.dump();
}

HermitianOperator hermitian_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const int dim = j.at("dim").get<int>();
    Matrix m(dim, dim);
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k)
            m(i, k) = Cx(re.at(i).at(k).get<double>(), im.at(i).at(k).get<double>());
    return HermitianOperator(std::move(m));
}

}  // namespace oneshot
