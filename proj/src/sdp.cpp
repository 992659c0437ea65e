#include "oneshot/sdp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace oneshot::sdp {

namespace {

double inner(const Matrix& a, const Matrix& b) { return (a * b).trace().real(); }

// block-diagonal operator as a list of Hermitian matrices
using Blocks = std::vector<Matrix>;

Blocks zeros_like(const std::vector<int>& dims) {
    Blocks out;
    out.reserve(dims.size());
    for (int d : dims) out.push_back(Matrix::Zero(d, d));
    return out;
}

Blocks identity_like(const std::vector<int>& dims) {
    Blocks out;
    out.reserve(dims.size());
    for (int d : dims) out.push_back(Matrix::Identity(d, d));
    return out;
}

double inner(const Blocks& a, const Blocks& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += inner(a[i], b[i]);
    return s;
}

double fro_norm(const Blocks& a) {
    double s = 0;
    for (const auto& m : a) s += m.squaredNorm();
    return std::sqrt(s);
}

// NT scaling data for one PSD block.
struct Scaling {
    Matrix w_half;      // W^{1/2}
    Matrix w_half_inv;  // W^{-1/2}
    Matrix lam;         // λ = W^{-1/2} X W^{-1/2} = W^{1/2} Z W^{1/2}
    RealVector lam_eval;
    Matrix lam_evec;
};

// eigenvalue floor relative to the largest magnitude, to keep W and its
// inverse representable as the iterates approach the cone boundary
RealVector floored(const RealVector& v, double rel) {
    const double f = rel * std::max(1e-100, v.cwiseAbs().maxCoeff());
    return v.cwiseMax(f);
}

Scaling compute_scaling(const Matrix& x, const Matrix& z) {
    // W = X^{1/2} (X^{1/2} Z X^{1/2})^{-1/2} X^{1/2}, so that W Z W = X.
    EigResult ex = eig_hermitian(x);
    RealVector sx = floored(ex.values, 1e-14).cwiseSqrt();
    Matrix rx = ex.vectors * sx.asDiagonal() * ex.vectors.adjoint();
    Matrix t = rx * z * rx;
    t = 0.5 * (t + t.adjoint().eval());
    EigResult et = eig_hermitian(t);
    RealVector tm = floored(et.values, 1e-14).cwiseSqrt().cwiseInverse();
    Matrix w = rx * (et.vectors * tm.asDiagonal() * et.vectors.adjoint()) * rx;
    w = 0.5 * (w + w.adjoint().eval());

    EigResult ew = eig_hermitian(w);
    RealVector swp = floored(ew.values, 1e-14).cwiseSqrt();
    Scaling s;
    s.w_half = ew.vectors * swp.asDiagonal() * ew.vectors.adjoint();
    s.w_half_inv = ew.vectors * swp.cwiseInverse().asDiagonal() * ew.vectors.adjoint();
    Matrix lam = s.w_half_inv * x * s.w_half_inv;
    s.lam = 0.5 * (lam + lam.adjoint().eval());
    EigResult el = eig_hermitian(s.lam);
    s.lam_eval = el.values;
    s.lam_evec = el.vectors;
    return s;
}

// Max step α ≥ 0 keeping λ + α δ ⪰ 0, computed in λ's eigenbasis.
double max_step(const Scaling& s, const Matrix& delta) {
    RealVector inv_sqrt = floored(s.lam_eval, 1e-14).cwiseSqrt().cwiseInverse();
    Matrix d = s.lam_evec.adjoint() * delta * s.lam_evec;
    d = inv_sqrt.asDiagonal() * d * inv_sqrt.asDiagonal();
    d = 0.5 * (d + d.adjoint().eval());
    const double lmin = lambda_min(d);
    if (lmin >= 0) return std::numeric_limits<double>::infinity();
    return -1.0 / lmin;
}

// Solve λ∘S = R (Jordan product) for S in λ's eigenbasis.
Matrix lyap_solve(const Scaling& s, const Matrix& r) {
    const RealVector lam = floored(s.lam_eval, 1e-14);
    Matrix rt = s.lam_evec.adjoint() * r * s.lam_evec;
    Matrix st(rt.rows(), rt.cols());
    for (int i = 0; i < rt.rows(); ++i)
        for (int j = 0; j < rt.cols(); ++j)
            st(i, j) = 2.0 * rt(i, j) / (lam(i) + lam(j));
    Matrix out = s.lam_evec * st * s.lam_evec.adjoint();
    return 0.5 * (out + out.adjoint().eval());
}

bool all_finite(const Blocks& b) {
    for (const auto& m : b)
        if (!m.allFinite()) return false;
    return true;
}

struct CanonicalProblem {
    std::vector<int> dims;                   // all blocks incl. slacks
    Blocks c;                                // objective (min convention, scaled)
    std::vector<std::vector<Term>> rows;     // constraint coefficients (scaled)
    RealVector b;                            // scaled
    RealVector row_scale;                    // original row i was divided by this
    double obj_scale = 1.0;                  // original objective divided by this
    int n_orig_blocks = 0;
    double obj_sign = 1.0;  // +1 min, -1 flips reported values for max problems
};

CanonicalProblem canonicalize(const SdpProblem& p) {
    CanonicalProblem cp;
    cp.dims.assign(p.num_blocks(), 0);
    for (int bidx = 0; bidx < p.num_blocks(); ++bidx) cp.dims[bidx] = p.block_dim(bidx);
    cp.n_orig_blocks = p.num_blocks();
    cp.obj_sign = (p.sense() == Sense::Maximize) ? -1.0 : 1.0;

    const auto& cons = p.constraints();
    cp.b = RealVector::Zero(cons.size());
    cp.row_scale = RealVector::Ones(cons.size());
    cp.rows.resize(cons.size());
    for (size_t i = 0; i < cons.size(); ++i) {
        cp.rows[i] = cons[i].terms;
        cp.b(i) = cons[i].rhs;
        if (cons[i].rel != Relation::Equal) {
            const double sgn = (cons[i].rel == Relation::LessEq) ? 1.0 : -1.0;
            cp.dims.push_back(1);
            Matrix one(1, 1);
            one(0, 0) = sgn;
            cp.rows[i].push_back(Term{static_cast<int>(cp.dims.size()) - 1, one});
        }
        double norm2 = cp.b(i) * cp.b(i);
        for (const auto& t : cp.rows[i]) norm2 += t.coeff.squaredNorm();
        const double s = std::max(1e-8, std::sqrt(norm2));
        cp.row_scale(i) = s;
        cp.b(i) /= s;
        for (auto& t : cp.rows[i]) t.coeff /= s;
    }
    cp.c = zeros_like(cp.dims);
    for (const auto& t : p.objective()) cp.c[t.block] += cp.obj_sign * t.coeff;
    cp.obj_scale = std::max(1.0, fro_norm(cp.c));
    for (auto& m : cp.c) m /= cp.obj_scale;
    return cp;
}

}  // namespace

// ── SdpProblem ───────────────────────────────────────────────────────────────

int SdpProblem::add_block(int dim) {
    if (dim < 1) throw DimensionMismatch("SdpProblem::add_block: dim >= 1 required");
    block_dims_.push_back(dim);
    return static_cast<int>(block_dims_.size()) - 1;
}

int SdpProblem::total_dim() const {
    int t = 0;
    for (int d : block_dims_) t += d;
    return t;
}

void SdpProblem::add_objective(int block, Matrix coeff) {
    if (coeff.rows() != block_dims_.at(block))
        throw DimensionMismatch("SdpProblem::add_objective: coefficient dim mismatch");
    HermitianOperator guard(coeff);  // validates Hermiticity
    objective_.push_back(Term{block, guard.matrix()});
}

void SdpProblem::add_constraint(std::vector<Term> terms, Relation rel, double rhs) {
    for (auto& t : terms) {
        if (t.coeff.rows() != block_dims_.at(t.block))
            throw DimensionMismatch("SdpProblem::add_constraint: coefficient dim mismatch");
        HermitianOperator guard(t.coeff);
        t.coeff = guard.matrix();
    }
    constraints_.push_back(Constraint{std::move(terms), rel, rhs});
}

void SdpProblem::add_matrix_equality(const std::vector<MatrixTerm>& terms, const Matrix& rhs) {
    const int d = static_cast<int>(rhs.rows());
    for (const auto& basis_elem : hermitian_basis(d)) {
        std::vector<Term> row;
        row.reserve(terms.size());
        for (const auto& mt : terms) row.push_back(Term{mt.block, mt.coeff_of(basis_elem)});
        add_constraint(std::move(row), Relation::Equal, inner(basis_elem, rhs));
    }
}

std::vector<Matrix> hermitian_basis(int d) {
    std::vector<Matrix> basis;
    basis.reserve(d * d);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        Matrix e = Matrix::Zero(d, d);
        e(i, i) = 1.0;
        basis.push_back(e);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Matrix s = Matrix::Zero(d, d);
            s(i, j) = inv_sqrt2;
            s(j, i) = inv_sqrt2;
            basis.push_back(s);
            Matrix a = Matrix::Zero(d, d);
            a(i, j) = Cx(0, -inv_sqrt2);
            a(j, i) = Cx(0, inv_sqrt2);
            basis.push_back(a);
        }
    return basis;
}

// ── Solver ───────────────────────────────────────────────────────────────────

SdpSolution solve(const SdpProblem& p, double tol, int max_iter) {
    if (p.total_dim() > kSdpDimCap)
        throw CapExceeded("sdp::solve: total variable dimension exceeds cap");
    if (p.constraints().empty())
        throw DimensionMismatch("sdp::solve: problem has no constraints");

    CanonicalProblem cp = canonicalize(p);
    const int m = static_cast<int>(cp.rows.size());
    const size_t nb = cp.dims.size();
    double nu = 1.0;  // +1 for the (τ, κ) pair
    for (int d : cp.dims) nu += d;

    auto apply_A = [&](const Blocks& x) {
        RealVector out = RealVector::Zero(m);
        for (int i = 0; i < m; ++i)
            for (const auto& t : cp.rows[i]) out(i) += inner(t.coeff, x[t.block]);
        return out;
    };
    auto apply_At = [&](const RealVector& y) {
        Blocks out = zeros_like(cp.dims);
        for (int i = 0; i < m; ++i)
            for (const auto& t : cp.rows[i]) out[t.block] += y(i) * t.coeff;
        return out;
    };

    // iterates
    Blocks X = identity_like(cp.dims), Z = identity_like(cp.dims);
    RealVector y = RealVector::Zero(m);
    double tau = 1.0, kappa = 1.0;

    const double bnorm = 1.0 + cp.b.norm();
    const double cnorm = 1.0 + fro_norm(cp.c);

    SdpSolution sol;
    sol.status = Status::MaxIterations;

    // best-so-far snapshot, restored on numerical breakdown
    Blocks bestX = X, bestZ = Z;
    RealVector besty = y;
    double best_tau = tau, best_kappa = kappa;
    double best_score = std::numeric_limits<double>::infinity();

    auto finalize_point = [&](Status st, int iters) {
        sol.status = st;
        sol.iterations = iters;
        sol.primal.clear();
        for (int bi = 0; bi < cp.n_orig_blocks; ++bi) sol.primal.push_back(X[bi] / tau);
        sol.dual_multipliers.assign(m, 0.0);
        for (int i = 0; i < m; ++i)
            sol.dual_multipliers[i] = y(i) / tau * cp.obj_scale / cp.row_scale(i);
        const double pobj = inner(cp.c, X) / tau;
        const double dobj = cp.b.dot(y) / tau;
        sol.value = cp.obj_sign * cp.obj_scale * pobj;
        sol.dual_value = cp.obj_sign * cp.obj_scale * dobj;
        RealVector rp = apply_A(X) / tau - cp.b;
        sol.primal_residual = rp.norm() / bnorm;
        Blocks rd = apply_At(y);
        for (size_t bi = 0; bi < nb; ++bi) rd[bi] = rd[bi] + Z[bi] - cp.c[bi] * tau;
        sol.dual_residual = fro_norm(rd) / tau / cnorm;
        sol.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    };

    for (int iter = 0; iter < max_iter; ++iter) {
        // residuals of the homogeneous model
        RealVector rp = apply_A(X) - cp.b * tau;             // want 0
        Blocks rd = apply_At(y);                              // want -A*(y) + Cτ - Z = 0
        for (size_t bi = 0; bi < nb; ++bi) rd[bi] = cp.c[bi] * tau - rd[bi] - Z[bi];
        const double rg = cp.b.dot(y) - inner(cp.c, X) - kappa;
        const double mu = (inner(X, Z) + tau * kappa) / nu;

        // convergence of the de-homogenized point
        {
            const double pobj = inner(cp.c, X) / tau;
            const double dobj = cp.b.dot(y) / tau;
            const double pres = (apply_A(X) / tau - cp.b).norm() / bnorm;
            Blocks dres_b = apply_At(y);
            for (size_t bi = 0; bi < nb; ++bi)
                dres_b[bi] = dres_b[bi] / tau + Z[bi] / tau - cp.c[bi];
            const double dres = fro_norm(dres_b) / cnorm;
            const double relgap =
                inner(X, Z) / (tau * tau) / (1.0 + std::abs(pobj) + std::abs(dobj));
            const double score = std::max({pres, dres, relgap});
            if (score < best_score) {
                best_score = score;
                bestX = X;
                bestZ = Z;
                besty = y;
                best_tau = tau;
                best_kappa = kappa;
            }
            if (pres <= tol && dres <= tol && relgap <= tol) {
                finalize_point(Status::Optimal, iter);
                return sol;
            }
            // infeasibility detection: τ collapses while κ stays away from zero
            if (tau <= 1e-10 * std::max(1.0, kappa) || (mu <= 1e-14 && tau <= 1e-6 * kappa)) {
                const double by = cp.b.dot(y);
                const double cx = inner(cp.c, X);
                if (by > 0) {
                    // dual improving ray certifies primal infeasibility
                    sol.status = Status::Infeasible;
                    sol.iterations = iter;
                    sol.certificate_y.assign(m, 0.0);
                    for (int i = 0; i < m; ++i)
                        sol.certificate_y[i] = y(i) / by / cp.row_scale(i);
                    sol.value = sol.dual_value = 0;
                    return sol;
                }
                if (cx < 0) {
                    sol.status = Status::Unbounded;
                    sol.iterations = iter;
                    for (int bi = 0; bi < cp.n_orig_blocks; ++bi)
                        sol.certificate_x.push_back(X[bi] / (-cx));
                    sol.value = sol.dual_value = 0;
                    return sol;
                }
                break;  // numerical stall
            }
        }

        // NT scalings
        std::vector<Scaling> sc(nb);
        for (size_t bi = 0; bi < nb; ++bi) sc[bi] = compute_scaling(X[bi], Z[bi]);

        // Schur complement M_ij = Σ_b tr[A_i W A_j W] (W = w_half²)
        std::vector<std::vector<Matrix>> waw(m);  // W A_i W per row, per term
        for (int i = 0; i < m; ++i) {
            waw[i].reserve(cp.rows[i].size());
            for (const auto& t : cp.rows[i]) {
                const auto& s = sc[t.block];
                Matrix w = s.w_half * s.w_half;
                waw[i].push_back(w * t.coeff * w);
            }
        }
        Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= i; ++j) {
                double v = 0;
                for (size_t a = 0; a < cp.rows[i].size(); ++a)
                    for (size_t c2 = 0; c2 < cp.rows[j].size(); ++c2)
                        if (cp.rows[i][a].block == cp.rows[j][c2].block)
                            v += inner(cp.rows[i][a].coeff, waw[j][c2]);
                schur(i, j) = v;
                schur(j, i) = v;
            }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(schur);
        const bool schur_ok = (ldlt.info() == Eigen::Success);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
        if (!schur_ok) cod.compute(schur);
        auto schur_solve = [&](const RealVector& r) -> RealVector {
            if (!schur_ok) return RealVector(cod.solve(r));
            RealVector x = ldlt.solve(r);
            for (int ref = 0; ref < 2; ++ref) x += ldlt.solve(r - schur * x);
            return x;
        };

        auto sandwich_w = [&](size_t bi, const Matrix& v) {
            const auto& s = sc[bi];
            Matrix out = s.w_half * s.w_half * v * s.w_half * s.w_half;
            return Matrix(0.5 * (out + out.adjoint().eval()));
        };

        // h and y1, X1, Z1 (τ-coupled part; independent of the rhs)
        Blocks wcw(nb);
        for (size_t bi = 0; bi < nb; ++bi) wcw[bi] = sandwich_w(bi, cp.c[bi]);
        RealVector h = cp.b + apply_A(wcw);
        RealVector y1 = schur_solve(h);
        Blocks aty1 = apply_At(y1);
        Blocks X1(nb), Z1(nb);
        for (size_t bi = 0; bi < nb; ++bi) {
            X1[bi] = sandwich_w(bi, aty1[bi]) - wcw[bi];
            Z1[bi] = cp.c[bi] - aty1[bi];
        }
        const double denom_base = cp.b.dot(y1) - inner(cp.c, X1) + kappa / tau;

        // one Newton solve for a general rhs; returns the step
        struct Step {
            Blocks dX, dZ;
            RealVector dy;
            double dtau = 0, dkappa = 0;
        };
        // E1: A(dX) − b dτ = u_p
        // E2: −A*(dy) + C dτ − dZ = u_d
        // E3: bᵀdy − ⟨C,dX⟩ − dκ = u_g
        // E4: dX + W dZ W = V
        // E5: τ dκ + κ dτ = v_t
        auto newton_general = [&](const RealVector& u_p, const Blocks& u_d, double u_g,
                                  const Blocks& v, double v_t) -> Step {
            Step st;
            Blocks vwu(nb);
            for (size_t bi = 0; bi < nb; ++bi) vwu[bi] = v[bi] + sandwich_w(bi, u_d[bi]);
            RealVector g0 = u_p - apply_A(vwu);
            RealVector y0 = schur_solve(g0);
            Blocks aty0 = apply_At(y0);
            Blocks X0(nb), Z0(nb);
            for (size_t bi = 0; bi < nb; ++bi) {
                X0[bi] = vwu[bi] + sandwich_w(bi, aty0[bi]);
                Z0[bi] = -aty0[bi] - u_d[bi];
            }
            const double numer = u_g + inner(cp.c, X0) - cp.b.dot(y0) + v_t / tau;
            const double denom = denom_base;
            st.dtau = (std::abs(denom) > 1e-300) ? numer / denom : 0.0;
            st.dy = y0 + st.dtau * y1;
            st.dX.resize(nb);
            st.dZ.resize(nb);
            for (size_t bi = 0; bi < nb; ++bi) {
                st.dX[bi] = X0[bi] + st.dtau * X1[bi];
                st.dZ[bi] = Z0[bi] + st.dtau * Z1[bi];
            }
            st.dkappa = (v_t - kappa * st.dtau) / tau;
            return st;
        };
        // residuals of the Newton equations at a candidate step
        auto newton_refine = [&](Step st, const RealVector& u_p, const Blocks& u_d,
                                 double u_g, const Blocks& v, double v_t) -> Step {
            for (int round = 0; round < 2; ++round) {
                RealVector e_p = u_p - (apply_A(st.dX) - cp.b * st.dtau);
                Blocks aty = apply_At(st.dy);
                Blocks e_d(nb), e_v(nb);
                for (size_t bi = 0; bi < nb; ++bi) {
                    e_d[bi] = u_d[bi] - (cp.c[bi] * st.dtau - aty[bi] - st.dZ[bi]);
                    e_v[bi] = v[bi] - (st.dX[bi] + sandwich_w(bi, st.dZ[bi]));
                }
                const double e_g =
                    u_g - (cp.b.dot(st.dy) - inner(cp.c, st.dX) - st.dkappa);
                const double e_t = v_t - (tau * st.dkappa + kappa * st.dtau);
                Step corr = newton_general(e_p, e_d, e_g, e_v, e_t);
                for (size_t bi = 0; bi < nb; ++bi) {
                    st.dX[bi] += corr.dX[bi];
                    st.dZ[bi] += corr.dZ[bi];
                }
                st.dy += corr.dy;
                st.dtau += corr.dtau;
                st.dkappa += corr.dkappa;
            }
            return st;
        };
        auto newton = [&](double res_scale, const std::vector<Matrix>& comp_rhs,
                          double comp_tk) -> Step {
            Blocks v(nb), u_d(nb);
            for (size_t bi = 0; bi < nb; ++bi) {
                Matrix s = lyap_solve(sc[bi], comp_rhs[bi]);
                Matrix vv = sc[bi].w_half * s * sc[bi].w_half;
                v[bi] = 0.5 * (vv + vv.adjoint().eval());
                u_d[bi] = -res_scale * rd[bi];
            }
            RealVector u_p = -res_scale * rp;
            const double u_g = -res_scale * rg;
            Step st = newton_general(u_p, u_d, u_g, v, comp_tk);
            return newton_refine(std::move(st), u_p, u_d, u_g, v, comp_tk);
        };

        auto step_length = [&](const Step& st) {
            double alpha = std::numeric_limits<double>::infinity();
            for (size_t bi = 0; bi < nb; ++bi) {
                const auto& s = sc[bi];
                Matrix d1 = s.w_half_inv * st.dX[bi] * s.w_half_inv;
                Matrix d2 = s.w_half * st.dZ[bi] * s.w_half;
                alpha = std::min(alpha, max_step(s, 0.5 * (d1 + d1.adjoint().eval())));
                alpha = std::min(alpha, max_step(s, 0.5 * (d2 + d2.adjoint().eval())));
            }
            if (st.dtau < 0) alpha = std::min(alpha, -tau / st.dtau);
            if (st.dkappa < 0) alpha = std::min(alpha, -kappa / st.dkappa);
            return alpha;
        };

        // predictor (affine): complementarity target 0
        std::vector<Matrix> comp_aff(nb);
        for (size_t bi = 0; bi < nb; ++bi) comp_aff[bi] = -sc[bi].lam * sc[bi].lam;
        Step aff = newton(1.0, comp_aff, -tau * kappa);
        const double alpha_aff = std::min(1.0, 0.99 * step_length(aff));

        // Mehrotra centering parameter
        double gap_aff = tau * kappa;
        {
            double g = 0;
            for (size_t bi = 0; bi < nb; ++bi) {
                const auto& s = sc[bi];
                Matrix d1 = s.w_half_inv * aff.dX[bi] * s.w_half_inv;
                Matrix d2 = s.w_half * aff.dZ[bi] * s.w_half;
                Matrix l1 = s.lam + alpha_aff * 0.5 * (d1 + d1.adjoint().eval());
                Matrix l2 = s.lam + alpha_aff * 0.5 * (d2 + d2.adjoint().eval());
                g += inner(l1, l2);
            }
            gap_aff = g + (tau + alpha_aff * aff.dtau) * (kappa + alpha_aff * aff.dkappa);
        }
        double sigma = std::pow(std::min(1.0, std::max(0.0, gap_aff / (mu * nu))), 3.0);

        // corrector (combined) step
        std::vector<Matrix> comp(nb);
        for (size_t bi = 0; bi < nb; ++bi) {
            const auto& s = sc[bi];
            Matrix d1 = s.w_half_inv * aff.dX[bi] * s.w_half_inv;
            Matrix d2 = s.w_half * aff.dZ[bi] * s.w_half;
            d1 = 0.5 * (d1 + d1.adjoint().eval());
            d2 = 0.5 * (d2 + d2.adjoint().eval());
            Matrix corr = 0.5 * (d1 * d2 + d2 * d1);
            comp[bi] = sigma * mu * Matrix::Identity(d1.rows(), d1.cols()) -
                       s.lam * s.lam - corr;
        }
        const double comp_tk = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
        Step comb = newton(1.0 - sigma, comp, comp_tk);
        double alpha = std::min(1.0, 0.99 * step_length(comb));
        if (!std::isfinite(alpha) || !all_finite(comb.dX) || !all_finite(comb.dZ) ||
            !comb.dy.allFinite() || !std::isfinite(comb.dtau) || !std::isfinite(comb.dkappa))
            break;  // numerical breakdown; fall back to the best iterate

        for (size_t bi = 0; bi < nb; ++bi) {
            X[bi] += alpha * comb.dX[bi];
            X[bi] = 0.5 * (X[bi] + X[bi].adjoint().eval());
            Z[bi] += alpha * comb.dZ[bi];
            Z[bi] = 0.5 * (Z[bi] + Z[bi].adjoint().eval());
        }
        y += alpha * comb.dy;
        tau += alpha * comb.dtau;
        kappa += alpha * comb.dkappa;

        sol.iterations = iter + 1;

        if (!all_finite(X) || !all_finite(Z) || !y.allFinite() || !std::isfinite(tau) ||
            !std::isfinite(kappa))
            break;
    }

    // restore the best iterate seen, report its true residuals
    X = bestX;
    Z = bestZ;
    y = besty;
    tau = best_tau;
    kappa = best_kappa;
    finalize_point(Status::MaxIterations, sol.iterations);
    {
        const double pobj = inner(cp.c, X) / tau;
        const double dobj = cp.b.dot(y) / tau;
        const double relgap = inner(X, Z) / (tau * tau) /
                              (1.0 + std::abs(pobj) + std::abs(dobj));
        if (sol.primal_residual <= tol && sol.dual_residual <= tol && relgap <= tol)
            sol.status = Status::Optimal;
    }
    return sol;
}

// ── JSON fixtures ────────────────────────────────────────────────────────────

std::string SdpProblem::to_json() const {
    nlohmann::json j;
    j["blocks"] = block_dims_;
    j["sense"] = (sense_ == Sense::Minimize) ? "min" : "max";
    auto term_json = [](const Term& t) {
        nlohmann::json tj;
        tj["block"] = t.block;
        std::vector<std::vector<double>> re, im;
        for (int r = 0; r < t.coeff.rows(); ++r) {
            std::vector<double> rr, ri;
            for (int c = 0; c < t.coeff.cols(); ++c) {
                rr.push_back(t.coeff(r, c).real());
                ri.push_back(t.coeff(r, c).imag());
            }
            re.push_back(rr);
            im.push_back(ri);
        }
        tj["re"] = re;
        tj["im"] = im;
        return tj;
    };
    for (const auto& t : objective_) j["objective"].push_back(term_json(t));
    for (const auto& c : constraints_) {
        nlohmann::json cj;
        for (const auto& t : c.terms) cj["terms"].push_back(term_json(t));
        cj["rel"] = (c.rel == Relation::Equal) ? "eq" : (c.rel == Relation::LessEq ? "le" : "ge");
        cj["rhs"] = c.rhs;
        j["constraints"].push_back(cj);
    }
    return j.dump();
}

std::string SdpSolution::to_json() const {
    nlohmann::json j;
    switch (status) {
        case Status::Optimal: j["status"] = "optimal"; break;
        case Status::Infeasible: j["status"] = "infeasible"; break;
        case Status::Unbounded: j["status"] = "unbounded"; break;
        case Status::MaxIterations: j["status"] = "max_iterations"; break;
    }
    j["value"] = value;
    j["dual_value"] = dual_value;
    j["gap"] = gap;
    j["primal_residual"] = primal_residual;
    j["dual_residual"] = dual_residual;
    j["iterations"] = iterations;
    return j.dump();
}

}  // namespace oneshot::sdp
