#include "oneshot/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace oneshot {

namespace {

constexpr double kBoundaryBand = 1e-11;  // NP boundary-eigenvalue tie band

void require_same_dim(const SubnormalizedState& rho, const HermitianOperator& sigma) {
    if (rho.dim() != sigma.dim())
        throw DimensionMismatch("divergence: dimension mismatch");
}

void require_support(const SubnormalizedState& rho, const HermitianOperator& sigma) {
    require_same_dim(rho, sigma);
    if (!support_contained(rho, sigma))
        throw SupportError("first argument leaks outside the support of the second");
}

DivergenceResult exact(double v) {
    DivergenceResult r;
    r.value = v;
    r.lower = v;
    r.upper = v;
    return r;
}

}  // namespace

bool support_contained(const SubnormalizedState& rho, const HermitianOperator& sigma) {
    auto p = support_projector(sigma);
    const Matrix leak = (Matrix::Identity(rho.dim(), rho.dim()) - p.matrix()) * rho.matrix();
    return leak.trace().real() <= kSupportTol;
}

// ── Exact divergences ────────────────────────────────────────────────────────

DivergenceResult d_kl(const SubnormalizedState& rho, const HermitianOperator& sigma) {
    require_support(rho, sigma);
    EigResult er = eig_hermitian(rho.op());
    double tr_rho_ln_rho = 0.0;
    for (int i = 0; i < er.values.size(); ++i) {
        const double l = er.values(i);
        if (l > 1e-300) tr_rho_ln_rho += l * std::log(l);
    }
    EigResult es = eig_hermitian(sigma);
    const double cutoff = kRankTolRel * std::max(1e-300, es.values.maxCoeff());
    double tr_rho_ln_sigma = 0.0;
    for (int i = 0; i < es.values.size(); ++i) {
        if (es.values(i) <= cutoff) continue;
        const double w =
            (es.vectors.col(i).adjoint() * rho.matrix() * es.vectors.col(i)).value().real();
        tr_rho_ln_sigma += std::log(es.values(i)) * w;
    }
    return exact(tr_rho_ln_rho - tr_rho_ln_sigma);
}

DivergenceResult d_min_zero(const SubnormalizedState& rho, const HermitianOperator& sigma) {
    require_support(rho, sigma);
    auto p = support_projector(rho.op());
    const double overlap = (p.matrix() * sigma.matrix()).trace().real();
    DivergenceResult r = exact(-std::log(std::max(overlap, 1e-300)));
    r.test_q = p.matrix();
    return r;
}

DivergenceResult d_min_half(const SubnormalizedState& rho, const HermitianOperator& sigma) {
    require_support(rho, sigma);
    const double f = fidelity(rho.matrix(), sigma.matrix());
    return exact(-2.0 * std::log(std::max(f, 1e-300)));
}

DivergenceResult d_max(const SubnormalizedState& rho, const HermitianOperator& sigma) {
    require_support(rho, sigma);
    const Matrix si = psd_inv_sqrt_on_support(sigma.matrix());
    Matrix a = si * rho.matrix() * si;
    a = 0.5 * (a + a.adjoint().eval());
    const double lam = std::max(lambda_max(a), 1e-300);
    DivergenceResult r = exact(std::log(lam));
    r.mu = lam;
    return r;
}

double renyi_entropy(const SubnormalizedState& rho, Alpha alpha) {
    EigResult e = eig_hermitian(rho.op());
    const double cutoff = kRankTolRel * std::max(1e-300, e.values.maxCoeff());
    switch (alpha) {
        case Alpha::Zero: {
            int rank = 0;
            for (int i = 0; i < e.values.size(); ++i)
                if (e.values(i) > cutoff) ++rank;
            return std::log(static_cast<double>(rank));
        }
        case Alpha::Half: {
            double s = 0;
            for (int i = 0; i < e.values.size(); ++i)
                if (e.values(i) > 0) s += std::sqrt(e.values(i));
            return 2.0 * std::log(s);
        }
        case Alpha::One: {
            double h = 0;
            for (int i = 0; i < e.values.size(); ++i)
                if (e.values(i) > 1e-300) h -= e.values(i) * std::log(e.values(i));
            return h;
        }
        case Alpha::Infinity:
            return -std::log(e.values.maxCoeff());
    }
    return 0;
}

// ── Neyman–Pearson machinery ─────────────────────────────────────────────────

namespace {

struct NpPoint {
    double rho_pos = 0, rho_border = 0;
    double sigma_pos = 0, sigma_border = 0;
    Matrix proj_pos, proj_border;
};

NpPoint np_point(const Matrix& rho, const Matrix& sigma, double mu) {
    Matrix diff = rho - mu * sigma;
    diff = 0.5 * (diff + diff.adjoint().eval());
    EigResult e = eig_hermitian(diff);
    const int d = static_cast<int>(rho.rows());
    NpPoint out;
    out.proj_pos = Matrix::Zero(d, d);
    out.proj_border = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const double l = e.values(i);
        if (l > kBoundaryBand)
            out.proj_pos += e.vectors.col(i) * e.vectors.col(i).adjoint();
        else if (l >= -kBoundaryBand)
            out.proj_border += e.vectors.col(i) * e.vectors.col(i).adjoint();
    }
    out.rho_pos = (out.proj_pos * rho).trace().real();
    out.rho_border = (out.proj_border * rho).trace().real();
    out.sigma_pos = (out.proj_pos * sigma).trace().real();
    out.sigma_border = (out.proj_border * sigma).trace().real();
    return out;
}

struct NpSolution {
    double value;       // D_H^η
    double beta_sigma;  // optimal tr[σQ]
    Matrix q;           // optimal test
    double mu_np;       // threshold in Q(μ) = Proj{ρ − μσ > 0} + t·boundary
};

NpSolution np_solve(const Matrix& rho, const Matrix& sigma, double eta) {
    const double tr_rho = rho.trace().real();
    if (eta <= 0 || eta > 1 + 1e-12)
        throw std::invalid_argument("d_hyp: eta must lie in (0, 1]");
    if (eta > tr_rho + 1e-12)
        throw std::invalid_argument("d_hyp: eta exceeds tr(rho); test constraint infeasible");

    const Matrix si = psd_inv_sqrt_on_support(sigma);
    Matrix rel = si * rho * si;
    rel = 0.5 * (rel + rel.adjoint().eval());
    double hi = std::max(1.0, lambda_max(rel)) + 1.0;
    double lo = 0.0;

    auto build = [&](double mu, const NpPoint& p) -> NpSolution {
        double t = 0.0;
        if (p.rho_border > 1e-300) t = (eta - p.rho_pos) / p.rho_border;
        t = std::clamp(t, 0.0, 1.0);
        NpSolution s;
        s.q = p.proj_pos + t * p.proj_border;
        s.beta_sigma = p.sigma_pos + t * p.sigma_border;
        s.mu_np = mu;
        s.value = -std::log(std::max(s.beta_sigma, 1e-300) / eta);
        return s;
    };

    // β(μ) = tr[ρ Proj{ρ−μσ>0}] is nonincreasing; bisect until η lands inside
    // [ρ_pos, ρ_pos + ρ_border], then weight the boundary fractionally so that
    // tr[ρQ] = η exactly.
    NpPoint p0 = np_point(rho, sigma, lo);
    if (p0.rho_pos <= eta) return build(lo, p0);
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        NpPoint p = np_point(rho, sigma, mid);
        if (p.rho_pos > eta)
            lo = mid;
        else if (p.rho_pos + p.rho_border < eta)
            hi = mid;
        else
            return build(mid, p);
        if (hi - lo < 1e-15 * (1.0 + hi)) break;
    }
    NpPoint p = np_point(rho, sigma, lo);
    return build(lo, p);  // feasible side: tr[ρQ] ≥ η
}

Matrix clip_psd(const Matrix& a, double hi = std::numeric_limits<double>::infinity()) {
    EigResult e = eig_hermitian(Matrix(0.5 * (a + a.adjoint().eval())));
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    for (int i = 0; i < e.values.size(); ++i) {
        const double v = std::clamp(e.values(i), 0.0, hi);
        if (v > 0) out += v * e.vectors.col(i) * e.vectors.col(i).adjoint();
    }
    return out;
}

// Solves the primal SDP and rounds the iterate to an exactly feasible test,
// giving a certified upper bound on the optimal error probability.
double sdp_primal_value(const Matrix& rho, const Matrix& sigma, double eta) {
    const int d = static_cast<int>(rho.rows());
    sdp::SdpProblem p;
    const int q = p.add_block(d);
    const int s = p.add_block(d);
    p.add_objective(q, sigma);
    p.add_matrix_equality({sdp::SdpProblem::MatrixTerm{q, [](const Matrix& b) { return b; }},
                           sdp::SdpProblem::MatrixTerm{s, [](const Matrix& b) { return b; }}},
                          Matrix::Identity(d, d));
    p.add_constraint({sdp::Term{q, rho}}, sdp::Relation::GreaterEq, eta);
    auto sol = sdp::solve(p, 1e-10, 300);
    // feasibility rounding certifies any returned iterate, so a stalled solve
    // with good residuals is still usable
    if (sol.status != sdp::Status::Optimal && sol.primal_residual > 1e-7)
        throw CertificationError("d_hyp: primal SDP did not reach optimality");
    // round: clip Q into [0, I], then mix toward I until tr[ρQ] ≥ η
    Matrix qm = clip_psd(sol.primal[q], 1.0);
    const double overlap = (qm * rho).trace().real();
    const double tr_rho = rho.trace().real();
    if (overlap < eta) {
        const double t =
            (tr_rho - overlap > 1e-300) ? (eta - overlap) / (tr_rho - overlap) : 1.0;
        qm = qm + std::min(1.0, t) * (Matrix::Identity(d, d) - qm);
    }
    return (qm * sigma).trace().real();
}

// Solves the dual SDP and rounds (μ, X) to exact feasibility μρ ≤ σ + X,
// giving a certified lower bound on the optimal error probability.
double sdp_dual_value(const Matrix& rho, const Matrix& sigma, double eta) {
    const int d = static_cast<int>(rho.rows());
    sdp::SdpProblem p;
    const int mu = p.add_block(1);
    const int x = p.add_block(d);
    const int t = p.add_block(d);  // T = σ + X − μρ ⪰ 0
    p.set_sense(sdp::Sense::Maximize);
    Matrix eta_m(1, 1);
    eta_m(0, 0) = eta;
    p.add_objective(mu, eta_m);
    p.add_objective(x, Matrix(-Matrix::Identity(d, d)));
    p.add_matrix_equality(
        {sdp::SdpProblem::MatrixTerm{t, [](const Matrix& b) { return b; }},
         sdp::SdpProblem::MatrixTerm{x, [](const Matrix& b) { return Matrix(-b); }},
         sdp::SdpProblem::MatrixTerm{mu,
                                     [&rho](const Matrix& b) {
                                         Matrix c(1, 1);
                                         c(0, 0) = (b * rho).trace().real();
                                         return c;
                                     }}},
        sigma);
    auto sol = sdp::solve(p, 1e-10, 300);
    if (sol.status != sdp::Status::Optimal && sol.primal_residual > 1e-7)
        throw CertificationError("d_hyp: dual SDP did not reach optimality");
    const double mu_v = std::max(0.0, sol.primal[mu](0, 0).real());
    Matrix xm = clip_psd(sol.primal[x]);
    xm += clip_psd(Matrix(mu_v * rho - sigma - xm));  // absorb any violation
    return mu_v * eta - xm.trace().real();  // = feasible μη − tr X
}

}  // namespace

DivergenceResult d_hyp(const SubnormalizedState& rho, const HermitianOperator& sigma,
                       double eta, bool certify) {
    require_support(rho, sigma);
    NpSolution np = np_solve(rho.matrix(), sigma.matrix(), eta);

    DivergenceResult r;
    r.value = np.value;
    r.test_q = np.q;
    double width = 1e-9;
    if (np.mu_np > 1e-300) {
        const double mu_dual = 1.0 / np.mu_np;
        Matrix diff = mu_dual * rho.matrix() - sigma.matrix();
        diff = 0.5 * (diff + diff.adjoint().eval());
        EigResult e = eig_hermitian(diff);
        Matrix xpos = Matrix::Zero(rho.dim(), rho.dim());
        for (int i = 0; i < e.values.size(); ++i)
            if (e.values(i) > 0)
                xpos += e.values(i) * e.vectors.col(i) * e.vectors.col(i).adjoint();
        r.mu = mu_dual;
        r.dual_x = xpos;
    }

    if (certify) {
        // both SDP values are rounded to exact feasibility, so the error
        // probabilities bracket the optimum and weak duality is structural
        const double v_primal = sdp_primal_value(rho.matrix(), sigma.matrix(), eta);
        const double v_dual = sdp_dual_value(rho.matrix(), sigma.matrix(), eta);
        if (v_dual > v_primal + 1e-9)
            throw CertificationError("d_hyp: weak duality violated by SDP pair");
        const double d_lower = -std::log(std::max(v_primal, 1e-300) / eta);
        const double d_upper = -std::log(std::max(v_dual, 1e-300) / eta);
        const double dev = std::max(std::abs(np.value - d_lower), std::abs(np.value - d_upper));
        if (dev > 1e-6)
            throw CertificationError("d_hyp: NP and SDP disagree by " + std::to_string(dev));
        r.lower = std::min(d_lower, r.value);
        r.upper = std::max(d_upper, r.value);
        return r;
    }
    r.lower = r.value - width;
    r.upper = r.value + width;
    return r;
}

// ── Smooth divergences ───────────────────────────────────────────────────────

namespace {

bool commuting(const Matrix& a, const Matrix& b) {
    const double scale = std::max(1.0, operator_norm(a) * operator_norm(b));
    return operator_norm(a * b - b * a) <= 1e-12 * scale;
}

struct CommonDiag {
    Matrix basis;  // columns
    RealVector p;  // ρ atoms
    RealVector s;  // σ atoms
};

CommonDiag common_diag(const Matrix& rho, const Matrix& sigma) {
    // diagonalize σ, then ρ within each degenerate σ-eigenspace
    EigResult es = eig_hermitian(sigma);
    const int d = static_cast<int>(rho.rows());
    Matrix basis = es.vectors;
    int i = 0;
    while (i < d) {
        int j = i + 1;
        while (j < d &&
               std::abs(es.values(j) - es.values(i)) < 1e-10 * (1.0 + std::abs(es.values(i))))
            ++j;
        if (j - i > 1) {
            Matrix sub = basis.middleCols(i, j - i);
            Matrix rr = sub.adjoint() * rho * sub;
            rr = 0.5 * (rr + rr.adjoint().eval());
            EigResult er = eig_hermitian(rr);
            basis.middleCols(i, j - i) = sub * er.vectors;
        }
        i = j;
    }
    CommonDiag out;
    out.basis = basis;
    out.p = RealVector(d);
    out.s = RealVector(d);
    for (int k = 0; k < d; ++k) {
        out.p(k) = (basis.col(k).adjoint() * rho * basis.col(k)).value().real();
        out.s(k) = (basis.col(k).adjoint() * sigma * basis.col(k)).value().real();
    }
    return out;
}

// visit every subset D of atoms with p(D) ≤ budget (with pruning); the visit
// budget guards against adversarial spectra with many near-zero atoms
constexpr long kSubsetVisitCap = 1L << 23;

void enumerate_droppable_impl(const RealVector& p, double budget, size_t idx, double used,
                              std::vector<int>& current, long& visits,
                              const std::function<void(const std::vector<int>&)>& visit) {
    if (++visits > kSubsetVisitCap)
        throw CapExceeded("smoothing: subset enumeration exceeds the visit cap");
    visit(current);
    for (size_t i = idx; i < static_cast<size_t>(p.size()); ++i) {
        if (used + p(i) > budget + 1e-15) continue;
        current.push_back(static_cast<int>(i));
        enumerate_droppable_impl(p, budget, i + 1, used + p(i), current, visits, visit);
        current.pop_back();
    }
}

void enumerate_droppable(const RealVector& p, double budget, size_t idx, double used,
                         std::vector<int>& current,
                         const std::function<void(const std::vector<int>&)>& visit) {
    long visits = 0;
    enumerate_droppable_impl(p, budget, idx, used, current, visits, visit);
}

// exact commuting d_half_smooth kernel: minimize Σ√((p−b)_i s_i) over the
// polytope {0 ≤ b ≤ p, Σ b ≤ ε}; concave objective, so a vertex is optimal
std::pair<double, RealVector> commuting_min_fidelity(const RealVector& p, const RealVector& s,
                                                     double eps) {
    const int d = static_cast<int>(p.size());
    double best = std::numeric_limits<double>::infinity();
    RealVector best_b = RealVector::Zero(d);
    auto eval = [&](const RealVector& b) {
        double f = 0;
        for (int i = 0; i < d; ++i)
            f += std::sqrt(std::max(0.0, p(i) - b(i)) * std::max(0.0, s(i)));
        return f;
    };
    std::vector<int> cur;
    enumerate_droppable(p, eps, 0, 0.0, cur, [&](const std::vector<int>& drop) {
        RealVector b = RealVector::Zero(d);
        double used = 0;
        for (int i : drop) {
            b(i) = p(i);
            used += p(i);
        }
        const double rest = eps - used;
        double f = eval(b);
        if (f < best) {
            best = f;
            best_b = b;
        }
        // vertices have at most one fractional coordinate
        for (int j = 0; j < d && rest > 0; ++j) {
            if (b(j) > 0) continue;
            RealVector b2 = b;
            b2(j) = std::min(p(j), rest);
            f = eval(b2);
            if (f < best) {
                best = f;
                best_b = b2;
            }
        }
    });
    return {best, best_b};
}

// max tr[Z B] over 0 ⪯ B ⪯ ρ, tr B ≤ ε (the shaving step of the descent)
Matrix max_overlap_shave(const Matrix& z, const Matrix& rho, double eps) {
    const int d = static_cast<int>(rho.rows());
    sdp::SdpProblem p;
    const int b = p.add_block(d);
    const int s = p.add_block(d);  // s = ρ − B ⪰ 0
    p.set_sense(sdp::Sense::Maximize);
    p.add_objective(b, z);
    p.add_matrix_equality({sdp::SdpProblem::MatrixTerm{b, [](const Matrix& e) { return e; }},
                           sdp::SdpProblem::MatrixTerm{s, [](const Matrix& e) { return e; }}},
                          rho);
    p.add_constraint({sdp::Term{b, Matrix(Matrix::Identity(d, d))}}, sdp::Relation::LessEq, eps);
    auto sol = sdp::solve(p);
    if (sol.status != sdp::Status::Optimal) return Matrix::Zero(d, d);
    return sol.primal[b];
}

}  // namespace

DivergenceResult d_max_smooth(const SubnormalizedState& rho, const HermitianOperator& sigma,
                              double eps) {
    require_support(rho, sigma);
    if (eps < 0) throw std::invalid_argument("d_max_smooth: eps >= 0 required");
    if (eps == 0) {
        DivergenceResult r = d_max(rho, sigma);
        r.smooth_tau = rho.matrix();
        return r;
    }
    const int d = rho.dim();
    const double tr_rho = rho.trace();

    double best = std::numeric_limits<double>::infinity();
    double best_dual = -std::numeric_limits<double>::infinity();
    Matrix best_tau;
    // |tr τ − tr ρ| in the ball constraint split into two linear branches
    for (int branch : {+1, -1}) {
        sdp::SdpProblem p;
        const int tau = p.add_block(d);
        const int a = p.add_block(d);
        const int b = p.add_block(d);
        const int lam = p.add_block(1);
        const int slack = p.add_block(d);  // slack = λσ − τ
        Matrix one(1, 1);
        one(0, 0) = 1.0;
        p.add_objective(lam, one);
        p.add_matrix_equality(
            {sdp::SdpProblem::MatrixTerm{slack, [](const Matrix& bb) { return bb; }},
             sdp::SdpProblem::MatrixTerm{tau, [](const Matrix& bb) { return bb; }},
             sdp::SdpProblem::MatrixTerm{lam,
                                         [&sigma](const Matrix& bb) {
                                             Matrix c(1, 1);
                                             c(0, 0) = -(bb * sigma.matrix()).trace().real();
                                             return c;
                                         }}},
            Matrix(Matrix::Zero(d, d)));
        // τ − A + B = ρ
        p.add_matrix_equality(
            {sdp::SdpProblem::MatrixTerm{tau, [](const Matrix& bb) { return bb; }},
             sdp::SdpProblem::MatrixTerm{a, [](const Matrix& bb) { return Matrix(-bb); }},
             sdp::SdpProblem::MatrixTerm{b, [](const Matrix& bb) { return bb; }}},
            rho.matrix());
        const Matrix id = Matrix::Identity(d, d);
        p.add_constraint({sdp::Term{tau, id}}, sdp::Relation::LessEq, 1.0);
        if (branch == +1) {
            p.add_constraint({sdp::Term{tau, id}}, sdp::Relation::GreaterEq, tr_rho);
            // ½tr(A+B) + ½(tr τ − tr ρ) ≤ ε
            p.add_constraint({sdp::Term{a, Matrix(0.5 * id)}, sdp::Term{b, Matrix(0.5 * id)},
                              sdp::Term{tau, Matrix(0.5 * id)}},
                             sdp::Relation::LessEq, eps + 0.5 * tr_rho);
        } else {
            p.add_constraint({sdp::Term{tau, id}}, sdp::Relation::LessEq, tr_rho);
            p.add_constraint({sdp::Term{a, Matrix(0.5 * id)}, sdp::Term{b, Matrix(0.5 * id)},
                              sdp::Term{tau, Matrix(-0.5 * id)}},
                             sdp::Relation::LessEq, eps - 0.5 * tr_rho);
        }
        auto sol = sdp::solve(p);
        if (sol.status != sdp::Status::Optimal) continue;
        if (sol.value < best) {
            best = sol.value;
            best_dual = sol.dual_value;
            best_tau = sol.primal[tau];
        }
    }
    if (!std::isfinite(best))
        throw CertificationError("d_max_smooth: no branch reached optimality");
    DivergenceResult r;
    r.value = std::log(std::max(best, 1e-300));
    r.lower = std::log(std::max(std::min(best_dual, best), 1e-300));
    r.upper = r.value;
    r.smooth_tau = best_tau;
    return r;
}

DivergenceResult d_half_smooth(const SubnormalizedState& rho, const HermitianOperator& sigma,
                               double eps) {
    require_support(rho, sigma);
    if (eps < 0) throw std::invalid_argument("d_half_smooth: eps >= 0 required");
    if (eps == 0) {
        DivergenceResult r = d_min_half(rho, sigma);
        r.smooth_tau = rho.matrix();
        return r;
    }
    const int d = rho.dim();

    // The optimum can be taken of the form τ = ρ − B with B ⪰ 0, tr B ≤ ε:
    // dropping the added part of any ball member keeps it in the ball (the
    // generalized trace distance is max(tr A, tr B) for orthogonal parts) and
    // the fidelity is monotone in its first argument.
    if (commuting(rho.matrix(), sigma.matrix())) {
        CommonDiag cd = common_diag(rho.matrix(), sigma.matrix());
        auto [f, b] = commuting_min_fidelity(cd.p, cd.s, eps);
        Matrix tau = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i)
            tau += std::max(0.0, cd.p(i) - b(i)) * cd.basis.col(i) * cd.basis.col(i).adjoint();
        DivergenceResult r = exact(-2.0 * std::log(std::max(f, 1e-300)));
        r.smooth_tau = tau;
        return r;
    }

    // noncommuting: multi-start alternating descent on F(ρ−B, σ)
    auto fid_of = [&](const Matrix& tau) { return fidelity(tau, sigma.matrix()); };
    std::vector<Matrix> starts;
    starts.push_back(rho.matrix());
    {
        // greedy shave in ρ's eigenbasis against diagonal σ-overlaps
        EigResult er = eig_hermitian(rho.op());
        RealVector p(d), s(d);
        for (int i = 0; i < d; ++i) {
            p(i) = std::max(0.0, er.values(i));
            s(i) =
                (er.vectors.col(i).adjoint() * sigma.matrix() * er.vectors.col(i)).value().real();
        }
        auto [f, b] = commuting_min_fidelity(p, s, eps);
        (void)f;
        Matrix tau = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i)
            tau += std::max(0.0, p(i) - b(i)) * er.vectors.col(i) * er.vectors.col(i).adjoint();
        starts.push_back(tau);
    }

    double best_f = std::numeric_limits<double>::infinity();
    Matrix best_tau = rho.matrix();
    for (const auto& start : starts) {
        Matrix tau = start;
        double f = fid_of(tau);
        if (f < best_f) {
            best_f = f;
            best_tau = tau;
        }
        for (int round = 0; round < 6; ++round) {
            // Alberti point of the current τ: F(τ,σ) = ½ min_Z (tr[Zτ] + tr[Z⁻¹σ])
            Matrix reg = tau + 1e-12 * Matrix::Identity(d, d);
            Matrix rh = psd_sqrt(reg);
            Matrix rhi = psd_inv_sqrt_on_support(reg, 1e-14);
            Matrix mid = psd_sqrt(Matrix(rh * sigma.matrix() * rh), 1e-8);
            Matrix z = rhi * mid * rhi;
            z = 0.5 * (z + z.adjoint().eval());
            Matrix b = max_overlap_shave(z, rho.matrix(), eps);
            Matrix cand = rho.matrix() - b;
            cand = 0.5 * (cand + cand.adjoint().eval());
            EigResult e = eig_hermitian(cand);
            Matrix tau2 = Matrix::Zero(d, d);
            for (int i = 0; i < d; ++i)
                if (e.values(i) > 0)
                    tau2 += e.values(i) * e.vectors.col(i) * e.vectors.col(i).adjoint();
            const double f2 = fid_of(tau2);
            if (f2 < f - 1e-12) {
                f = f2;
                tau = tau2;
                if (f < best_f) {
                    best_f = f;
                    best_tau = tau;
                }
            } else {
                break;
            }
        }
    }
    DivergenceResult r = exact(-2.0 * std::log(std::max(best_f, 1e-300)));
    r.smooth_tau = best_tau;
    return r;
}

DivergenceResult d_zero_smooth(const SubnormalizedState& rho, const HermitianOperator& sigma,
                               double eps) {
    require_support(rho, sigma);
    if (eps < 0) throw std::invalid_argument("d_zero_smooth: eps >= 0 required");
    if (eps == 0) return d_min_zero(rho, sigma);
    const int d = rho.dim();

    if (commuting(rho.matrix(), sigma.matrix()) && d <= 22) {
        // exact: drop a subset of atoms of total ρ-mass ≤ ε; the kept support
        // minimizes its σ-weight
        CommonDiag cd = common_diag(rho.matrix(), sigma.matrix());
        const double cutoff = kRankTolRel * std::max(1e-300, cd.p.maxCoeff());
        double best = -std::numeric_limits<double>::infinity();
        std::vector<int> best_drop;
        std::vector<int> cur;
        enumerate_droppable(cd.p, eps, 0, 0.0, cur, [&](const std::vector<int>& drop) {
            double sig = 0;
            std::vector<bool> dropped(d, false);
            for (int i : drop) dropped[i] = true;
            for (int i = 0; i < d; ++i)
                if (!dropped[i] && cd.p(i) > cutoff) sig += cd.s(i);
            const double v = -std::log(std::max(sig, 1e-300));
            if (v > best) {
                best = v;
                best_drop = drop;
            }
        });
        Matrix tau = rho.matrix();
        for (int i : best_drop) tau -= cd.p(i) * cd.basis.col(i) * cd.basis.col(i).adjoint();
        DivergenceResult r = exact(best);
        r.smooth_tau = 0.5 * (tau + tau.adjoint().eval());
        return r;
    }

    // noncommuting: certified interval only (support optimization ranges over
    // all subspaces and is not convex); interval from the D_H sandwiches.
    DivergenceResult r;
    r.interval_only = true;
    const double e2 = eps * eps / 6.0;
    DivergenceResult low = d_hyp(rho, sigma, 1.0 - e2, false);
    DivergenceResult high = d_hyp(rho, sigma, 1.0 - eps, false);
    r.lower = std::max(low.value - std::log((1.0 - e2) / e2), d_min_zero(rho, sigma).value);
    r.upper = high.value - std::log(1.0 - eps);
    r.value = r.lower;
    return r;
}

SmoothEntropies smooth_entropies(const SubnormalizedState& rho, double eps) {
    auto id = HermitianOperator::identity(rho.dim());
    auto negate = [](const DivergenceResult& r) {
        DivergenceResult out = r;
        out.value = -r.value;
        out.lower = -r.upper;
        out.upper = -r.lower;
        return out;
    };
    SmoothEntropies out;
    out.h_min = negate(d_max_smooth(rho, id, eps));
    out.h_max = negate(d_zero_smooth(rho, id, eps));
    return out;
}

}  // namespace oneshot
