#include "oneshot/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oneshot::thermo {

namespace {

Matrix herm(const Matrix& a) { return 0.5 * (a + a.adjoint().eval()); }

bool commutes(const Matrix& a, const Matrix& b, double tol = 1e-10) {
    const double scale = std::max(1.0, operator_norm(a) * operator_norm(b));
    return operator_norm(a * b - b * a) <= tol * scale;
}

}  // namespace

// ── Gibbs data ───────────────────────────────────────────────────────────────

GibbsSpec gibbs(const HermitianOperator& h, double beta) {
    if (beta <= 0) throw std::invalid_argument("gibbs: beta > 0 required");
    EigResult e = eig_hermitian(h);
    RealVector w = (-beta * e.values.array()).exp();
    Matrix weight = herm(e.vectors * w.asDiagonal() * e.vectors.adjoint());
    const double z = w.sum();
    return GibbsSpec{h, beta, weight, Matrix(weight / z), z, -std::log(z) / beta};
}

// ── Discretization ───────────────────────────────────────────────────────────

BinnedHamiltonian discretize(const HermitianOperator& h, double delta) {
    if (delta <= 0) throw std::invalid_argument("discretize: delta > 0 required");
    EigResult e = eig_hermitian(h);
    const int d = h.dim();
    // floor clamp with a tiny forward nudge so exact multiples stay put
    auto bin_of = [&](double energy) {
        return static_cast<long>(std::floor(energy / delta + 1e-9));
    };
    const long kmin = bin_of(e.values(0));
    const long kmax = bin_of(e.values(d - 1));
    const int k0 = static_cast<int>(kmin);
    const int m = static_cast<int>(kmax - kmin + 1);
    std::vector<double> energies(m);
    std::vector<Matrix> blocks(m, Matrix::Zero(d, d));
    for (int k = 0; k < m; ++k) energies[k] = (k + k0) * delta;
    for (int i = 0; i < d; ++i) {
        const int k = static_cast<int>(bin_of(e.values(i)) - kmin);
        blocks[k] += e.vectors.col(i) * e.vectors.col(i).adjoint();
    }
    Matrix binned = Matrix::Zero(d, d);
    for (int k = 0; k < m; ++k) binned += energies[k] * blocks[k];
    return BinnedHamiltonian{h, delta, k0, m, std::move(energies), std::move(blocks),
                             herm(binned)};
}

// ── Coherence modes ──────────────────────────────────────────────────────────

std::vector<Matrix> coherence_modes(const Matrix& rho, const BinnedHamiltonian& hb) {
    const int d = static_cast<int>(rho.rows());
    if (d != hb.original.dim()) throw DimensionMismatch("coherence_modes: dimension mismatch");
    std::vector<Matrix> modes(2 * hb.m - 1, Matrix::Zero(d, d));
    for (int a = 0; a < hb.m; ++a)
        for (int b = 0; b < hb.m; ++b)
            modes[(a - b) + hb.m - 1] += hb.blocks[a] * rho * hb.blocks[b];
    return modes;
}

Matrix time_average(const Matrix& rho, const BinnedHamiltonian& hb, int k_prime) {
    if (k_prime < 1) throw std::invalid_argument("time_average: K' >= 1 required");
    const int d = static_cast<int>(rho.rows());
    Matrix acc = Matrix::Zero(d, d);
    for (int n = 0; n < k_prime; ++n) {
        // e^{−2πin H'/(K'δ)} = Σ_k e^{−2πin(k+k0)/K'} P_k
        Matrix u = Matrix::Zero(d, d);
        for (int k = 0; k < hb.m; ++k) {
            const double phase = -2.0 * M_PI * n * (k + hb.k0) / double(k_prime);
            u += Cx(std::cos(phase), std::sin(phase)) * hb.blocks[k];
        }
        acc += u * rho * u.adjoint();
    }
    return herm(acc / double(k_prime));
}

// ── Suppression check ────────────────────────────────────────────────────────

SuppressionReport suppression_check(const SubnormalizedState& rho, const BinnedHamiltonian& hb,
                                    double beta, double s_mid, double delta_prime) {
    auto wprime = HermitianOperator(gibbs(HermitianOperator(hb.binned), beta).weight);
    SuppressionReport rep;
    rep.d_max_value = d_max(rho, wprime).value;
    rep.d_half_value = d_min_half(rho, wprime).value;
    if (rep.d_max_value > s_mid + delta_prime + 1e-9)
        throw PreconditionError("suppression_check: D_max exceeds S + Delta'");
    if (rep.d_half_value < s_mid - delta_prime - 1e-9)
        throw PreconditionError("suppression_check: D_1/2 below S - Delta'");
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < hb.m; ++k)
        for (int kp = 0; kp < hb.m; ++kp) {
            const Matrix blk = hb.blocks[k] * rho.matrix() * hb.blocks[kp];
            const double norm1 = trace_norm(blk);
            const double bound =
                std::exp(-beta * std::abs(hb.energies[k] - hb.energies[kp]) / 2.0 + delta_prime);
            worst = std::min(worst, bound - norm1);
        }
    rep.worst_slack = worst;
    return rep;
}

// ── Smoothing candidate ──────────────────────────────────────────────────────

SmoothingCandidate smoothing_candidate(const SubnormalizedState& rho,
                                       const BinnedHamiltonian& hb, double beta, double eps) {
    if (eps < 0 || eps >= 0.01)
        throw std::invalid_argument("smoothing_candidate: 0 <= eps < 1/100 required");
    const int d = rho.dim();
    const auto g_orig = gibbs(hb.original, beta);
    const auto g_binned = gibbs(HermitianOperator(hb.binned), beta);
    const auto w = g_orig.weight_op();
    const auto wp = g_binned.weight_op();
    const Matrix gamma_p = g_binned.state;

    // S and Δ from the ε-smoothed divergences against the original weight
    const double a_max = d_max_smooth(rho, w, eps).value;
    const double b_half = d_half_smooth(rho, w, eps).value;
    const double s_mid = 0.5 * (a_max + b_half);
    const double delta = 0.5 * std::abs(a_max - b_half);

    // ρ': optimizer of the smoothed Rényi-1/2 divergence against e^{−βH'}
    auto half_res = d_half_smooth(rho, wp, eps);
    const Matrix rho_prime = *half_res.smooth_tau;

    // relaxed program: min α s.t. ρ' ≤ αγ' + F, F ⪰ 0, tr F ≤ 2ε
    sdp::SdpProblem p;
    const int alpha_b = p.add_block(1);
    const int f_b = p.add_block(d);
    const int slack_b = p.add_block(d);  // slack = αγ' + F − ρ'
    Matrix one(1, 1);
    one(0, 0) = 1.0;
    p.add_objective(alpha_b, one);
    p.add_matrix_equality(
        {sdp::SdpProblem::MatrixTerm{slack_b, [](const Matrix& b) { return b; }},
         sdp::SdpProblem::MatrixTerm{f_b, [](const Matrix& b) { return Matrix(-b); }},
         sdp::SdpProblem::MatrixTerm{alpha_b,
                                     [&gamma_p](const Matrix& b) {
                                         Matrix c(1, 1);
                                         c(0, 0) = -(b * gamma_p).trace().real();
                                         return c;
                                     }}},
        Matrix(-rho_prime));
    p.add_constraint({sdp::Term{f_b, Matrix(Matrix::Identity(d, d))}}, sdp::Relation::LessEq,
                     2.0 * eps);
    auto sol = sdp::solve(p);
    if (sol.status != sdp::Status::Optimal)
        throw CertificationError("smoothing_candidate: relaxed max-divergence program failed");
    const double alpha = sol.value;
    Matrix f = herm(sol.primal[f_b]);

    // G = γ'^{1/2} (γ' + α⁻¹ D_{H'}(F))^{−1/2}
    Matrix f_pinched = pinch(f, hb.blocks);
    // clip solver round-off so the pinched correction stays PSD
    {
        EigResult ef = eig_hermitian(f_pinched);
        f_pinched = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i)
            if (ef.values(i) > 0)
                f_pinched += ef.values(i) * ef.vectors.col(i) * ef.vectors.col(i).adjoint();
    }
    Matrix inner = herm(gamma_p + f_pinched / std::max(alpha, 1e-300));
    Matrix g_op = psd_sqrt(gamma_p, 1e-8) * psd_inv_sqrt_on_support(inner, 1e-14);
    Matrix g_tau = herm(g_op * rho_prime * g_op.adjoint());
    const double t = g_tau.trace().real();
    if (t <= 0) throw CertificationError("smoothing_candidate: collapsed candidate");
    Matrix tau = g_tau / t;

    SmoothingCandidate out;
    out.tau = tau;
    out.alpha = alpha;
    out.s_mid = s_mid;
    out.delta_prime = delta + beta * hb.delta + std::log(double(hb.m)) - std::log(t);
    out.dist_to_rho = trace_distance(SubnormalizedState(tau), rho);
    if (out.dist_to_rho > 10.0 * std::sqrt(eps) + 1e-9)
        throw CertificationError("smoothing_candidate: candidate drifted beyond 10*sqrt(eps)");
    return out;
}

// ── Thermomajorization ───────────────────────────────────────────────────────

double ThermoCurve::operator()(double x) const {
    if (x <= 0) return 0;
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t i = static_cast<size_t>(it - xs.begin());
    const double x0 = xs[i - 1], x1 = xs[i];
    const double y0 = ys[i - 1], y1 = ys[i];
    if (x1 - x0 < 1e-300) return std::max(y0, y1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

ThermoCurve curve_from_atoms(const RealVector& populations, const RealVector& weights) {
    const int n = static_cast<int>(populations.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const double ra = populations(a) / std::max(weights(a), 1e-300);
        const double rb = populations(b) / std::max(weights(b), 1e-300);
        return ra > rb;
    });
    ThermoCurve c;
    c.xs.push_back(0);
    c.ys.push_back(0);
    double x = 0, y = 0;
    for (int i : idx) {
        x += weights(i);
        y += populations(i);
        c.xs.push_back(x);
        c.ys.push_back(y);
    }
    return c;
}

bool curve_dominates(const ThermoCurve& a, const ThermoCurve& b, double tol) {
    // both curves are concave piecewise linear, so checking b's breakpoints
    // (plus the flat tails) decides domination
    for (size_t i = 0; i < b.xs.size(); ++i)
        if (a(b.xs[i]) < b.ys[i] - tol) return false;
    if (a.xs.back() > b.xs.back() && a.ys.back() < b.ys.back() - tol) return false;
    return true;
}

namespace {

RealVector semiclassical_populations(const SubnormalizedState& rho, const GibbsSpec& g,
                                     RealVector* weights_out) {
    if (!commutes(rho.matrix(), g.hamiltonian.matrix()))
        throw PreconditionError("thermomajorization: state is not semiclassical");
    // common eigenbasis: diagonalize H, then ρ within degenerate energy spaces
    EigResult eh = eig_hermitian(g.hamiltonian);
    const int d = rho.dim();
    Matrix basis = eh.vectors;
    int i = 0;
    while (i < d) {
        int j = i + 1;
        while (j < d &&
               std::abs(eh.values(j) - eh.values(i)) < 1e-10 * (1 + std::abs(eh.values(i))))
            ++j;
        if (j - i > 1) {
            Matrix sub = basis.middleCols(i, j - i);
            Matrix rr = herm(sub.adjoint() * rho.matrix() * sub);
            EigResult er = eig_hermitian(rr);
            basis.middleCols(i, j - i) = sub * er.vectors;
        }
        i = j;
    }
    RealVector p(d), w(d);
    for (int k = 0; k < d; ++k) {
        p(k) =
            std::max(0.0, (basis.col(k).adjoint() * rho.matrix() * basis.col(k)).value().real());
        w(k) = std::exp(-g.beta * eh.values(k));
    }
    if (weights_out) *weights_out = w;
    return p;
}

}  // namespace

ThermoCurve thermomajorization_curve(const SubnormalizedState& rho, const GibbsSpec& g) {
    RealVector w;
    RealVector p = semiclassical_populations(rho, g, &w);
    return curve_from_atoms(p, w);
}

bool tm_convertible(const SubnormalizedState& rho, const SubnormalizedState& rho_prime,
                    const GibbsSpec& g) {
    return curve_dominates(thermomajorization_curve(rho, g),
                           thermomajorization_curve(rho_prime, g), 1e-9);
}

// ── Work of transition ───────────────────────────────────────────────────────

DivergenceResult work_of_transition(const SubnormalizedState& rho, const GibbsSpec& g,
                                    double eps, Direction dir) {
    const auto w = g.weight_op();
    DivergenceResult base =
        (dir == Direction::Distill) ? d_zero_smooth(rho, w, eps) : d_max_smooth(rho, w, eps);
    DivergenceResult out = base;
    out.value = base.value / g.beta;
    out.lower = base.lower / g.beta;
    out.upper = base.upper / g.beta;
    return out;
}

// ── Measure-and-prepare GPM ──────────────────────────────────────────────────

GpmConstruction gpm_construct(const SubnormalizedState& rho, const SubnormalizedState& sigma,
                              const SubnormalizedState& rho_prime,
                              const SubnormalizedState& sigma_prime) {
    if (std::abs(sigma.trace() - 1.0) > 1e-9 || std::abs(sigma_prime.trace() - 1.0) > 1e-9)
        throw PreconditionError("gpm_construct: sigma and sigma' must be normalized");
    const double c = std::exp(-d_min_zero(rho, sigma.op()).value);
    const double c_prime = std::exp(-d_max(rho_prime, sigma_prime.op()).value);
    if (c_prime < c - 1e-12)
        throw PreconditionError("gpm_construct: requires D_max(rho'||sigma') <= D_0(rho||sigma)");

    const int d_in = rho.dim();
    auto kraus_for = [&](const Matrix& prep, const Matrix& outcome_proj, double weight,
                         std::vector<Matrix>& out) {
        if (weight <= 1e-15) return;
        EigResult ep = eig_hermitian(Matrix(herm(prep)));
        EigResult eo = eig_hermitian(Matrix(herm(outcome_proj)));
        for (int l = 0; l < ep.values.size(); ++l) {
            const double lam = ep.values(l);
            if (lam <= 1e-15) continue;
            for (int i = 0; i < eo.values.size(); ++i) {
                if (eo.values(i) < 0.5) continue;  // orthobasis of the outcome range
                out.push_back(std::sqrt(weight * lam) * ep.vectors.col(l) *
                              eo.vectors.col(i).adjoint());
            }
        }
    };

    Eigen::Matrix2d m;
    std::vector<Matrix> ks;
    if (c >= 1.0 - 1e-12) {
        // degenerate case: the premise forces c' = 1 and ρ' = σ'; constant map
        m << 1, 1, 0, 0;
        kraus_for(sigma_prime.matrix(), Matrix::Identity(d_in, d_in), 1.0, ks);
    } else {
        const double r = (1.0 - c_prime) / (1.0 - c);
        m << 1, 1 - r, 0, r;
        Matrix sigma_rest =
            (c_prime >= 1.0 - 1e-12)
                ? rho_prime.matrix()
                : Matrix((sigma_prime.matrix() - c_prime * rho_prime.matrix()) / (1 - c_prime));
        const Matrix p_rho = *d_min_zero(rho, sigma.op()).test_q;
        const Matrix p_comp = Matrix::Identity(d_in, d_in) - p_rho;
        kraus_for(rho_prime.matrix(), p_rho, m(0, 0), ks);
        kraus_for(sigma_rest, p_rho, m(1, 0), ks);
        kraus_for(rho_prime.matrix(), p_comp, m(0, 1), ks);
        kraus_for(sigma_rest, p_comp, m(1, 1), ks);
    }
    return GpmConstruction{Channel(std::move(ks), true), m, c, c_prime};
}

GibbsSubReport is_gibbs_subpreserving(const Channel& e, const GibbsSpec& g_in,
                                      const GibbsSpec& g_out, double tol) {
    const Matrix gap = e.apply(g_in.weight) - g_out.weight;
    const double slack = lambda_max(herm(gap));
    return GibbsSubReport{slack <= tol, slack};
}

// ── Energy-conserving isometries ─────────────────────────────────────────────

bool energy_conserving_check(const Matrix& v, const HermitianOperator& h_in,
                             const HermitianOperator& h_out) {
    const Matrix vv = v.adjoint() * v;
    const Matrix ww = v * v.adjoint();
    if (operator_norm(vv * vv - vv) > 1e-10) return false;
    if (operator_norm(ww * ww - ww) > 1e-10) return false;
    return operator_norm(v * h_in.matrix() - h_out.matrix() * v) <= 1e-9;
}

DilationResult dilate_isometry(const Matrix& v, const HermitianOperator& h_in,
                               const HermitianOperator& h_out, int f_index, int i_index,
                               const LadderSpec& ladder) {
    if (!energy_conserving_check(v, h_in, h_out))
        throw PreconditionError(
            "dilate_isometry: V is not an energy-conserving partial isometry");
    const int dk = h_in.dim();
    const int dl = h_out.dim();
    const int dw = static_cast<int>(ladder.levels.size());
    EigResult ek = eig_hermitian(h_in);
    EigResult el = eig_hermitian(h_out);
    const double e_f = ek.values(f_index);
    const double e_i = el.values(i_index);
    const double q_i = ladder.levels.at(ladder.idx_initial);
    const double q_f = ladder.levels.at(ladder.idx_final);
    if (std::abs((e_i + q_i) - (e_f + q_f)) > 1e-9)
        throw PreconditionError("dilate_isometry: battery levels do not balance the energies");

    const long dim = static_cast<long>(dk) * dl * dw;
    auto flat = [&](long k, long l, long w) { return (k * dl + l) * dw + w; };

    // Ŵ = V_{K→L} ⊗ |f⟩_K⟨i|_L ⊗ |E'⟩⟨E|_W in the product energy eigenbasis
    const Matrix v_eig = el.vectors.adjoint() * v * ek.vectors;
    Matrix w_op = Matrix::Zero(dim, dim);
    for (int a = 0; a < dk; ++a)
        for (int b = 0; b < dl; ++b) {
            if (std::abs(v_eig(b, a)) < 1e-300) continue;
            w_op(flat(f_index, b, ladder.idx_final), flat(a, i_index, ladder.idx_initial)) +=
                v_eig(b, a);
        }

    std::vector<double> energy(dim);
    for (int k = 0; k < dk; ++k)
        for (int l = 0; l < dl; ++l)
            for (int w = 0; w < dw; ++w)
                energy[flat(k, l, w)] = ek.values(k) + el.values(l) + ladder.levels[w];

    // complete Ŵ to a unitary, one total-energy shell at a time
    std::vector<long> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](long a, long b) { return energy[a] < energy[b]; });
    Matrix u = Matrix::Zero(dim, dim);
    size_t pos = 0;
    while (pos < order.size()) {
        size_t end = pos + 1;
        while (end < order.size() && energy[order[end]] - energy[order[pos]] < 1e-9) ++end;
        const long ns = static_cast<long>(end - pos);
        Matrix ws(ns, ns);
        for (long r = 0; r < ns; ++r)
            for (long q = 0; q < ns; ++q) ws(r, q) = w_op(order[pos + r], order[pos + q]);
        // extend the shell partial isometry by mapping a kernel orthobasis
        // onto a corange orthobasis
        EigResult esupp = eig_hermitian(Matrix(herm(ws.adjoint() * ws)));
        EigResult erange = eig_hermitian(Matrix(herm(ws * ws.adjoint())));
        std::vector<int> kernel, corange;
        for (int t = 0; t < ns; ++t) {
            if (esupp.values(t) < 0.5) kernel.push_back(t);
            if (erange.values(t) < 0.5) corange.push_back(t);
        }
        Matrix us = ws;
        for (size_t t = 0; t < kernel.size(); ++t)
            us += erange.vectors.col(corange[t]) * esupp.vectors.col(kernel[t]).adjoint();
        for (long r = 0; r < ns; ++r)
            for (long q = 0; q < ns; ++q) u(order[pos + r], order[pos + q]) = us(r, q);
        pos = end;
    }

    // back to the computational product basis
    Matrix basis = tensor(tensor(ek.vectors, el.vectors), Matrix::Identity(dw, dw));
    DilationResult out;
    out.u = basis * u * basis.adjoint();
    out.dim_k = dk;
    out.dim_l = dl;
    out.dim_w = dw;
    out.f_state = ek.vectors.col(f_index);
    out.i_state = el.vectors.col(i_index);
    return out;
}

// ── Reference-frame postselection ────────────────────────────────────────────

ReferenceFrameReport reference_frame_postselect(const SubnormalizedState& rho,
                                                const BinnedHamiltonian& hb, int d_c) {
    if (d_c < 1) throw std::invalid_argument("reference_frame_postselect: d_C >= 1 required");
    const int d = rho.dim();
    if (static_cast<long>(d) * d_c > (1 << 12))
        throw CapExceeded("reference_frame_postselect: joint dimension exceeds cap");
    const long dim = static_cast<long>(d) * d_c;
    auto flat = [&](long i, long l) { return i * d_c + l; };

    // joint state ρ ⊗ η, η = uniform superposition on the δ-spaced ladder
    Matrix joint = Matrix::Zero(dim, dim);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d_c; ++l)
                for (int lp = 0; lp < d_c; ++lp)
                    joint(flat(i, l), flat(j, lp)) = rho.matrix()(i, j) / double(d_c);

    // dephase in the joint energy shells of H' + H_C (shell index k + ℓ)
    Matrix dephased = Matrix::Zero(dim, dim);
    for (int s = 0; s <= hb.m - 1 + d_c - 1; ++s) {
        Matrix p = Matrix::Zero(dim, dim);
        for (int k = 0; k < hb.m; ++k) {
            const int l = s - k;
            if (l < 0 || l >= d_c) continue;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    if (std::abs(hb.blocks[k](i, j)) > 0)
                        p(flat(i, l), flat(j, l)) += hb.blocks[k](i, j);
        }
        dephased += p * joint * p;
    }

    // induced = d_C · ⟨η| D(ρ⊗η) |η⟩
    Matrix induced = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Cx acc = 0;
            for (int l = 0; l < d_c; ++l)
                for (int lp = 0; lp < d_c; ++lp) acc += dephased(flat(i, l), flat(j, lp));
            induced(i, j) = acc / double(d_c);
        }
    induced = herm(induced * double(d_c));

    ReferenceFrameReport rep;
    rep.induced = induced;
    rep.deviation = 0.5 * trace_norm(rho.matrix() - induced);
    // ½‖ρ − induced‖₁ ≤ K²/(2 d_C) + ½ m² ξ'(K); report the best K
    double best = std::numeric_limits<double>::infinity();
    for (int cap = 1; cap <= hb.m; ++cap) {
        double xi = 0;
        for (int k = 0; k < hb.m; ++k)
            for (int kp = 0; kp < hb.m; ++kp)
                if (std::abs(k - kp) >= cap)
                    xi = std::max(xi,
                                  trace_norm(Matrix(hb.blocks[k] * rho.matrix() * hb.blocks[kp])));
        best = std::min(best, cap * cap / (2.0 * d_c) + 0.5 * hb.m * hb.m * xi);
    }
    rep.bound = best;
    return rep;
}

// ── Quasi-monotonicity audit ─────────────────────────────────────────────────

QuasiMonotonicityReport quasi_monotonicity_audit(const SubnormalizedState& rho,
                                                 const SubnormalizedState& rho_prime,
                                                 const AssistedBudget& budget,
                                                 const GibbsSpec& g_in, const GibbsSpec& g_out,
                                                 double xi) {
    if (xi <= 0 || xi + budget.epsilon > 1)
        throw std::invalid_argument("quasi_monotonicity_audit: need 0 < xi and xi + eps <= 1");
    auto lhs_res = d_hyp(rho, g_in.weight_op(), xi, false);
    auto rhs_res = d_hyp(rho_prime, g_out.weight_op(), xi + budget.epsilon, false);
    const double correction =
        g_in.beta * (budget.w + 2 * budget.eta) + std::log((xi + budget.epsilon) / xi);
    QuasiMonotonicityReport rep;
    rep.lhs = lhs_res.value + correction;
    rep.rhs = rhs_res.value;
    const double cert = (lhs_res.value - lhs_res.lower) + (rhs_res.upper - rhs_res.value);
    rep.holds = rep.lhs >= rep.rhs - cert - 1e-9;
    return rep;
}

}  // namespace oneshot::thermo
