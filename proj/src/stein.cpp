#include "oneshot/stein.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace oneshot::stein {

namespace {

double log_factorial(int k) { return std::lgamma(k + 1.0); }

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

Matrix herm(const Matrix& a) { return 0.5 * (a + a.adjoint().eval()); }

double safe_exp(double x) { return std::exp(std::min(x, 700.0)); }

}  // namespace

// ── Spin representations ─────────────────────────────────────────────────────

Matrix spin_rep(const Matrix& a, int two_j) {
    // action on degree-N homogeneous polynomials, N = 2j, with orthonormal
    // basis e_r = x^r y^{N−r}/√(r!(N−r)!); substitution (x,y) ↦ (ax+cy, bx+dy)
    const int n = two_j;
    const Cx av = a(0, 0), bv = a(0, 1), cv = a(1, 0), dv = a(1, 1);
    Matrix out = Matrix::Zero(n + 1, n + 1);
    std::vector<Cx> pow_a(n + 1), pow_b(n + 1), pow_c(n + 1), pow_d(n + 1);
    pow_a[0] = pow_b[0] = pow_c[0] = pow_d[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        pow_a[k] = pow_a[k - 1] * av;
        pow_b[k] = pow_b[k - 1] * bv;
        pow_c[k] = pow_c[k - 1] * cv;
        pow_d[k] = pow_d[k - 1] * dv;
    }
    for (int r = 0; r <= n; ++r) {
        for (int s = 0; s <= n; ++s) {
            Cx acc = 0;
            const int p_lo = std::max(0, s - (n - r));
            const int p_hi = std::min(r, s);
            for (int p = p_lo; p <= p_hi; ++p) {
                const int q = s - p;
                acc += binomial(r, p) * binomial(n - r, q) * pow_a[p] * pow_c[r - p] *
                       pow_b[q] * pow_d[n - r - q];
            }
            const double norm = std::exp(0.5 * (log_factorial(s) + log_factorial(n - s) -
                                                log_factorial(r) - log_factorial(n - r)));
            out(s, r) = acc * norm;
        }
    }
    return out;
}

double BlockOp::trace() const {
    double acc = 0;
    for (const auto& b : blocks) acc += b.mult * b.op.trace().real();
    return acc;
}

BlockOp tensor_power_blocks(const Matrix& site, int n) {
    if (site.rows() != 2) throw DimensionMismatch("tensor_power_blocks: qubit sites only");
    const Cx det = site(0, 0) * site(1, 1) - site(0, 1) * site(1, 0);
    BlockOp out;
    for (int two_j = n; two_j >= 0; two_j -= 2) {
        const int k = (n - two_j) / 2;
        const double mult = binomial(n, k) - binomial(n, k - 1);
        Cx det_pow = 1.0;
        for (int i = 0; i < k; ++i) det_pow *= det;
        out.blocks.push_back(BlockOp::Block{mult, Matrix(det_pow * spin_rep(site, two_j))});
    }
    return out;
}

// ── Block Neyman–Pearson ─────────────────────────────────────────────────────

double block_d_hyp(const BlockOp& rho, const BlockOp& sigma, double eta) {
    if (rho.blocks.size() != sigma.blocks.size())
        throw DimensionMismatch("block_d_hyp: block structure mismatch");
    if (eta <= 0 || eta > 1 + 1e-12)
        throw std::invalid_argument("block_d_hyp: eta in (0, 1] required");

    struct Masses {
        double rho_pos = 0, rho_border = 0, sigma_pos = 0, sigma_border = 0;
    };
    auto point = [&](double mu) {
        Masses m;
        for (size_t b = 0; b < rho.blocks.size(); ++b) {
            const Matrix diff = herm(rho.blocks[b].op - mu * sigma.blocks[b].op);
            EigResult e = eig_hermitian(diff);
            const double band = std::max(1e-13, 1e-12 * e.values.cwiseAbs().maxCoeff());
            for (int i = 0; i < e.values.size(); ++i) {
                const double rw =
                    (e.vectors.col(i).adjoint() * rho.blocks[b].op * e.vectors.col(i))
                        .value()
                        .real();
                const double sw =
                    (e.vectors.col(i).adjoint() * sigma.blocks[b].op * e.vectors.col(i))
                        .value()
                        .real();
                if (e.values(i) > band) {
                    m.rho_pos += rho.blocks[b].mult * rw;
                    m.sigma_pos += rho.blocks[b].mult * sw;
                } else if (e.values(i) >= -band) {
                    m.rho_border += rho.blocks[b].mult * rw;
                    m.sigma_border += rho.blocks[b].mult * sw;
                }
            }
        }
        return m;
    };

    double hi = 1.0;
    for (size_t b = 0; b < rho.blocks.size(); ++b) {
        const Matrix si = psd_inv_sqrt_on_support(sigma.blocks[b].op, 1e-14);
        hi = std::max(hi, lambda_max(herm(si * rho.blocks[b].op * si)));
    }
    hi += 1.0;
    double lo = 0.0;

    auto value_of = [&](const Masses& m) {
        double t = 0.0;
        if (m.rho_border > 1e-300) t = std::clamp((eta - m.rho_pos) / m.rho_border, 0.0, 1.0);
        const double beta_sigma = m.sigma_pos + t * m.sigma_border;
        return -std::log(std::max(beta_sigma, 1e-300) / eta);
    };

    Masses m0 = point(lo);
    if (m0.rho_pos <= eta) return value_of(m0);
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        Masses m = point(mid);
        if (m.rho_pos > eta)
            lo = mid;
        else if (m.rho_pos + m.rho_border < eta)
            hi = mid;
        else
            return value_of(m);
        if (hi - lo < 1e-15 * (1.0 + hi)) break;
    }
    return value_of(point(lo));
}

// ── Typical projectors ───────────────────────────────────────────────────────

namespace {

// enumerate count vectors (c_0..c_{d−1}) with Σc = n
void enumerate_types(int d, int n, std::vector<int>& counts, int idx,
                     const std::function<void(const std::vector<int>&)>& visit) {
    if (idx == d - 1) {
        counts[idx] = n;
        visit(counts);
        return;
    }
    for (int c = 0; c <= n; ++c) {
        counts[idx] = c;
        enumerate_types(d, n - c, counts, idx + 1, visit);
    }
}

double log_multinomial(int n, const std::vector<int>& counts) {
    double acc = log_factorial(n);
    for (int c : counts) acc -= log_factorial(c);
    return acc;
}

// `mass_weights` are the diagonal entries of the mass-carrying state in the
// projector's eigenbasis (for the i.i.d. projector, the eigenvalues of the
// generating state itself).
TypicalProjector build_typical(const EigResult& site_eig, int n, double eps, double center,
                               const RealVector& mass_weights) {
    const int d = static_cast<int>(site_eig.values.size());
    double total_dim = 1;
    for (int i = 0; i < n; ++i) {
        total_dim *= d;
        if (total_dim > double(1 << 14))
            throw CapExceeded("typical projector: site_dim^n exceeds the cap");
    }

    TypicalProjector out;
    out.n = n;
    out.eps = eps;
    out.center = center;

    auto keep_type = [&](const std::vector<int>& c) {
        double logval = 0;
        for (int i = 0; i < d; ++i) {
            if (c[i] == 0) continue;
            if (site_eig.values(i) <= 0) return false;
            logval += c[i] * std::log(site_eig.values(i));
        }
        return std::abs(-logval / n - center) <= eps + 1e-12;
    };

    std::vector<int> counts(d);
    enumerate_types(d, n, counts, 0, [&](const std::vector<int>& c) {
        const bool keep = keep_type(c);
        out.kept_types.push_back(keep);
        if (!keep) return;
        const double log_mult = log_multinomial(n, c);
        out.dim += std::exp(log_mult);
        double logmass = 0;
        bool mass_valid = true;
        for (int i = 0; i < d; ++i) {
            if (c[i] == 0) continue;
            if (mass_weights(i) <= 0) {
                mass_valid = false;
                break;
            }
            logmass += c[i] * std::log(mass_weights(i));
        }
        if (mass_valid) out.rho_mass += std::exp(log_mult + logmass);
    });

    // dense materialization for small n-fold spaces
    if (total_dim <= double(1 << 10)) {
        const long dim = static_cast<long>(total_dim);
        Matrix u = Matrix::Identity(1, 1);
        for (int i = 0; i < n; ++i) u = tensor(u, site_eig.vectors);
        RealVector sel = RealVector::Zero(dim);
        std::vector<int> c(d);
        for (long idx = 0; idx < dim; ++idx) {
            std::fill(c.begin(), c.end(), 0);
            long rest = idx;
            for (int i = 0; i < n; ++i) {
                c[static_cast<int>(rest % d)]++;
                rest /= d;
            }
            sel(idx) = keep_type(c) ? 1.0 : 0.0;
        }
        out.dense = u * sel.asDiagonal() * u.adjoint();
    }
    return out;
}

}  // namespace

TypicalProjector iid_typical_projector(const SubnormalizedState& site_rho, int n, double eps) {
    EigResult e = eig_hermitian(site_rho.op());
    const double s = renyi_entropy(site_rho, Alpha::One);
    return build_typical(e, n, eps, s, e.values);
}

TypicalProjector relative_typical_projector(const HermitianOperator& site_weight, int n,
                                            double eps, double m_target,
                                            const SubnormalizedState* site_rho) {
    EigResult e = eig_hermitian(site_weight);
    RealVector mass = e.values;
    if (site_rho) {
        for (int i = 0; i < mass.size(); ++i)
            mass(i) = (e.vectors.col(i).adjoint() * site_rho->matrix() * e.vectors.col(i))
                          .value()
                          .real();
    }
    return build_typical(e, n, eps, m_target, mass);
}

// ── W-operator report ────────────────────────────────────────────────────────

double TypicalityReport::implied_lower(double eta) const {
    return c - 2 * eps + std::log(eta) / n;
}
double TypicalityReport::implied_upper() const { return c + 2 * eps + std::log(4.0) / n; }

TypicalityReport build_and_verify_W(const Matrix& rho_n, const Matrix& sigma_n,
                                    const Matrix& pi_rho, const Matrix& pi_rel, double c,
                                    double eps, int n, double cond4_threshold) {
    TypicalityReport rep;
    rep.n = n;
    rep.eps = eps;
    rep.c = c;
    rep.cond4_threshold = cond4_threshold;
    const Matrix w = pi_rho * pi_rel;

    rep.trace_pi_rho = (pi_rho * rho_n).trace().real();
    rep.trace_pi_rel_rho = (pi_rel * rho_n).trace().real();
    rep.dim_pi_rho = pi_rho.trace().real();

    // (1) W†W ≤ I
    rep.slack1 = 1.0 - operator_norm(w);
    rep.cond1 = rep.slack1 >= -1e-9;
    // (2) tr[W σ W†] ≤ e^{−n(c−2ε)}
    const double sigma_mass = (w * sigma_n * w.adjoint()).trace().real();
    rep.slack2 = safe_exp(-double(n) * (c - 2 * eps)) - sigma_mass;
    rep.cond2 = rep.slack2 >= -1e-12;
    // (3) W†ρW ≤ e^{n(c+2ε)} σ
    const Matrix gap =
        safe_exp(double(n) * (c + 2 * eps)) * sigma_n - w.adjoint() * rho_n * w;
    rep.slack3 = lambda_min(herm(gap));
    rep.cond3 = rep.slack3 >= -1e-9;
    // (4) Re tr[Wρ] near 1
    rep.overlap = (w * rho_n).trace().real();
    rep.cond4 = rep.overlap >= cond4_threshold;
    const Matrix id = Matrix::Identity(rho_n.rows(), rho_n.cols());
    rep.residual = ((id - w) * (id - w.adjoint()) * rho_n).trace().real();
    return rep;
}

// ── Quantum rate scan ────────────────────────────────────────────────────────

std::vector<QuantumRateRow> quantum_rate_scan(const SubnormalizedState& site_rho,
                                              const HermitianOperator& site_h, double beta,
                                              const std::vector<double>& etas,
                                              const std::vector<int>& ns) {
    if (site_rho.dim() != 2 || site_h.dim() != 2)
        throw DimensionMismatch("quantum_rate_scan: qubit sites only");
    EigResult eh = eig_hermitian(site_h);
    Matrix weight = Matrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
        weight +=
            std::exp(-beta * eh.values(i)) * eh.vectors.col(i) * eh.vectors.col(i).adjoint();
    const double kl = d_kl(site_rho, HermitianOperator(weight)).value;

    std::vector<QuantumRateRow> rows;
    for (int n : ns) {
        BlockOp rho_blocks = tensor_power_blocks(site_rho.matrix(), n);
        BlockOp sigma_blocks = tensor_power_blocks(weight, n);
        for (double eta : etas) {
            QuantumRateRow row;
            row.n = n;
            row.eta = eta;
            row.rate = block_d_hyp(rho_blocks, sigma_blocks, eta) / n;
            row.kl = kl;
            rows.push_back(row);
        }
    }
    return rows;
}

// ── Log-domain commuting smoothing and the toy sequence ─────────────────────

double log_domain_d_zero_smooth(const RealVector& p, const RealVector& log_sigma, double eps) {
    const int d = static_cast<int>(p.size());
    double best = -std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << d); ++mask) {
        double dropped = 0;
        for (int i = 0; i < d; ++i)
            if (mask & (1 << i)) dropped += p(i);
        if (dropped > eps + 1e-15) continue;
        // −ln Σ_{kept with ρ-mass} e^{lnσ_i}, stable log-sum-exp
        double mx = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < d; ++i)
            if (!(mask & (1 << i)) && p(i) > 0) mx = std::max(mx, log_sigma(i));
        if (!std::isfinite(mx)) continue;
        double acc = 0;
        for (int i = 0; i < d; ++i)
            if (!(mask & (1 << i)) && p(i) > 0) acc += std::exp(log_sigma(i) - mx);
        best = std::max(best, -(mx + std::log(acc)));
    }
    return best;
}

double log_domain_d_max_smooth(const RealVector& p, const RealVector& log_sigma, double eps) {
    const int d = static_cast<int>(p.size());
    // the closest dominated candidate is τ_i = min(p_i, λσ_i); feasible iff
    // the clipped mass Σ max(0, p_i − λσ_i) stays within ε
    auto defect = [&](double log_lambda) {
        double acc = 0;
        for (int i = 0; i < d; ++i)
            acc += std::max(0.0, p(i) - safe_exp(log_lambda + log_sigma(i)));
        return acc;
    };
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
        if (p(i) <= 0) continue;
        lo = std::min(lo, std::log(p(i)) - log_sigma(i));
        hi = std::max(hi, std::log(p(i)) - log_sigma(i));
    }
    lo -= 60;
    hi += 1;
    if (defect(lo) <= eps) return lo;
    for (int it = 0; it < 500; ++it) {
        const double mid = 0.5 * (lo + hi);
        (defect(mid) <= eps ? hi : lo) = mid;
        if (hi - lo < 1e-13 * (1 + std::abs(hi))) break;
    }
    return hi;
}

std::vector<ToyRow> toy_counterexample(double beta, const std::vector<int>& ns, double eps) {
    std::vector<ToyRow> rows;
    for (int n : ns) {
        const double eps_n = 1.0 / n;
        RealVector p(2), log_sigma(2);
        p << 1.0 - eps_n, eps_n;
        log_sigma << 0.0, -beta * double(n) * double(n);  // H_n = (n/ε_n)|1⟩⟨1|
        ToyRow row;
        row.n = n;
        const double entropy = -(1 - eps_n) * std::log(1 - eps_n) - eps_n * std::log(eps_n);
        row.kl_rate = beta - entropy / n;
        row.d0_rate = log_domain_d_zero_smooth(p, log_sigma, eps) / n;
        row.dmax_rate = log_domain_d_max_smooth(p, log_sigma, eps) / n;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace oneshot::stein
