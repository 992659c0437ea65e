#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oneshot/channel.hpp"
#include "oneshot/process.hpp"
#include "oneshot/stein.hpp"
#include "oneshot/thermo.hpp"

using namespace oneshot;
using namespace oneshot::stein;

namespace {

Matrix rotated_diag(double p0, double p1, double angle) {
    Matrix u(2, 2);
    u << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = p0;
    d(1, 1) = p1;
    return u * d * u.adjoint();
}

}  // namespace

TEST_CASE("spin representation calculus") {
    Rng rng(3);
    for (int two_j : {1, 2, 3, 5}) {
        auto a = random_gaussian_matrix(2, 2, rng);
        auto b = random_gaussian_matrix(2, 2, rng);
        // homomorphism
        CHECK(operator_norm(Matrix(spin_rep(Matrix(a * b), two_j) -
                                   spin_rep(a, two_j) * spin_rep(b, two_j))) < 1e-9);
        // unitarity on unitaries
        Matrix u = random_unitary(2, rng);
        Matrix pu = spin_rep(u, two_j);
        CHECK(operator_norm(Matrix(pu * pu.adjoint() -
                                   Matrix::Identity(two_j + 1, two_j + 1))) < 1e-10);
        // Hermiticity on Hermitian inputs
        auto h = random_hermitian(2, rng);
        Matrix ph = spin_rep(h.matrix(), two_j);
        CHECK(operator_norm(Matrix(ph - ph.adjoint())) < 1e-10);
    }
}

TEST_CASE("block decomposition reproduces tensor powers") {
    Rng rng(5);
    for (int n : {2, 3, 4, 6, 9}) {
        auto a = random_density(2, rng);
        BlockOp blocks = tensor_power_blocks(a.matrix(), n);
        // dimension bookkeeping: Σ m_j (2j+1) = 2^n
        double dim = 0;
        for (const auto& b : blocks.blocks) dim += b.mult * b.op.rows();
        CHECK(dim == doctest::Approx(std::pow(2.0, n)));
        // moment identities: Σ m_j tr(B_j^k) = (tr A^k)^n for k = 1, 2, 3
        for (int k = 1; k <= 3; ++k) {
            Matrix ak = Matrix::Identity(2, 2);
            for (int i = 0; i < k; ++i) ak = ak * a.matrix();
            double lhs = 0;
            for (const auto& b : blocks.blocks) {
                Matrix bk = Matrix::Identity(b.op.rows(), b.op.cols());
                for (int i = 0; i < k; ++i) bk = bk * b.op;
                lhs += b.mult * bk.trace().real();
            }
            CHECK(lhs == doctest::Approx(std::pow(ak.trace().real(), n)).epsilon(1e-9));
        }
    }
}

TEST_CASE("block NP matches the dense hypothesis test") {
    Rng rng(7);
    for (int n : {2, 3, 4, 5}) {
        auto rho_site = random_density(2, rng);
        SubnormalizedState rho(rotated_diag(0.85, 0.15, 0.4));
        auto h = thermo::gibbs(HermitianOperator(rotated_diag(0.0, 1.0, 0.0)), 0.8);
        for (double eta : {0.3, 0.7}) {
            BlockOp rb = tensor_power_blocks(rho.matrix(), n);
            BlockOp sb = tensor_power_blocks(h.weight, n);
            const double block_val = block_d_hyp(rb, sb, eta);
            auto rho_n = tensor_power(HermitianOperator(rho.matrix()), n);
            auto sigma_n = tensor_power(HermitianOperator(h.weight), n);
            const double dense_val =
                d_hyp(SubnormalizedState(rho_n.matrix()), sigma_n, eta, false).value;
            CHECK(block_val == doctest::Approx(dense_val).epsilon(1e-8));
        }
        (void)rho_site;
    }
}

TEST_CASE("iid typical projector") {
    // pure state: rank one, full mass
    SubnormalizedState pure(rotated_diag(1.0, 0.0, 0.3));
    auto tp = iid_typical_projector(pure, 6, 0.1);
    CHECK(tp.dim == doctest::Approx(1.0));
    CHECK(tp.rho_mass == doctest::Approx(1.0));

    // maximally mixed qubit: everything is typical
    SubnormalizedState mixed(Matrix(Matrix::Identity(2, 2) / 2.0));
    auto tm = iid_typical_projector(mixed, 8, 0.05);
    CHECK(tm.dim == doctest::Approx(256.0));
    CHECK(tm.rho_mass == doctest::Approx(1.0));

    // diag(0.9, 0.1), n = 14: binomial tail enumeration fixes the mass, and
    // the dimension sandwich e^{n(s−ε)} ≤ tr Π ≤ e^{n(s+ε)} holds
    SubnormalizedState q(rotated_diag(0.9, 0.1, 0.0));
    const double s = renyi_entropy(q, Alpha::One);
    for (double eps : {0.1, 0.25}) {
        auto t14 = iid_typical_projector(q, 14, eps);
        double mass = 0, dim = 0;
        for (int k = 0; k <= 14; ++k) {
            const double lv = -(k * std::log(0.9) + (14 - k) * std::log(0.1)) / 14.0;
            if (std::abs(lv - s) > eps) continue;
            const double binom = std::round(std::exp(std::lgamma(15.0) - std::lgamma(k + 1.0) -
                                                     std::lgamma(15.0 - k)));
            dim += binom;
            mass += binom * std::pow(0.9, k) * std::pow(0.1, 14 - k);
        }
        CHECK(t14.rho_mass == doctest::Approx(mass).epsilon(1e-9));
        CHECK(t14.dim == doctest::Approx(dim).epsilon(1e-9));
        CHECK(t14.dim <= std::exp(14 * (s + eps)) + 1e-6);
        CHECK(t14.dim * std::exp(-14 * (s + eps)) <= 1.0 + 1e-9);
    }
    // the ε = 0.25 window captures most of the mass at n = 14
    CHECK(iid_typical_projector(q, 14, 0.25).rho_mass > 0.8);

    // sandwich on the dense materialization: e^{−n(s+ε)}Π ≤ Πρ_nΠ ≤ e^{−n(s−ε)}Π
    auto t6 = iid_typical_projector(q, 6, 0.2);
    REQUIRE(t6.dense.has_value());
    auto rho6 = tensor_power(q.op(), 6);
    const Matrix pi = *t6.dense;
    const Matrix mid = pi * rho6.matrix() * pi;
    CHECK(lambda_max(Matrix(mid - std::exp(-6 * (s - 0.2)) * pi)) < 1e-10);
    CHECK(lambda_min(Matrix(mid - std::exp(-6 * (s + 0.2)) * pi)) > -1e-10);
    CHECK(operator_norm(Matrix(pi * pi - pi)) < 1e-10);
}

TEST_CASE("relative typical projector") {
    // uniform weight: the window around ln d keeps everything
    auto id_half = HermitianOperator(Matrix(Matrix::Identity(2, 2) / 2.0));
    auto tp = relative_typical_projector(id_half, 8, 0.05, std::log(2.0));
    CHECK(tp.dim == doctest::Approx(256.0));

    // window covering the whole spectrum keeps everything
    auto g = thermo::gibbs(HermitianOperator(rotated_diag(0.0, 1.0, 0.0)), 0.7);
    auto wide = relative_typical_projector(HermitianOperator(g.weight), 6, 100.0, 0.0);
    CHECK(wide.dim == doctest::Approx(64.0));

    // ρ-mass trend toward 1 as n grows, windowed at the mean exponent
    SubnormalizedState rho(rotated_diag(0.85, 0.15, 0.5));
    EigResult ew = eig_hermitian(Matrix(g.weight));
    double m_target = 0;
    for (int i = 0; i < 2; ++i) {
        const double qw =
            (ew.vectors.col(i).adjoint() * rho.matrix() * ew.vectors.col(i)).value().real();
        m_target += qw * (-std::log(ew.values(i)));
    }
    double prev = 0;
    for (int n : {4, 8, 12}) {
        auto t = relative_typical_projector(HermitianOperator(g.weight), n, 0.35, m_target, &rho);
        CHECK(t.rho_mass >= prev - 1e-9);
        prev = t.rho_mass;
    }
    CHECK(prev > 0.85);

    // dense sandwich for the σ-windowed projector
    auto t4 = relative_typical_projector(HermitianOperator(g.weight), 4, 0.3, m_target, &rho);
    REQUIRE(t4.dense.has_value());
    auto w4 = tensor_power(HermitianOperator(g.weight), 4);
    const Matrix pi = *t4.dense;
    CHECK(operator_norm(Matrix(pi * w4.matrix() - w4.matrix() * pi)) < 1e-10);
    const Matrix mid = pi * w4.matrix() * pi;
    CHECK(lambda_max(Matrix(mid - std::exp(-4 * (m_target - 0.3)) * pi)) < 1e-9);
    CHECK(lambda_min(Matrix(mid - std::exp(-4 * (m_target + 0.3)) * pi)) > -1e-9);
}

TEST_CASE("W-operator conditions") {
    // ρ = σ i.i.d. with c = 0: wide windows make every condition hold
    Rng rng(11);
    auto rho = random_density(2, rng);
    const int n = 6;
    auto rho_n = tensor_power(HermitianOperator(rho.matrix()), n);
    auto pi = iid_typical_projector(rho, n, 0.5);
    REQUIRE(pi.dense.has_value());
    auto rep = build_and_verify_W(rho_n.matrix(), rho_n.matrix(), *pi.dense, *pi.dense, 0.0,
                                  0.5, n, 0.85);
    CHECK(rep.cond1);
    CHECK(rep.cond2);
    CHECK(rep.cond3);
    CHECK(rep.cond4);

    // noncommuting pair at n = 8: conditions (1)–(3) hold by construction,
    // condition (4) overlap is large; wrong c breaks (2) or (3)
    SubnormalizedState site(rotated_diag(0.9, 0.1, 0.5));
    auto g = thermo::gibbs(HermitianOperator(rotated_diag(0.0, 1.0, 0.0)), 0.8);
    auto wsite = HermitianOperator(g.weight);
    const double c = d_kl(site, wsite).value;
    const double s = renyi_entropy(site, Alpha::One);
    const int n8 = 8;
    const double eps = 0.45;
    auto pi_rho = iid_typical_projector(site, n8, eps);
    auto pi_rel = relative_typical_projector(wsite, n8, eps, s + c, &site);
    REQUIRE(pi_rho.dense.has_value());
    REQUIRE(pi_rel.dense.has_value());
    auto rho_n8 = tensor_power(HermitianOperator(site.matrix()), n8);
    auto sig_n8 = tensor_power(wsite, n8);
    auto rep2 = build_and_verify_W(rho_n8.matrix(), sig_n8.matrix(), *pi_rho.dense,
                                   *pi_rel.dense, c, eps, n8, 0.5);
    CHECK(rep2.cond1);
    CHECK(rep2.cond2);
    CHECK(rep2.cond3);
    CHECK(rep2.overlap > 0.5);

    // the implied candidate-test bounds trap the exact NP rate
    if (rep2.cond1 && rep2.cond2 && rep2.cond3 &&
        rep2.trace_pi_rho * 0 + rep2.overlap > 0.5) {
        const double eta = 0.4;
        auto rows = quantum_rate_scan(site, HermitianOperator(rotated_diag(0.0, 1.0, 0.0)),
                                      0.8, {eta}, {n8});
        const double rate = rows[0].rate;
        CHECK(rate >= rep2.implied_lower(eta) - 1e-9);
        if (rep2.residual <= eta / 4) CHECK(rate <= rep2.implied_upper() + 1e-9);
    }

    auto rep3 = build_and_verify_W(rho_n8.matrix(), sig_n8.matrix(), *pi_rho.dense,
                                   *pi_rel.dense, c + 1.0, eps, n8, 0.5);
    const bool both_wrong_c = rep3.cond2 && rep3.cond3;
    CHECK_FALSE(both_wrong_c);

    // projector-pair overlap lemma: Re tr[QQ'ρ] ≥ 1 − ε − √ε'
    const double e1 = 1.0 - pi_rho.rho_mass;
    const double e2 = 1.0 - pi_rel.rho_mass;
    const double reover =
        ((*pi_rho.dense) * (*pi_rel.dense) * rho_n8.matrix()).trace().real();
    CHECK(reover >= 1.0 - e1 - std::sqrt(e2) - 1e-9);
}

TEST_CASE("quantum rate scan") {
    auto hq = HermitianOperator(rotated_diag(0.0, 1.0, 0.0));
    const double beta = 0.8;
    auto g = thermo::gibbs(hq, beta);

    // Gibbs input: D_H equals the KL rate exactly for every n and η
    SubnormalizedState gamma(g.state);
    for (const auto& row : quantum_rate_scan(gamma, hq, beta, {0.3, 0.7}, {3, 6, 9}))
        CHECK(row.rate == doctest::Approx(row.kl).epsilon(1e-9));

    // commuting input matches the classical scan on the diagonal weights
    SubnormalizedState diag(rotated_diag(0.85, 0.15, 0.0));
    auto rows = quantum_rate_scan(diag, hq, beta, {0.4}, {6, 10});
    for (const auto& row : rows) {
        RealVector p(2), w(2);
        p << 0.85, 0.15;
        w << 1.0, std::exp(-beta);
        // product distributions over n sites
        const int n = row.n;
        long total = 1L << n;
        RealVector pn(total), wn(total);
        for (long idx = 0; idx < total; ++idx) {
            double pp = 1, ww = 1;
            for (int i = 0; i < n; ++i) {
                const int bit = (idx >> i) & 1;
                pp *= p(bit);
                ww *= w(bit);
            }
            pn(idx) = pp;
            wn(idx) = ww;
        }
        auto classical = ergodic::classical_d_hyp(pn, wn, 0.4);
        CHECK(row.rate == doctest::Approx(classical.value / n).epsilon(1e-9));
    }

    // noncommuting qubit: the rate approaches the KL and improves with n
    SubnormalizedState site(rotated_diag(0.70, 0.30, 0.20));
    RealVector hv(2);
    hv << 0.0, 1.5;
    auto h15 = HermitianOperator::diagonal(hv);
    auto scan = quantum_rate_scan(site, h15, 0.5, {0.3, 0.7}, {4, 8, 12});
    const double kl = scan[0].kl;
    double worst4 = 0, worst12 = 0;
    for (const auto& row : scan) {
        if (row.n == 4) worst4 = std::max(worst4, std::abs(row.rate - kl));
        if (row.n == 12) worst12 = std::max(worst12, std::abs(row.rate - kl));
    }
    CHECK(worst12 <= 0.06);
    CHECK(worst12 < worst4);
}

TEST_CASE("toy counterexample") {
    auto rows = toy_counterexample(1.0, {10, 20, 50}, 0.1);
    const auto& last = rows.back();
    CHECK(last.n == 50);
    CHECK(last.kl_rate >= 0.95);
    CHECK(last.kl_rate <= 1.05);
    CHECK(last.dmax_rate <= 0.01);
    CHECK(last.d0_rate <= 0.02);
    CHECK(last.d0_rate >= -1e-12);

    // closed form of the KL column
    for (const auto& row : rows) {
        const double eps_n = 1.0 / row.n;
        const double ent = -(1 - eps_n) * std::log(1 - eps_n) - eps_n * std::log(eps_n);
        CHECK(row.kl_rate == doctest::Approx(1.0 - ent / row.n));
    }

    // log-domain smoothing agrees with the generic SDP/enumeration path while
    // σ's small atom is still representable
    const int n = 4;
    const double beta = 1.0, eps = 0.1;
    RealVector p(2), ls(2);
    p << 1.0 - 1.0 / n, 1.0 / n;
    ls << 0.0, -beta * n * n;
    SubnormalizedState rho(HermitianOperator::diagonal(p).matrix());
    RealVector sv(2);
    sv << std::exp(ls(0)), std::exp(ls(1));
    auto sigma = HermitianOperator::diagonal(sv);
    CHECK(log_domain_d_zero_smooth(p, ls, eps) ==
          doctest::Approx(d_zero_smooth(rho, sigma, eps).value).epsilon(1e-7));
    CHECK(log_domain_d_max_smooth(p, ls, eps) ==
          doctest::Approx(d_max_smooth(rho, sigma, eps).value).epsilon(1e-5));
}
