// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Every tolerance is pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oneshot/channel.hpp"
#include "oneshot/config.hpp"
#include "oneshot/divergence.hpp"
#include "oneshot/process.hpp"
#include "oneshot/stein.hpp"
#include "oneshot/thermo.hpp"

using namespace oneshot;

namespace {

int g_failures = 0;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

HermitianOperator random_weight(int d, Rng& rng) {
    Matrix g = random_gaussian_matrix(d, d, rng);
    Matrix w = g * g.adjoint() + 0.05 * Matrix::Identity(d, d);
    std::uniform_real_distribution<double> u(0.3, 2.0);
    w *= u(rng) / w.trace().real();
    return HermitianOperator(std::move(w));
}

Matrix rotated_diag(double p0, double p1, double angle) {
    Matrix u(2, 2);
    u << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = p0;
    d(1, 1) = p1;
    return u * d * u.adjoint();
}

ergodic::RealMatrix ising_coupling(double j) {
    ergodic::RealMatrix h(2, 2);
    h << -j, j, j, -j;
    return h;
}

// ── 1. divergence ordering ───────────────────────────────────────────────────
void criterion_1() {
    const double t0 = now_seconds();
    Rng rng(1001);
    double worst = 1e300;
    int violations = 0;
    for (int t = 0; t < 200; ++t) {
        const int d = 2 + t % 7;
        auto rho = random_density(d, rng);
        auto sigma = random_weight(d, rng);
        const double d0 = d_min_zero(rho, sigma).value;
        const double dh = d_min_half(rho, sigma).value;
        const double d1 = d_kl(rho, sigma).value;
        const double dm = d_max(rho, sigma).value;
        const double slack =
            std::min({d0 + std::log(sigma.trace()), dh - d0, d1 - dh, dm - d1});
        worst = std::min(worst, slack);
        if (slack < -1e-9) ++violations;
    }
    const double dt = now_seconds() - t0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "200 pairs dims 2-8, %d violations, worst slack %.2e, %.1f s",
                  violations, worst, dt);
    report(1, "divergence ordering chain", violations == 0 && dt < 30.0, buf);
}

// ── 2. D_H certification ─────────────────────────────────────────────────────
void criterion_2() {
    Rng rng(1002);
    int certified = 0;
    double max_width = 0;
    std::string failure;
    const double etas[4] = {0.3, 0.5, 0.7, 0.9};
    for (int t = 0; t < 100; ++t) {
        const int d = 2 + t % 7;
        auto rho = random_density(d, rng);
        auto sigma = random_weight(d, rng);
        try {
            auto res = d_hyp(rho, sigma, etas[t % 4], true);
            max_width = std::max(max_width, res.upper - res.lower);
            ++certified;
        } catch (const std::exception& e) {
            failure = e.what();
            break;
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%d/100 instances certified, max interval width %.2e%s%s", certified,
                  max_width, failure.empty() ? "" : ", first failure: ", failure.c_str());
    report(2, "hypothesis-testing divergence NP vs SDP", certified == 100 && max_width <= 2e-6,
           buf);
}

// ── 3. smoothing sandwiches and the min-divergence chain ─────────────────────
void criterion_3() {
    Rng rng(1003);
    int violations = 0;
    int commuting_count = 0, noncommuting_count = 0;
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const double eps_grid[3] = {0.05, 0.1, 0.2};
    for (int t = 0; t < 100; ++t) {
        const double eps = eps_grid[t % 3];
        const bool commuting_case = (t % 5) < 3;  // 60 commuting, 40 noncommuting
        if (commuting_case) {
            ++commuting_count;
            const int d = 3 + t % 3;
            RealVector p(d), s(d);
            double zp = 0;
            for (int i = 0; i < d; ++i) {
                p(i) = u(rng);
                s(i) = u(rng);
                zp += p(i);
            }
            p /= zp;
            SubnormalizedState rho(HermitianOperator::diagonal(p).matrix());
            HermitianOperator sigma = HermitianOperator::diagonal(s);
            const double dmax_eps = d_max_smooth(rho, sigma, eps).value;
            const double lo2 = d_hyp(rho, sigma, 2 * eps, false).value - std::log(2.0);
            const double hi2 = d_hyp(rho, sigma, eps * eps / 2.0, false).value;
            if (dmax_eps < lo2 - 1e-7 || dmax_eps > hi2 + 1e-7) ++violations;
            const double e2 = eps * eps / 6.0;
            const double dz = d_zero_smooth(rho, sigma, eps).value;
            const double lo0 =
                d_hyp(rho, sigma, 1 - e2, false).value - std::log((1 - e2) / e2);
            const double hi0 = d_hyp(rho, sigma, 1 - eps, false).value - std::log(1 - eps);
            if (dz < lo0 - 1e-7 || dz > hi0 + 1e-7) ++violations;
            const double dh2 = d_half_smooth(rho, sigma, 2 * eps).value;
            const double dz2 = d_zero_smooth(rho, sigma, 2 * eps).value;
            const double dh1 = d_half_smooth(rho, sigma, eps).value;
            if (dh2 < dz2 - 1e-9) ++violations;
            if (dz2 < dh1 - 6.0 * std::log(3.0 / eps) - 1e-9) ++violations;
        } else {
            ++noncommuting_count;
            auto rho = random_density(3, rng);
            auto sigma = random_weight(3, rng);
            const double dmax_eps = d_max_smooth(rho, sigma, eps).value;
            const double lo2 = d_hyp(rho, sigma, 2 * eps, false).value - std::log(2.0);
            const double hi2 = d_hyp(rho, sigma, eps * eps / 2.0, false).value;
            if (dmax_eps < lo2 - 1e-7 || dmax_eps > hi2 + 1e-7) ++violations;
            // interval-regime D_0 bounds stay ordered and trap the witnessed
            // half-divergence chain
            auto dz = d_zero_smooth(rho, sigma, 2 * eps);
            const double dh2 = d_half_smooth(rho, sigma, 2 * eps).value;
            const double dh1 = d_half_smooth(rho, sigma, eps).value;
            if (dz.lower > dz.upper + 1e-9) ++violations;
            if (dh2 < dz.lower - 1e-9) ++violations;
            if (dz.upper < dh1 - 6.0 * std::log(3.0 / eps) - 1e-9) ++violations;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d commuting + %d noncommuting instances, %d violations",
                  commuting_count, noncommuting_count, violations);
    report(3, "smoothing sandwiches and min-divergence chain", violations == 0, buf);
}

// ── 4. measure-and-prepare conversion ────────────────────────────────────────
void criterion_4() {
    Rng rng(1004);
    int done = 0, violations = 0;
    std::uniform_real_distribution<double> u(0.0, 0.3);
    while (done < 100) {
        auto sigma = random_density(4, rng);
        auto rho = random_density_rank(4, 2, rng);
        auto noise = random_density(4, rng);
        const double mix = u(rng);
        SubnormalizedState rp(Matrix((1 - mix) * sigma.matrix() + mix * noise.matrix()));
        if (d_max(rp, sigma.op()).value > d_min_zero(rho, sigma.op()).value) continue;
        ++done;
        auto built = thermo::gpm_construct(rho, sigma, rp, sigma);
        const double dev =
            std::max(operator_norm(built.channel.apply(rho.matrix()) - rp.matrix()),
                     operator_norm(built.channel.apply(sigma.matrix()) - sigma.matrix()));
        if (dev > 1e-10) ++violations;
        for (int j = 0; j < 2; ++j) {
            if (built.m(0, j) < -1e-12 || built.m(1, j) < -1e-12) ++violations;
            if (std::abs(built.m(0, j) + built.m(1, j) - 1.0) > 1e-12) ++violations;
        }
        auto er = apply_channel(built.channel, rho);
        auto es = HermitianOperator(built.channel.apply(sigma.matrix()));
        if (d_min_zero(er, es).value > d_min_zero(rho, sigma.op()).value + 1e-8) ++violations;
        if (d_min_half(er, es).value > d_min_half(rho, sigma.op()).value + 1e-8) ++violations;
        if (d_kl(er, es).value > d_kl(rho, sigma.op()).value + 1e-8) ++violations;
        if (d_max(er, es).value > d_max(rho, sigma.op()).value + 1e-8) ++violations;
        if (d_hyp(er, es, 0.5, false).value > d_hyp(rho, sigma.op(), 0.5, false).value + 1e-8)
            ++violations;
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "100 admissible 4-level instances, %d violations",
                  violations);
    report(4, "measure-and-prepare conversion and monotonicity", violations == 0, buf);
}

// ── 5. coherence suppression and the smoothing candidate ─────────────────────
void criterion_5() {
    Rng rng(1005);
    int violations = 0;
    double worst_slack = 1e300;
    const double beta = 0.7;
    for (int t = 0; t < 100; ++t) {
        auto h = random_hermitian(6, rng);
        auto hb = thermo::discretize(h, 0.5);
        auto g = thermo::gibbs(HermitianOperator(hb.binned), beta);
        auto noise = random_density(6, rng);
        std::uniform_real_distribution<double> u(0.05, 0.9);
        const double mix = u(rng);
        SubnormalizedState rho(Matrix((1 - mix) * g.state + mix * noise.matrix()));
        auto w = HermitianOperator(g.weight);
        const double a = d_max(rho, w).value;
        const double b = d_min_half(rho, w).value;
        auto rep = thermo::suppression_check(rho, hb, beta, 0.5 * (a + b),
                                             0.5 * (a - b) + 1e-9);
        worst_slack = std::min(worst_slack, rep.worst_slack);
        if (rep.worst_slack < -1e-10) ++violations;
    }
    // smoothing candidate at ε = 1e-4 on a subset (the construction is
    // SDP-heavy); D(τ̃, ρ) ≤ 10√ε and the suppression premise must pass
    int candidate_checks = 0, candidate_failures = 0;
    for (int t = 0; t < 15; ++t) {
        const int d = 2 + t % 3;
        auto h = random_hermitian(d, rng);
        auto hb = thermo::discretize(h, 0.4);
        auto g = thermo::gibbs(HermitianOperator(hb.binned), beta);
        auto noise = random_density(d, rng);
        SubnormalizedState rho(Matrix(0.6 * g.state + 0.4 * noise.matrix()));
        ++candidate_checks;
        try {
            auto cand = thermo::smoothing_candidate(rho, hb, beta, 1e-4);
            if (cand.dist_to_rho > 10 * std::sqrt(1e-4)) ++candidate_failures;
            auto rep = thermo::suppression_check(SubnormalizedState(cand.tau), hb, beta,
                                                 cand.s_mid, cand.delta_prime);
            if (rep.worst_slack < -1e-9) ++candidate_failures;
        } catch (const std::exception&) {
            ++candidate_failures;
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "100 premise-satisfying 6-dim states, %d violations, worst slack %.2e; "
                  "%d/%d candidates pass",
                  violations, worst_slack, candidate_checks - candidate_failures,
                  candidate_checks);
    report(5, "coherence suppression and smoothing candidate",
           violations == 0 && candidate_failures == 0, buf);
}

// ── 6. reference-frame identity and 1/d_C scaling ───────────────────────────
void criterion_6() {
    Rng rng(1006);
    RealVector ev(3);
    ev << 0.0, 0.5, 1.0;
    auto hb = thermo::discretize(HermitianOperator::diagonal(ev), 0.5);
    auto rho = random_density(3, rng);
    auto rep = thermo::reference_frame_postselect(rho, hb, 6);
    auto modes = thermo::coherence_modes(rho.matrix(), hb);
    Matrix expect = rho.matrix();
    for (int j = 0; j < static_cast<int>(modes.size()); ++j)
        expect -= (std::abs(j - (hb.m - 1)) / 6.0) * modes[j];
    const double residual = (rep.induced - expect).cwiseAbs().maxCoeff();

    std::vector<double> log_dc, log_dev;
    for (int dc : {4, 8, 16, 32}) {
        log_dc.push_back(std::log(static_cast<double>(dc)));
        log_dev.push_back(std::log(thermo::reference_frame_postselect(rho, hb, dc).deviation));
    }
    // least-squares slope of log(deviation) against log(d_C)
    double mx = 0, my = 0;
    for (size_t i = 0; i < log_dc.size(); ++i) {
        mx += log_dc[i];
        my += log_dev[i];
    }
    mx /= log_dc.size();
    my /= log_dev.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < log_dc.size(); ++i) {
        num += (log_dc[i] - mx) * (log_dev[i] - my);
        den += (log_dc[i] - mx) * (log_dc[i] - mx);
    }
    const double slope = num / den;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "identity residual %.2e, log-log slope %.4f", residual,
                  slope);
    report(6, "reference-frame postselection", residual <= 1e-10 && std::abs(slope + 1) <= 0.1,
           buf);
}

// ── 7. transfer-matrix Gibbs chain ───────────────────────────────────────────
void criterion_7() {
    double worst_cond = 0, worst_ratio = 0;
    for (double beta : {0.3, 0.5, 1.0}) {
        auto tg = ergodic::induced_gibbs_chain(ising_coupling(1.0), beta);
        // truncated open chain on 12 sites: interior conditional of site 7|6
        const int l = 12;
        ergodic::RealMatrix t = (-beta * ising_coupling(1.0).array()).exp();
        long total = 1L << l;
        double joint[2][2] = {{0, 0}, {0, 0}};
        double z = 0;
        for (long idx = 0; idx < total; ++idx) {
            double wgt = 1;
            int digits[12];
            long rest = idx;
            for (int i = l - 1; i >= 0; --i) {
                digits[i] = static_cast<int>(rest % 2);
                rest /= 2;
            }
            for (int i = 0; i + 1 < l; ++i) wgt *= t(digits[i], digits[i + 1]);
            joint[digits[6]][digits[5]] += wgt;
            z += wgt;
        }
        for (int x = 0; x < 2; ++x) {
            const double norm = joint[0][x] + joint[1][x];
            for (int y = 0; y < 2; ++y)
                worst_cond = std::max(
                    worst_cond, std::abs(joint[y][x] / norm - tg.conditional(y, x)));
        }
        auto chain = ergodic::FiniteProcess::transfer_gibbs(ising_coupling(1.0), beta);
        RealVector spin(2);
        spin << 1.0, -1.0;
        auto corr = ergodic::mixing_diagnostic(chain, spin, spin, 5);
        for (size_t s = 0; s + 1 < corr.size(); ++s)
            worst_ratio = std::max(
                worst_ratio, std::abs(corr[s + 1] / corr[s] - std::tanh(beta)));
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "conditional dev %.2e, decay-ratio dev %.2e", worst_cond,
                  worst_ratio);
    report(7, "transfer-matrix Gibbs chain", worst_cond <= 1e-6 && worst_ratio <= 1e-6, buf);
}

// ── 8. classical Stein collapse ──────────────────────────────────────────────
void criterion_8() {
    const double t0 = now_seconds();
    ergodic::RealMatrix t(2, 2);
    t << 0.80, 0.25, 0.20, 0.75;
    auto src = ergodic::FiniteProcess::markov(t);
    auto gb = ergodic::FiniteProcess::transfer_gibbs(ising_coupling(1.0), 0.5);
    const double kl = ergodic::kl_rate(src, gb);
    std::vector<int> ns;
    for (int n = 4; n <= 18; ++n) ns.push_back(n);
    auto rows = ergodic::spectral_rate_scan(src, gb, {0.3, 0.5, 0.7}, ns);
    double worst18 = 0, worst6 = 0;
    for (const auto& r : rows) {
        if (r.n == 18) worst18 = std::max(worst18, std::abs(r.rate - kl));
        if (r.n == 6) worst6 = std::max(worst6, std::abs(r.rate - kl));
    }
    const double dt = now_seconds() - t0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "Markov vs Ising beta=0.5: |rate-KL| %.4f at n=18 (%.4f at n=6), %.1f s",
                  worst18, worst6, dt);
    report(8, "classical Stein collapse", worst18 <= 0.05 && worst18 < worst6 && dt < 180.0,
           buf);
}

// ── 9. quantum i.i.d. Stein trend and W conditions ───────────────────────────
void criterion_9() {
    SubnormalizedState site(rotated_diag(0.70, 0.30, 0.20));
    RealVector hv(2);
    hv << 0.0, 1.5;
    auto h = HermitianOperator::diagonal(hv);
    const double beta = 0.5;
    auto scan = stein::quantum_rate_scan(site, h, beta, {0.3, 0.7}, {12});
    double worst12 = 0;
    for (const auto& r : scan) worst12 = std::max(worst12, std::abs(r.rate - r.kl));

    auto g = thermo::gibbs(h, beta);
    HermitianOperator w(g.weight);
    const double c = d_kl(site, w).value;
    const double s = renyi_entropy(site, Alpha::One);
    const int n = 10;
    const double eps = 0.25;
    auto pi_rho = stein::iid_typical_projector(site, n, eps);
    auto pi_rel = stein::relative_typical_projector(w, n, eps, s + c, &site);
    auto rho_n = tensor_power(HermitianOperator(site.matrix()), n);
    auto sig_n = tensor_power(w, n);
    auto rep = stein::build_and_verify_W(rho_n.matrix(), sig_n.matrix(), *pi_rho.dense,
                                         *pi_rel.dense, c, eps, n, 0.85);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "|rate-KL| %.4f at n=12; W conds %d%d%d%d, overlap %.4f at n=10", worst12,
                  (int)rep.cond1, (int)rep.cond2, (int)rep.cond3, (int)rep.cond4, rep.overlap);
    report(9, "quantum i.i.d. Stein trend and W conditions",
           worst12 <= 0.06 && rep.cond1 && rep.cond2 && rep.cond3 && rep.overlap >= 0.85,
           buf);
}

// ── 10. mixture split ────────────────────────────────────────────────────────
void criterion_10() {
    ergodic::RealMatrix t1(2, 2), t2(2, 2);
    t1 << 0.60, 0.45, 0.40, 0.55;
    t2 << 0.14, 0.14, 0.86, 0.86;
    auto c1 = ergodic::FiniteProcess::markov(t1);
    auto c2 = ergodic::FiniteProcess::markov(t2);
    RealVector wts(2);
    wts << 0.8, 0.2;
    auto mix = ergodic::FiniteProcess::mixture({c1, c2}, wts);
    RealVector unif(2);
    unif << 0.5, 0.5;
    auto sigma = ergodic::FiniteProcess::iid(unif);
    const double k1 = ergodic::kl_rate(c1, sigma);
    const double k2 = ergodic::kl_rate(c2, sigma);
    const double kmin = std::min(k1, k2), kmax = std::max(k1, k2);
    auto rows = ergodic::spectral_rate_scan(mix, sigma, {0.1, 0.9}, {18});
    const double dev_low = std::abs(rows[1].rate - kmin);   // η = 0.9
    const double dev_high = std::abs(rows[0].rate - kmax);  // η = 0.1
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "eta=0.9 dev from min KL %.4f, eta=0.1 dev from max KL %.4f", dev_low,
                  dev_high);
    report(10, "mixture spectral split", dev_low <= 0.05 && dev_high <= 0.05, buf);
}

// ── 11. toy counterexample ───────────────────────────────────────────────────
void criterion_11() {
    auto rows = stein::toy_counterexample(1.0, {50}, 0.1);
    const auto& r = rows[0];
    char buf[160];
    std::snprintf(buf, sizeof(buf), "n=50: KL rate %.4f, Dmax rate %.2e, D0 rate %.2e",
                  r.kl_rate, r.dmax_rate, r.d0_rate);
    report(11, "toy counterexample collapse",
           r.kl_rate >= 0.95 && r.kl_rate <= 1.05 && r.dmax_rate <= 0.01 &&
               r.d0_rate <= 0.02,
           buf);
}

// ── 12. thermomajorization vs LP ─────────────────────────────────────────────
void criterion_12() {
    Rng rng(1012);
    RealVector energies(4);
    energies << 0.0, 0.5, 1.2, 2.0;
    const double beta = 0.8;
    auto g = thermo::gibbs(HermitianOperator::diagonal(energies), beta);
    RealVector w(4);
    for (int i = 0; i < 4; ++i) w(i) = std::exp(-beta * energies(i));
    std::uniform_real_distribution<double> u(0.02, 1.0);
    int disagreements = 0;
    for (int t = 0; t < 200; ++t) {
        RealVector p(4), q(4);
        double zp = 0, zq = 0;
        for (int i = 0; i < 4; ++i) {
            p(i) = u(rng);
            q(i) = u(rng);
            zp += p(i);
            zq += q(i);
        }
        p /= zp;
        q /= zq;
        SubnormalizedState rho(HermitianOperator::diagonal(p).matrix());
        SubnormalizedState rho_p(HermitianOperator::diagonal(q).matrix());
        const bool curve_says = thermo::tm_convertible(rho, rho_p, g);
        sdp::SdpProblem lp;
        int gidx[4][4];
        Matrix one(1, 1);
        one(0, 0) = 1.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) gidx[i][j] = lp.add_block(1);
        int upos[4], uneg[4];
        for (int i = 0; i < 4; ++i) {
            upos[i] = lp.add_block(1);
            uneg[i] = lp.add_block(1);
            lp.add_objective(upos[i], one);
            lp.add_objective(uneg[i], one);
        }
        for (int j = 0; j < 4; ++j) {
            std::vector<sdp::Term> terms;
            for (int i = 0; i < 4; ++i) terms.push_back(sdp::Term{gidx[i][j], one});
            lp.add_constraint(std::move(terms), sdp::Relation::Equal, 1.0);
        }
        for (int i = 0; i < 4; ++i) {
            std::vector<sdp::Term> terms;
            for (int j = 0; j < 4; ++j) {
                Matrix cw(1, 1);
                cw(0, 0) = w(j);
                terms.push_back(sdp::Term{gidx[i][j], cw});
            }
            lp.add_constraint(std::move(terms), sdp::Relation::Equal, w(i));
        }
        for (int i = 0; i < 4; ++i) {
            std::vector<sdp::Term> terms;
            for (int j = 0; j < 4; ++j) {
                Matrix cp(1, 1);
                cp(0, 0) = p(j);
                terms.push_back(sdp::Term{gidx[i][j], cp});
            }
            terms.push_back(sdp::Term{upos[i], one});
            Matrix neg(1, 1);
            neg(0, 0) = -1.0;
            terms.push_back(sdp::Term{uneg[i], neg});
            lp.add_constraint(std::move(terms), sdp::Relation::Equal, q(i));
        }
        auto sol = sdp::solve(lp);
        const bool lp_says = sol.status == sdp::Status::Optimal && sol.value <= 1e-7;
        if (curve_says != lp_says) ++disagreements;
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "200 semiclassical 4-level pairs, %d disagreements",
                  disagreements);
    report(12, "thermomajorization vs Gibbs-stochastic LP", disagreements == 0, buf);
}

// ── 13. determinism and runtime budget ───────────────────────────────────────
void criterion_13() {
    // two identical seeded toy scans and a seeded random audit, byte-compared
    auto run_audit = [&]() {
        Rng rng(1313);
        std::string blob;
        char line[160];
        for (int t = 0; t < 10; ++t) {
            auto rho = random_density(3, rng);
            auto sigma = random_weight(3, rng);
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n",
                          d_min_zero(rho, sigma).value, d_min_half(rho, sigma).value,
                          d_kl(rho, sigma).value, d_max(rho, sigma).value);
            blob += line;
        }
        for (const auto& r : stein::toy_counterexample(1.0, {10, 30, 50}, 0.1)) {
            std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g\n", r.n, r.kl_rate,
                          r.d0_rate, r.dmax_rate);
            blob += line;
        }
        return blob;
    };
    const std::string a = run_audit();
    const std::string b = run_audit();
    const double elapsed = now_seconds();
    char buf[120];
    std::snprintf(buf, sizeof(buf), "byte-identical reruns: %s, suite elapsed %.1f s",
                  a == b ? "yes" : "no", elapsed);
    report(13, "determinism and runtime budget", a == b && elapsed < 590.0, buf);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    std::printf("%s: %d/13 criteria passed (%.1f s total)\n",
                g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", 13 - g_failures,
                now_seconds());
    return g_failures == 0 ? 0 : 1;
}
