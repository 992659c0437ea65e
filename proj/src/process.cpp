#include "oneshot/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace oneshot::ergodic {

namespace {

long checked_pow(int base, int n) {
    long out = 1;
    for (int i = 0; i < n; ++i) {
        out *= base;
        if (out > kEnumerationCap) throw CapExceeded("ergodic: B^n exceeds the enumeration cap");
    }
    return out;
}

void require_stochastic_columns(const RealMatrix& t) {
    for (int x = 0; x < t.cols(); ++x) {
        double col = 0;
        for (int y = 0; y < t.rows(); ++y) {
            if (t(y, x) < -1e-12) throw std::invalid_argument("markov: negative entry");
            col += t(y, x);
        }
        if (std::abs(col - 1.0) > 1e-12)
            throw std::invalid_argument("markov: column does not sum to 1");
    }
}

RealVector stationary_of(const RealMatrix& t) {
    // power iteration from the uniform start; verified fixed point
    const int b = static_cast<int>(t.rows());
    RealVector pi = RealVector::Constant(b, 1.0 / b);
    for (int it = 0; it < 20000; ++it) {
        RealVector next = t * pi;
        next /= next.sum();
        const double gap = (next - pi).cwiseAbs().maxCoeff();
        pi = next;
        if (gap < 1e-16) break;
    }
    if ((t * pi - pi).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("markov: stationary vector did not converge to 1e-12");
    return pi;
}

void require_irreducible(const RealMatrix& t) {
    const int b = static_cast<int>(t.rows());
    // reachability in both directions from state 0
    for (int dir = 0; dir < 2; ++dir) {
        std::vector<bool> seen(b, false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int y = 0; y < b; ++y) {
                const double w = dir == 0 ? t(y, x) : t(x, y);
                if (!seen[y] && w > 0) {
                    seen[y] = true;
                    stack.push_back(y);
                }
            }
        }
        for (bool s : seen)
            if (!s) throw std::invalid_argument("markov: chain is not irreducible");
    }
}

}  // namespace

// ── FiniteProcess ────────────────────────────────────────────────────────────

FiniteProcess FiniteProcess::iid(RealVector p) {
    if (p.minCoeff() < -1e-12 || std::abs(p.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("iid: not a distribution");
    FiniteProcess out;
    out.kind_ = Kind::IID;
    out.alphabet_ = static_cast<int>(p.size());
    out.stationary_ = p;
    out.conditional_ = RealMatrix(out.alphabet_, out.alphabet_);
    for (int x = 0; x < out.alphabet_; ++x) out.conditional_.col(x) = p;
    return out;
}

FiniteProcess FiniteProcess::markov(RealMatrix transition) {
    require_stochastic_columns(transition);
    require_irreducible(transition);
    FiniteProcess out;
    out.kind_ = Kind::Markov;
    out.alphabet_ = static_cast<int>(transition.rows());
    out.stationary_ = stationary_of(transition);
    out.conditional_ = std::move(transition);
    return out;
}

FiniteProcess FiniteProcess::transfer_gibbs(RealMatrix coupling, double beta) {
    TransferGibbs tg = induced_gibbs_chain(coupling, beta);
    FiniteProcess out;
    out.kind_ = Kind::TransferGibbs;
    out.alphabet_ = static_cast<int>(coupling.rows());
    out.stationary_ = tg.stationary;
    out.conditional_ = tg.conditional;
    out.transfer_.push_back(std::move(tg));
    return out;
}

FiniteProcess FiniteProcess::mixture(std::vector<FiniteProcess> components, RealVector weights) {
    if (components.empty() || static_cast<int>(components.size()) != weights.size())
        throw std::invalid_argument("mixture: component/weight mismatch");
    if (weights.minCoeff() <= 0 || std::abs(weights.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("mixture: weights must be positive and sum to 1");
    FiniteProcess out;
    out.kind_ = Kind::Mixture;
    out.alphabet_ = components[0].alphabet();
    for (const auto& c : components)
        if (c.alphabet() != out.alphabet_) throw std::invalid_argument("mixture: alphabet mismatch");
    out.stationary_ = RealVector::Zero(out.alphabet_);
    for (size_t k = 0; k < components.size(); ++k)
        out.stationary_ += weights(k) * components[k].stationary();
    out.components_ = std::move(components);
    out.weights_ = std::move(weights);
    return out;
}

const TransferGibbs& FiniteProcess::transfer() const {
    if (transfer_.empty()) throw std::logic_error("process has no transfer-matrix data");
    return transfer_[0];
}

RealVector FiniteProcess::marginal(int n) const {
    if (n < 1) throw std::invalid_argument("marginal: n >= 1 required");
    const long total = checked_pow(alphabet_, n);
    RealVector out(total);
    if (kind_ == Kind::Mixture) {
        out.setZero();
        for (size_t k = 0; k < components_.size(); ++k)
            out += weights_(k) * components_[k].marginal(n);
        return out;
    }
    // stationary chain: p(X) = π(x₁) Π P(x_{i+1}|x_i); IID is a special case
    std::vector<int> digits(n);
    for (long idx = 0; idx < total; ++idx) {
        long rest = idx;
        for (int i = n - 1; i >= 0; --i) {
            digits[i] = static_cast<int>(rest % alphabet_);
            rest /= alphabet_;
        }
        double p = stationary_(digits[0]);
        for (int i = 0; i + 1 < n; ++i) p *= conditional_(digits[i + 1], digits[i]);
        out(idx) = p;
    }
    return out;
}

// ── Transfer matrix ──────────────────────────────────────────────────────────

TransferGibbs induced_gibbs_chain(const RealMatrix& coupling, double beta) {
    if (coupling.rows() != coupling.cols())
        throw std::invalid_argument("induced_gibbs_chain: coupling must be square");
    if ((coupling - coupling.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("induced_gibbs_chain: coupling must be symmetric");
    if (beta <= 0) throw std::invalid_argument("induced_gibbs_chain: beta > 0 required");
    const int b = static_cast<int>(coupling.rows());
    TransferGibbs tg;
    tg.coupling = coupling;
    tg.beta = beta;
    tg.t = (-beta * coupling.array()).exp();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(tg.t);
    const double top = es.eigenvalues()(b - 1);
    if (b > 1 && top - std::abs(es.eigenvalues()(b - 2)) < 1e-9)
        throw DegenerateError("induced_gibbs_chain: top transfer eigenvalue is degenerate");
    tg.lambda_star = std::log(top);
    tg.second_eigenvalue = (b > 1) ? es.eigenvalues()(b - 2) : 0.0;
    RealVector v = es.eigenvectors().col(b - 1);
    if (v.sum() < 0) v = -v;
    if (v.minCoeff() <= 0)
        throw DegenerateError("induced_gibbs_chain: Perron vector is not strictly positive");
    tg.top_vec = v;
    tg.conditional = RealMatrix(b, b);
    for (int x = 0; x < b; ++x)
        for (int y = 0; y < b; ++y) tg.conditional(y, x) = v(y) * tg.t(x, y) / (top * v(x));
    tg.stationary = v.cwiseProduct(v);
    tg.stationary /= tg.stationary.sum();
    return tg;
}

// ── KL rate ──────────────────────────────────────────────────────────────────

double kl_rate(const FiniteProcess& rho, const FiniteProcess& sigma) {
    if (sigma.kind() == FiniteProcess::Kind::Mixture)
        throw std::invalid_argument("kl_rate: second argument must be IID/Markov/TransferGibbs");
    if (rho.kind() == FiniteProcess::Kind::Mixture) {
        double acc = 0;
        for (size_t k = 0; k < rho.components().size(); ++k)
            acc += rho.weights()(k) * kl_rate(rho.components()[k], sigma);
        return acc;
    }
    const int b = rho.alphabet();
    if (b != sigma.alphabet()) throw DimensionMismatch("kl_rate: alphabet mismatch");
    double acc = 0;
    for (int x = 0; x < b; ++x)
        for (int y = 0; y < b; ++y) {
            const double p = rho.conditional()(y, x);
            if (p <= 0 || rho.stationary()(x) <= 0) continue;
            const double q = sigma.conditional()(y, x);
            if (q <= 0) throw std::invalid_argument("kl_rate: absolute continuity violated");
            acc += rho.stationary()(x) * p * std::log(p / q);
        }
    return acc;
}

// ── Relative typical set ─────────────────────────────────────────────────────

RelativeTypicalStats relative_typical_set(const FiniteProcess& rho, const FiniteProcess& sigma,
                                          int n, double eps) {
    RelativeTypicalStats st;
    st.rate = kl_rate(rho, sigma);
    const RealVector pn = rho.marginal(n);
    const RealVector sn = sigma.marginal(n);
    for (long i = 0; i < pn.size(); ++i) {
        if (pn(i) <= 0) continue;
        const double r = std::log(pn(i) / sn(i)) / n;
        if (std::abs(r - st.rate) <= eps) {
            st.rho_mass += pn(i);
            st.sigma_mass += sn(i);
            ++st.set_size;
        }
    }
    st.rho_mass_ok = st.rho_mass > 1.0 - eps;
    st.sigma_bounds_ok = st.sigma_mass < std::exp(-n * (st.rate - eps)) &&
                         st.sigma_mass > (1.0 - eps) * std::exp(-n * (st.rate + eps));
    return st;
}

// ── Classical Neyman–Pearson ─────────────────────────────────────────────────

ClassicalHypResult classical_d_hyp(const RealVector& p, const RealVector& s, double eta) {
    if (eta <= 0 || eta > 1 + 1e-12)
        throw std::invalid_argument("classical_d_hyp: eta in (0, 1] required");
    const long n = p.size();
    for (long i = 0; i < n; ++i)
        if (p(i) > 1e-15 && s(i) <= 0) throw oneshot::SupportError("classical_d_hyp: support violation");
    std::vector<long> idx(n);
    std::iota(idx.begin(), idx.end(), 0L);
    std::sort(idx.begin(), idx.end(), [&](long a, long b) {
        const double ra = s(a) > 0 ? p(a) / s(a) : std::numeric_limits<double>::infinity();
        const double rb = s(b) > 0 ? p(b) / s(b) : std::numeric_limits<double>::infinity();
        return ra > rb;
    });
    double mass = 0, cost = 0;
    for (long k : idx) {
        if (mass >= eta - 1e-15) break;
        const double avail = p(k);
        if (avail <= 0) break;  // remaining atoms carry no ρ-mass
        const double take = std::min(1.0, (eta - mass) / avail);
        mass += take * avail;
        cost += take * s(k);
    }
    ClassicalHypResult out;
    out.beta_sigma = cost;
    out.value = -std::log(std::max(cost, 1e-300) / eta);
    return out;
}

// ── Scans ────────────────────────────────────────────────────────────────────

std::vector<ScanRow> spectral_rate_scan(const FiniteProcess& rho, const FiniteProcess& sigma,
                                        const std::vector<double>& etas,
                                        const std::vector<int>& ns) {
    double kl = 0;
    bool kl_ok = true;
    try {
        kl = kl_rate(rho, sigma);
    } catch (const std::invalid_argument&) {
        kl_ok = false;  // mixtures of different rates still scan fine
    }
    if (!kl_ok) kl = std::numeric_limits<double>::quiet_NaN();
    std::vector<ScanRow> rows;
    for (int n : ns) {
        const RealVector pn = rho.marginal(n);
        const RealVector sn = sigma.marginal(n);
        for (double eta : etas) {
            auto res = classical_d_hyp(pn, sn, eta);
            ScanRow row;
            row.n = n;
            row.eta = eta;
            row.rate = res.value / n;
            row.lower = row.rate;
            row.upper = row.rate;
            row.kl = kl;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<NagaokaRow> nagaoka_scan(const FiniteProcess& rho, const FiniteProcess& sigma,
                                     const std::vector<int>& ns, const std::vector<double>& as) {
    std::vector<NagaokaRow> rows;
    for (int n : ns) {
        const RealVector pn = rho.marginal(n);
        const RealVector sn = sigma.marginal(n);
        for (double a : as) {
            double mass = 0;
            for (long i = 0; i < pn.size(); ++i)
                if (pn(i) - std::exp(n * a) * sn(i) >= 0) mass += pn(i);
            rows.push_back(NagaokaRow{n, a, mass});
        }
    }
    return rows;
}

// ── Diagnostics ──────────────────────────────────────────────────────────────

namespace {

// E[A(x₁) B(x_{1+d})] for a (possibly mixed) stationary process
double pair_expectation(const FiniteProcess& p, const RealVector& a, const RealVector& b,
                        int d) {
    if (p.kind() == FiniteProcess::Kind::Mixture) {
        double acc = 0;
        for (size_t k = 0; k < p.components().size(); ++k)
            acc += p.weights()(k) * pair_expectation(p.components()[k], a, b, d);
        return acc;
    }
    if (d == 0) {
        double acc = 0;
        for (int x = 0; x < p.alphabet(); ++x) acc += p.stationary()(x) * a(x) * b(x);
        return acc;
    }
    RealMatrix pd = RealMatrix::Identity(p.alphabet(), p.alphabet());
    for (int i = 0; i < d; ++i) pd = p.conditional() * pd;
    double acc = 0;
    for (int x = 0; x < p.alphabet(); ++x)
        for (int y = 0; y < p.alphabet(); ++y)
            acc += p.stationary()(x) * a(x) * pd(y, x) * b(y);
    return acc;
}

double site_expectation(const FiniteProcess& p, const RealVector& a) {
    double acc = 0;
    for (int x = 0; x < p.alphabet(); ++x) acc += p.stationary()(x) * a(x);
    return acc;
}

}  // namespace

double ergodicity_diagnostic(const FiniteProcess& p, const RealVector& observable, int m) {
    const long window = 2L * m + 1;
    const double mean = site_expectation(p, observable);
    // Var(N⁻¹ Σ A_i) = N⁻² Σ_{i,j} (E[A_i A_j] − (EA)²)
    double acc = window * (pair_expectation(p, observable, observable, 0) - mean * mean);
    for (long d = 1; d < window; ++d)
        acc += 2.0 * (window - d) *
               (pair_expectation(p, observable, observable, static_cast<int>(d)) - mean * mean);
    return acc / double(window) / double(window);
}

std::vector<double> mixing_diagnostic(const FiniteProcess& p, const RealVector& a,
                                      const RealVector& b, int max_shift) {
    const double ea = site_expectation(p, a);
    const double eb = site_expectation(p, b);
    std::vector<double> out;
    for (int s = 1; s <= max_shift; ++s)
        out.push_back(std::abs(pair_expectation(p, a, b, s) - ea * eb));
    return out;
}

SandwichReport gibbs_sandwich_check(const RealMatrix& coupling, double beta, int m, int k) {
    if (m < 1 || k < 2) throw std::invalid_argument("gibbs_sandwich_check: need m >= 1, k >= 2");
    auto chain = FiniteProcess::transfer_gibbs(coupling, beta);
    const int b = chain.alphabet();
    const RealVector sm = chain.marginal(m);
    const RealVector skm = chain.marginal(m * k);
    const long block = sm.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (long idx = 0; idx < skm.size(); ++idx) {
        // split the base-b digit string into k consecutive blocks of m digits
        double log_prod = 0;
        long q = idx;
        for (int blk = k - 1; blk >= 0; --blk) {
            const long sub = q % block;
            q /= block;
            log_prod += std::log(sm(sub));
        }
        const double log_ratio = std::log(skm(idx)) - log_prod;
        lo = std::min(lo, log_ratio);
        hi = std::max(hi, log_ratio);
    }
    (void)b;
    SandwichReport rep;
    rep.alpha1 = std::exp(lo / (k - 1));
    rep.alpha2 = std::exp(hi / (k - 1));
    return rep;
}

namespace {

// log-probability of an explicit trajectory under a (possibly mixed) process
double trajectory_log_prob(const FiniteProcess& p, const std::vector<int>& path) {
    if (p.kind() == FiniteProcess::Kind::Mixture) {
        // stable log-sum-exp over component trajectories
        std::vector<double> terms;
        for (size_t k = 0; k < p.components().size(); ++k)
            terms.push_back(std::log(p.weights()(k)) +
                            trajectory_log_prob(p.components()[k], path));
        const double mx = *std::max_element(terms.begin(), terms.end());
        double acc = 0;
        for (double t : terms) acc += std::exp(t - mx);
        return mx + std::log(acc);
    }
    double acc = std::log(p.stationary()(path[0]));
    for (size_t i = 0; i + 1 < path.size(); ++i)
        acc += std::log(p.conditional()(path[i + 1], path[i]));
    return acc;
}

}  // namespace

SampledEstimate sampled_log_ratio_rate(const FiniteProcess& rho, const FiniteProcess& sigma,
                                       int n, long samples, std::uint64_t seed) {
    if (n < 1 || samples < 2)
        throw std::invalid_argument("sampled_log_ratio_rate: need n >= 1, samples >= 2");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&](const RealVector& dist) {
        double r = u(rng);
        for (int x = 0; x < dist.size(); ++x) {
            r -= dist(x);
            if (r <= 0) return x;
        }
        return static_cast<int>(dist.size()) - 1;
    };
    double sum = 0, sum_sq = 0;
    std::vector<int> path(n);
    for (long s = 0; s < samples; ++s) {
        // sample a trajectory from ρ (mixtures: pick a component first)
        const FiniteProcess* src = &rho;
        if (rho.kind() == FiniteProcess::Kind::Mixture)
            src = &rho.components()[draw(rho.weights())];
        path[0] = draw(src->stationary());
        for (int i = 1; i < n; ++i) path[i] = draw(src->conditional().col(path[i - 1]));
        const double v =
            (trajectory_log_prob(rho, path) - trajectory_log_prob(sigma, path)) / n;
        sum += v;
        sum_sq += v * v;
    }
    SampledEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.value = sum / samples;
    const double var = std::max(0.0, sum_sq / samples - out.value * out.value);
    out.std_error = std::sqrt(var / samples);
    return out;
}

}  // namespace oneshot::ergodic
