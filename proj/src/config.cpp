#include "oneshot/config.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"
#include "oneshot/channel.hpp"
#include "oneshot/divergence.hpp"
#include "oneshot/process.hpp"
#include "oneshot/stein.hpp"
#include "oneshot/thermo.hpp"

namespace oneshot::config {

// ── TOML subset ──────────────────────────────────────────────────────────────

double TomlValue::as_number() const {
    if (kind != Kind::Number) throw ParseError("config value is not a number");
    return num;
}
bool TomlValue::as_bool() const {
    if (kind != Kind::Boolean) throw ParseError("config value is not a boolean");
    return boolean;
}
const std::string& TomlValue::as_string() const {
    if (kind != Kind::String) throw ParseError("config value is not a string");
    return str;
}
std::vector<double> TomlValue::as_number_array() const {
    if (kind != Kind::Array) throw ParseError("config value is not an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) out.push_back(v.as_number());
    return out;
}
std::vector<std::vector<double>> TomlValue::as_matrix() const {
    if (kind != Kind::Array) throw ParseError("config value is not a matrix");
    std::vector<std::vector<double>> out;
    for (const auto& row : arr) out.push_back(row.as_number_array());
    return out;
}

bool TomlDoc::has(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    return it != sections.end() && it->second.count(key) > 0;
}
const TomlValue& TomlDoc::get(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    if (it == sections.end() || !it->second.count(key))
        throw ParseError("missing config key [" + section + "] " + key);
    return it->second.at(key);
}
double TomlDoc::number_or(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get(section, key).as_number() : fallback;
}
std::string TomlDoc::string_or(const std::string& section, const std::string& key,
                               std::string fallback) const {
    return has(section, key) ? get(section, key).as_string() : std::move(fallback);
}

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

TomlValue parse_value(const std::string& text, size_t& pos);

void skip_ws(const std::string& text, size_t& pos) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

TomlValue parse_array(const std::string& text, size_t& pos) {
    TomlValue out;
    out.kind = TomlValue::Kind::Array;
    ++pos;  // consume '['
    skip_ws(text, pos);
    while (pos < text.size() && text[pos] != ']') {
        out.arr.push_back(parse_value(text, pos));
        skip_ws(text, pos);
        if (pos < text.size() && text[pos] == ',') {
            ++pos;
            skip_ws(text, pos);
        }
    }
    if (pos >= text.size()) throw ParseError("unterminated array");
    ++pos;  // consume ']'
    return out;
}

TomlValue parse_value(const std::string& text, size_t& pos) {
    skip_ws(text, pos);
    if (pos >= text.size()) throw ParseError("missing value");
    TomlValue out;
    const char c = text[pos];
    if (c == '[') return parse_array(text, pos);
    if (c == '"') {
        size_t end = text.find('"', pos + 1);
        if (end == std::string::npos) throw ParseError("unterminated string");
        out.kind = TomlValue::Kind::String;
        out.str = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        return out;
    }
    if (text.compare(pos, 4, "true") == 0) {
        out.kind = TomlValue::Kind::Boolean;
        out.boolean = true;
        pos += 4;
        return out;
    }
    if (text.compare(pos, 5, "false") == 0) {
        out.kind = TomlValue::Kind::Boolean;
        out.boolean = false;
        pos += 5;
        return out;
    }
    size_t end = pos;
    while (end < text.size() && text[end] != ',' && text[end] != ']' &&
           !std::isspace(static_cast<unsigned char>(text[end])))
        ++end;
    const std::string token = text.substr(pos, end - pos);
    try {
        size_t used = 0;
        out.num = std::stod(token, &used);
        if (used != token.size()) throw ParseError("bad number: " + token);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("bad value token: " + token);
    }
    out.kind = TomlValue::Kind::Number;
    pos = end;
    return out;
}

}  // namespace

TomlDoc parse_toml(const std::string& text) {
    TomlDoc doc;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    std::string pending;
    int bracket_depth = 0;
    auto handle_line = [&](const std::string& logical) {
        const std::string line = strip(logical);
        if (line.empty()) return;
        if (line.front() == '[' && line.find('=') == std::string::npos) {
            if (line.back() != ']') throw ParseError("malformed section header: " + line);
            section = strip(line.substr(1, line.size() - 2));
            doc.sections[section];
            return;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value: " + line);
        const std::string key = strip(line.substr(0, eq));
        const std::string value_text = strip(line.substr(eq + 1));
        size_t pos = 0;
        doc.sections[section][key] = parse_value(value_text, pos);
    };
    while (std::getline(in, raw)) {
        std::string line = strip_comment(raw);
        const bool header_candidate = pending.empty() && !strip(line).empty() &&
                                      strip(line).front() == '[' &&
                                      line.find('=') == std::string::npos;
        for (char c : line) {
            if (c == '[') ++bracket_depth;
            if (c == ']') --bracket_depth;
        }
        pending += line;
        if (bracket_depth > 0 && !header_candidate) {
            pending += " ";
            continue;
        }
        bracket_depth = 0;
        handle_line(pending);
        pending.clear();
    }
    if (!strip(pending).empty()) handle_line(pending);
    return doc;
}

TomlDoc parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_toml(buf.str());
}

// ── Check registry ───────────────────────────────────────────────────────────

const std::vector<std::pair<std::string, std::string>>& check_anchors() {
    static const std::vector<std::pair<std::string, std::string>> anchors = {
        {"ordering-chain", "-ln tr(sigma) <= D_0 <= D_1/2 <= D_1 <= D_max on every pair"},
        {"dpi-channel", "all divergences nonincreasing under CPTP channels"},
        {"scaling-second-argument", "D(rho||a*sigma) = D(rho||sigma) - ln a"},
        {"additivity-tensor", "divergences additive on product pairs"},
        {"dh-certification", "Neyman-Pearson value agrees with primal/dual SDP"},
        {"weak-duality", "dual SDP value never exceeds the primal value"},
        {"sandwich-dmax-dh", "D_H^{2e} - ln2 <= D_max^e <= D_H^{e^2/2}"},
        {"sandwich-dzero-dh", "D_H-based two-sided bounds on D_0^e"},
        {"chain-dhalf-dzero", "D_1/2^{2e} >= D_0^{2e} >= D_1/2^e - 6 ln(3/e)"},
        {"gpm-exact-conversion", "measure-and-prepare map sends (rho,sigma) to (rho',sigma')"},
        {"gpm-monotonicity", "divergences nonincreasing under the constructed map"},
        {"suppression-bound", "off-diagonal blocks bounded by exp(-beta|dE|/2 + Delta')"},
        {"smoothing-candidate", "pinched candidate stays within 10*sqrt(eps), passes suppression"},
        {"reference-frame-identity", "postselected ladder dephasing matches the mode formula"},
        {"reference-frame-scaling", "postselection deviation scales like 1/d_C"},
        {"transfer-conditional", "induced conditional matches the truncated-Gibbs conditional"},
        {"mixing-ratio", "correlation decay ratio equals the transfer eigenvalue ratio"},
        {"classical-stein-collapse", "(1/n) D_H^eta approaches the KL rate"},
        {"quantum-stein-trend", "qubit i.i.d. rate approaches the single-letter KL"},
        {"w-conditions", "product of typical projectors satisfies the four conditions"},
        {"mixture-split", "eta near 1/0 rows approach min/max component KL"},
        {"toy-collapse", "smoothed min/max rates vanish while the KL rate stays at beta"},
        {"tm-lp-equivalence", "curve convertibility equals Gibbs-stochastic LP feasibility"},
        {"determinism", "identical config and seed produce byte-identical outputs"},
    };
    return anchors;
}

// ── Runner ───────────────────────────────────────────────────────────────────

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
    out << content;
}

// deterministic parallel map: work items are indexed, results gathered by index
template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    const int workers = std::min(jobs, count);
    for (int w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        }));
    for (auto& f : futures) f.get();
}

ergodic::FiniteProcess process_from(const TomlDoc& doc, const std::string& section) {
    const std::string kind = doc.get(section, "kind").as_string();
    if (kind == "iid") {
        auto p = doc.get(section, "p").as_number_array();
        RealVector v(p.size());
        for (size_t i = 0; i < p.size(); ++i) v(i) = p[i];
        return ergodic::FiniteProcess::iid(v);
    }
    if (kind == "markov") {
        auto rows = doc.get(section, "transition").as_matrix();
        ergodic::RealMatrix t(rows.size(), rows[0].size());
        for (size_t y = 0; y < rows.size(); ++y)
            for (size_t x = 0; x < rows[y].size(); ++x) t(y, x) = rows[y][x];
        return ergodic::FiniteProcess::markov(t);
    }
    if (kind == "transfer_gibbs") {
        auto rows = doc.get(section, "coupling").as_matrix();
        ergodic::RealMatrix h(rows.size(), rows[0].size());
        for (size_t y = 0; y < rows.size(); ++y)
            for (size_t x = 0; x < rows[y].size(); ++x) h(y, x) = rows[y][x];
        return ergodic::FiniteProcess::transfer_gibbs(h, doc.get(section, "beta").as_number());
    }
    if (kind == "mixture") {
        auto weights = doc.get(section, "weights").as_number_array();
        std::vector<ergodic::FiniteProcess> comps;
        for (size_t k = 0; k < weights.size(); ++k)
            comps.push_back(process_from(doc, section + ".c" + std::to_string(k)));
        RealVector w(weights.size());
        for (size_t i = 0; i < weights.size(); ++i) w(i) = weights[i];
        return ergodic::FiniteProcess::mixture(std::move(comps), w);
    }
    throw ParseError("unknown process kind: " + kind);
}

Matrix matrix_from(const TomlDoc& doc, const std::string& section, const std::string& base) {
    auto re = doc.get(section, base + "_re").as_matrix();
    const int d = static_cast<int>(re.size());
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = re[i][j];
    if (doc.has(section, base + "_im")) {
        auto im = doc.get(section, base + "_im").as_matrix();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) += Cx(0, 1) * im[i][j];
    }
    return m;
}

struct CheckOutcome {
    std::string anchor;
    int trials = 0;
    int failures = 0;
    double worst = 0;  // most adverse slack seen (positive = margin)
};

std::string outcomes_csv(const std::vector<CheckOutcome>& rows) {
    std::string csv = "check,trials,failures,worst_slack\n";
    for (const auto& r : rows)
        csv += r.anchor + "," + std::to_string(r.trials) + "," + std::to_string(r.failures) +
               "," + fmt(r.worst) + "\n";
    return csv;
}

int run_counterexample(const TomlDoc& doc, const RunOptions& opt, std::string& log) {
    const double beta = doc.number_or("counterexample", "beta", 1.0);
    const double eps = doc.number_or("counterexample", "eps", 0.1);
    std::vector<int> ns;
    for (double v : doc.get("counterexample", "ns").as_number_array())
        ns.push_back(static_cast<int>(v));
    auto rows = stein::toy_counterexample(beta, ns, eps);
    std::string csv = "n,kl_rate,d0_rate,dmax_rate\n";
    for (const auto& r : rows)
        csv += std::to_string(r.n) + "," + fmt(r.kl_rate) + "," + fmt(r.d0_rate) + "," +
               fmt(r.dmax_rate) + "\n";
    write_file(opt.out_dir, "counterexample.csv", csv);
    log += "counterexample: " + std::to_string(rows.size()) + " rows\n";
    return 0;
}

int run_ergodic_scan(const TomlDoc& doc, const RunOptions& opt, std::string& log) {
    auto rho = process_from(doc, "rho");
    auto sigma = process_from(doc, "sigma");
    std::vector<double> etas = doc.get("scan", "etas").as_number_array();
    std::vector<int> ns;
    for (double v : doc.get("scan", "ns").as_number_array()) ns.push_back(static_cast<int>(v));

    std::vector<std::vector<ergodic::ScanRow>> chunks(ns.size());
    parallel_for(static_cast<int>(ns.size()), opt.jobs, [&](int i) {
        chunks[i] = ergodic::spectral_rate_scan(rho, sigma, etas, {ns[i]});
    });
    std::string csv = "n,eta,value,lower,upper,kl\n";
    for (const auto& chunk : chunks)
        for (const auto& r : chunk)
            csv += std::to_string(r.n) + "," + fmt(r.eta) + "," + fmt(r.rate) + "," +
                   fmt(r.lower) + "," + fmt(r.upper) + "," + fmt(r.kl) + "\n";
    write_file(opt.out_dir, "ergodic_scan.csv", csv);

    if (doc.has("scan", "nagaoka_as")) {
        auto as = doc.get("scan", "nagaoka_as").as_number_array();
        auto rows = ergodic::nagaoka_scan(rho, sigma, ns, as);
        std::string ncsv = "n,a,mass\n";
        for (const auto& r : rows)
            ncsv += std::to_string(r.n) + "," + fmt(r.a) + "," + fmt(r.mass) + "\n";
        write_file(opt.out_dir, "nagaoka.csv", ncsv);
    }
    log += "ergodic-scan: " + std::to_string(ns.size() * etas.size()) + " points\n";
    return 0;
}

int run_stein_scan(const TomlDoc& doc, const RunOptions& opt, std::string& log) {
    SubnormalizedState rho(matrix_from(doc, "stein", "rho"));
    HermitianOperator h(matrix_from(doc, "stein", "h"));
    const double beta = doc.get("stein", "beta").as_number();
    std::vector<double> etas = doc.get("stein", "etas").as_number_array();
    std::vector<int> ns;
    for (double v : doc.get("stein", "ns").as_number_array()) ns.push_back(static_cast<int>(v));

    std::vector<std::vector<stein::QuantumRateRow>> chunks(ns.size());
    parallel_for(static_cast<int>(ns.size()), opt.jobs, [&](int i) {
        chunks[i] = stein::quantum_rate_scan(rho, h, beta, etas, {ns[i]});
    });
    std::string csv = "n,eta,rate,lower,upper,kl\n";
    for (const auto& chunk : chunks)
        for (const auto& r : chunk)
            csv += std::to_string(r.n) + "," + fmt(r.eta) + "," + fmt(r.rate) + "," +
                   fmt(r.rate) + "," + fmt(r.rate) + "," + fmt(r.kl) + "\n";
    write_file(opt.out_dir, "stein_scan.csv", csv);

    if (doc.has("stein", "w_report") && doc.get("stein", "w_report").as_bool()) {
        const int n = static_cast<int>(doc.number_or("stein", "w_n", 8));
        const double eps = doc.number_or("stein", "w_eps", 0.3);
        auto g = thermo::gibbs(h, beta);
        HermitianOperator w(g.weight);
        const double c = d_kl(rho, w).value;
        const double s = renyi_entropy(rho, Alpha::One);
        auto pi_rho = stein::iid_typical_projector(rho, n, eps);
        auto pi_rel = stein::relative_typical_projector(w, n, eps, s + c, &rho);
        if (!pi_rho.dense || !pi_rel.dense)
            throw CapExceeded("stein-scan: W report needs a materializable projector");
        auto rho_n = tensor_power(HermitianOperator(rho.matrix()), n);
        auto sig_n = tensor_power(w, n);
        auto rep = stein::build_and_verify_W(rho_n.matrix(), sig_n.matrix(), *pi_rho.dense,
                                             *pi_rel.dense, c, eps, n);
        nlohmann::json j;
        j["n"] = rep.n;
        j["eps"] = rep.eps;
        j["c"] = rep.c;
        j["trace_pi_rho"] = rep.trace_pi_rho;
        j["trace_pi_rel_rho"] = rep.trace_pi_rel_rho;
        j["dim_pi_rho"] = rep.dim_pi_rho;
        j["cond1"] = rep.cond1;
        j["cond2"] = rep.cond2;
        j["cond3"] = rep.cond3;
        j["cond4"] = rep.cond4;
        j["slack1"] = rep.slack1;
        j["slack2"] = rep.slack2;
        j["slack3"] = rep.slack3;
        j["overlap"] = rep.overlap;
        j["residual"] = rep.residual;
        write_file(opt.out_dir, "typicality_report.json", j.dump(2) + "\n");
    }
    log += "stein-scan: " + std::to_string(ns.size() * etas.size()) + " points\n";
    return 0;
}

int run_thermo_convert(const TomlDoc& doc, const RunOptions& opt, std::string& log) {
    auto energies = doc.get("thermo", "energies").as_number_array();
    const double beta = doc.get("thermo", "beta").as_number();
    RealVector ev(energies.size());
    for (size_t i = 0; i < energies.size(); ++i) ev(i) = energies[i];
    auto g = thermo::gibbs(HermitianOperator::diagonal(ev), beta);

    auto pops = doc.get("thermo", "rho").as_number_array();
    auto pops_prime = doc.get("thermo", "rho_prime").as_number_array();
    RealVector p(pops.size()), q(pops_prime.size());
    for (size_t i = 0; i < pops.size(); ++i) p(i) = pops[i];
    for (size_t i = 0; i < pops_prime.size(); ++i) q(i) = pops_prime[i];
    SubnormalizedState rho(HermitianOperator::diagonal(p).matrix());
    SubnormalizedState rho_prime(HermitianOperator::diagonal(q).matrix());
    const double eps = doc.number_or("thermo", "eps", 0.0);

    nlohmann::json j;
    j["beta"] = beta;
    j["free_energy"] = g.free_energy;
    j["convertible"] = thermo::tm_convertible(rho, rho_prime, g);
    auto curve = thermo::thermomajorization_curve(rho, g);
    auto curve_p = thermo::thermomajorization_curve(rho_prime, g);
    j["curve_rho"]["x"] = curve.xs;
    j["curve_rho"]["y"] = curve.ys;
    j["curve_rho_prime"]["x"] = curve_p.xs;
    j["curve_rho_prime"]["y"] = curve_p.ys;
    auto wd = thermo::work_of_transition(rho, g, eps, thermo::Direction::Distill);
    auto wf = thermo::work_of_transition(rho, g, eps, thermo::Direction::Form);
    j["distill"] = {{"value", wd.value}, {"lower", wd.lower}, {"upper", wd.upper}};
    j["form"] = {{"value", wf.value}, {"lower", wf.lower}, {"upper", wf.upper}};
    write_file(opt.out_dir, "thermo_convert.json", j.dump(2) + "\n");

    // optional reference-frame scan for a coherent state on the binned ladder
    if (doc.has("thermo", "delta") && doc.has("thermo", "d_c_list") &&
        doc.has("thermo", "state_re")) {
        const double delta = doc.get("thermo", "delta").as_number();
        RealVector scan_ev = ev;
        if (doc.has("thermo", "scan_energies")) {
            auto se = doc.get("thermo", "scan_energies").as_number_array();
            scan_ev = RealVector(se.size());
            for (size_t i = 0; i < se.size(); ++i) scan_ev(i) = se[i];
        }
        auto hb = thermo::discretize(HermitianOperator::diagonal(scan_ev), delta);
        SubnormalizedState coherent(matrix_from(doc, "thermo", "state"));
        std::string csv = "d_c,deviation,bound\n";
        for (double dcv : doc.get("thermo", "d_c_list").as_number_array()) {
            auto rep = thermo::reference_frame_postselect(coherent, hb,
                                                          static_cast<int>(dcv));
            csv += fmt(dcv) + "," + fmt(rep.deviation) + "," + fmt(rep.bound) + "\n";
        }
        write_file(opt.out_dir, "reference_frame.csv", csv);
    }
    log += "thermo-convert: done\n";
    return 0;
}

int run_divergence_audit(const TomlDoc& doc, std::uint64_t seed, const RunOptions& opt,
                         std::string& log) {
    std::vector<int> dims{2, 3, 4};
    if (doc.has("audit", "dims")) {
        dims.clear();
        for (double v : doc.get("audit", "dims").as_number_array())
            dims.push_back(static_cast<int>(v));
    }
    const int trials = static_cast<int>(doc.number_or("audit", "trials", 20));
    std::vector<double> etas{0.1, 0.3, 0.5, 0.7, 0.9};

    Rng rng(seed);
    std::string csv = "dim,trial,d0,dhalf,dkl,dmax,ordering_ok\n";
    std::string eta_csv = "dim,trial,eta,dh\n";
    int failures = 0;
    int t_index = 0;
    for (int dim : dims) {
        for (int t = 0; t < trials; ++t, ++t_index) {
            auto rho = random_density(dim, rng);
            Matrix gmat = random_gaussian_matrix(dim, dim, rng);
            Matrix w = gmat * gmat.adjoint() + 0.05 * Matrix::Identity(dim, dim);
            w /= w.trace();
            HermitianOperator sigma(std::move(w));
            const double d0 = d_min_zero(rho, sigma).value;
            const double dh = d_min_half(rho, sigma).value;
            const double d1 = d_kl(rho, sigma).value;
            const double dm = d_max(rho, sigma).value;
            const bool ok = -std::log(sigma.trace()) <= d0 + 1e-9 && d0 <= dh + 1e-9 &&
                            dh <= d1 + 1e-9 && d1 <= dm + 1e-9;
            if (!ok) {
                ++failures;
                log += "FAIL ordering-chain: dim " + std::to_string(dim) + " trial " +
                       std::to_string(t) + "\n";
            }
            csv += std::to_string(dim) + "," + std::to_string(t) + "," + fmt(d0) + "," +
                   fmt(dh) + "," + fmt(d1) + "," + fmt(dm) + "," + (ok ? "1" : "0") + "\n";
            // empirical η-behaviour of the hypothesis-testing divergence
            for (double eta : etas) {
                const double v = d_hyp(rho, sigma, eta, false).value;
                eta_csv += std::to_string(dim) + "," + std::to_string(t) + "," + fmt(eta) +
                           "," + fmt(v) + "\n";
            }
        }
    }
    write_file(opt.out_dir, "divergence_audit.csv", csv);
    write_file(opt.out_dir, "dh_eta_log.csv", eta_csv);
    log += "divergence-audit: " + std::to_string(t_index) + " trials, " +
           std::to_string(failures) + " failures\n";
    return failures == 0 ? 0 : 1;
}

int run_property_suite(const TomlDoc& doc, std::uint64_t seed, const RunOptions& opt,
                       std::string& log) {
    const int trials = static_cast<int>(doc.number_or("suite", "trials", 25));
    Rng rng(seed);
    std::vector<CheckOutcome> outcomes;

    {
        CheckOutcome c{"ordering-chain", trials, 0, 1e300};
        for (int t = 0; t < trials; ++t) {
            const int dim = 2 + t % 5;
            auto rho = random_density(dim, rng);
            Matrix g = random_gaussian_matrix(dim, dim, rng);
            Matrix w = g * g.adjoint() + 0.05 * Matrix::Identity(dim, dim);
            w /= w.trace();
            HermitianOperator sigma(std::move(w));
            const double d0 = d_min_zero(rho, sigma).value;
            const double dh = d_min_half(rho, sigma).value;
            const double d1 = d_kl(rho, sigma).value;
            const double dm = d_max(rho, sigma).value;
            const double slack =
                std::min({d0 + std::log(sigma.trace()), dh - d0, d1 - dh, dm - d1});
            c.worst = std::min(c.worst, slack);
            if (slack < -1e-9) {
                ++c.failures;
                log += "FAIL ordering-chain at trial " + std::to_string(t) + "\n";
            }
        }
        outcomes.push_back(c);
    }
    {
        CheckOutcome c{"dpi-channel", trials, 0, 1e300};
        for (int t = 0; t < trials; ++t) {
            const int dim = 3;
            auto rho = random_density(dim, rng);
            auto sigma = random_density(dim, rng);
            auto e = random_channel(dim, dim, seed + 7919 * static_cast<std::uint64_t>(t));
            auto er = apply_channel(e, rho);
            auto es = HermitianOperator(e.apply(sigma.matrix()));
            const double slack =
                std::min({d_kl(rho, sigma.op()).value - d_kl(er, es).value,
                          d_max(rho, sigma.op()).value - d_max(er, es).value,
                          d_min_half(rho, sigma.op()).value - d_min_half(er, es).value});
            c.worst = std::min(c.worst, slack);
            if (slack < -1e-8) {
                ++c.failures;
                log += "FAIL dpi-channel at trial " + std::to_string(t) + "\n";
            }
        }
        outcomes.push_back(c);
    }
    {
        CheckOutcome c{"sandwich-dmax-dh", trials, 0, 1e300};
        for (int t = 0; t < trials; ++t) {
            auto rho = random_density(3, rng);
            auto sigma = random_density(3, rng);
            const double eps = 0.1;
            const double dmax_eps = d_max_smooth(rho, sigma.op(), eps).value;
            const double lo = d_hyp(rho, sigma.op(), 2 * eps, false).value - std::log(2.0);
            const double hi = d_hyp(rho, sigma.op(), eps * eps / 2.0, false).value;
            const double slack = std::min(dmax_eps - lo, hi - dmax_eps);
            c.worst = std::min(c.worst, slack);
            if (slack < -1e-7) {
                ++c.failures;
                log += "FAIL sandwich-dmax-dh at trial " + std::to_string(t) + "\n";
            }
        }
        outcomes.push_back(c);
    }
    {
        CheckOutcome c{"gpm-exact-conversion", 0, 0, 1e300};
        for (int t = 0; t < trials; ++t) {
            auto sigma = random_density(4, rng);
            auto rho = random_density_rank(4, 2, rng);
            auto noise = random_density(4, rng);
            std::uniform_real_distribution<double> u(0.0, 0.25);
            const double mix = u(rng);
            SubnormalizedState rp(Matrix((1 - mix) * sigma.matrix() + mix * noise.matrix()));
            if (d_max(rp, sigma.op()).value > d_min_zero(rho, sigma.op()).value) continue;
            ++c.trials;
            auto built = thermo::gpm_construct(rho, sigma, rp, sigma);
            const double dev =
                std::max(operator_norm(built.channel.apply(rho.matrix()) - rp.matrix()),
                         operator_norm(built.channel.apply(sigma.matrix()) - sigma.matrix()));
            c.worst = std::min(c.worst, 1e-10 - dev);
            if (dev > 1e-10) {
                ++c.failures;
                log += "FAIL gpm-exact-conversion at trial " + std::to_string(t) + "\n";
            }
        }
        outcomes.push_back(c);
    }
    {
        CheckOutcome c{"suppression-bound", trials, 0, 1e300};
        for (int t = 0; t < trials; ++t) {
            auto h = random_hermitian(5, rng);
            auto hb = thermo::discretize(h, 0.4);
            auto g = thermo::gibbs(HermitianOperator(hb.binned), 0.7);
            auto noise = random_density(5, rng);
            std::uniform_real_distribution<double> u(0.05, 0.8);
            const double mix = u(rng);
            SubnormalizedState rho(Matrix((1 - mix) * g.state + mix * noise.matrix()));
            auto w = HermitianOperator(g.weight);
            const double a = d_max(rho, w).value;
            const double b = d_min_half(rho, w).value;
            auto rep =
                thermo::suppression_check(rho, hb, 0.7, 0.5 * (a + b), 0.5 * (a - b) + 1e-9);
            c.worst = std::min(c.worst, rep.worst_slack);
            if (rep.worst_slack < -1e-10) {
                ++c.failures;
                log += "FAIL suppression-bound at trial " + std::to_string(t) + "\n";
            }
        }
        outcomes.push_back(c);
    }

    int failures = 0;
    nlohmann::json j;
    for (const auto& c : outcomes) {
        failures += c.failures;
        j[c.anchor] = {{"trials", c.trials}, {"failures", c.failures}, {"worst", c.worst}};
    }
    write_file(opt.out_dir, "property_suite.csv", outcomes_csv(outcomes));
    write_file(opt.out_dir, "property_suite.json", j.dump(2) + "\n");
    log += "property-suite: " + std::to_string(failures) + " failures\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int run_experiment(const RunOptions& options, std::string* log_out) {
    std::string log;
    int code = 0;
    try {
        TomlDoc doc = parse_toml_file(options.config_path);
        const std::string command = doc.get("experiment", "command").as_string();
        std::optional<std::uint64_t> seed = options.seed;
        if (!seed && doc.has("experiment", "seed"))
            seed = static_cast<std::uint64_t>(doc.get("experiment", "seed").as_number());
        RunOptions opt = options;
        if (opt.out_dir == ".") opt.out_dir = doc.string_or("experiment", "out", ".");

        if (command == "counterexample") {
            code = run_counterexample(doc, opt, log);
        } else if (command == "ergodic-scan") {
            code = run_ergodic_scan(doc, opt, log);
        } else if (command == "stein-scan") {
            code = run_stein_scan(doc, opt, log);
        } else if (command == "thermo-convert") {
            code = run_thermo_convert(doc, opt, log);
        } else if (command == "divergence-audit") {
            if (!seed) throw ParseError("divergence-audit requires a seed");
            code = run_divergence_audit(doc, *seed, opt, log);
        } else if (command == "property-suite") {
            if (!seed) throw ParseError("property-suite requires a seed");
            code = run_property_suite(doc, *seed, opt, log);
        } else {
            throw ParseError("unknown command: " + command);
        }
    } catch (const ParseError& e) {
        log += std::string("config error: ") + e.what() + "\n";
        code = 2;
    } catch (const std::exception& e) {
        log += std::string("invariant failure: ") + e.what() + "\n";
        code = 1;
    }
    if (log_out) *log_out = log;
    return code;
}

}  // namespace oneshot::config
