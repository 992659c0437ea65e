#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oneshot/config.hpp"
#include "oneshot/process.hpp"
#include "oneshot/stein.hpp"

using namespace oneshot;
using namespace oneshot::config;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string dir = std::filesystem::temp_directory_path().string() + "/oneshot_tests";
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("toml parser") {
    auto doc = parse_toml(R"(
# comment
[experiment]
command = "counterexample"   # trailing comment
seed = 42
flag = true

[counterexample]
beta = 1.0
ns = [10, 20,
      50]
matrix = [[0.8, 0.25],
          [0.2, 0.75]]
name = "x y"
)");
    CHECK(doc.get("experiment", "command").as_string() == "counterexample");
    CHECK(doc.get("experiment", "seed").as_number() == 42.0);
    CHECK(doc.get("experiment", "flag").as_bool());
    CHECK(doc.get("counterexample", "ns").as_number_array() ==
          std::vector<double>{10, 20, 50});
    auto m = doc.get("counterexample", "matrix").as_matrix();
    CHECK(m[0][1] == 0.25);
    CHECK(doc.get("counterexample", "name").as_string() == "x y");
    CHECK_THROWS_AS(parse_toml("key value_without_equals"), ParseError);
}

TEST_CASE("counterexample command matches the library") {
    const std::string cfg = write_temp("counter.toml", R"(
[experiment]
command = "counterexample"
seed = 1

[counterexample]
beta = 1.0
eps = 0.1
ns = [10, 20, 50]
)");
    const std::string out = std::filesystem::temp_directory_path().string() + "/oneshot_out1";
    std::filesystem::remove_all(out);
    RunOptions opt;
    opt.config_path = cfg;
    opt.out_dir = out;
    std::string log;
    CHECK(run_experiment(opt, &log) == 0);
    const std::string csv = slurp(out + "/counterexample.csv");

    auto rows = stein::toy_counterexample(1.0, {10, 20, 50}, 0.1);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,kl_rate,d0_rate,dmax_rate");
    for (const auto& r : rows) {
        REQUIRE(std::getline(in, line));
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        CHECK(std::stoi(cell) == r.n);
        std::getline(ls, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(r.kl_rate).epsilon(1e-12));
    }
}

TEST_CASE("deterministic outputs under a fixed seed") {
    const std::string cfg = write_temp("suite.toml", R"(
[experiment]
command = "property-suite"
seed = 42

[suite]
trials = 6
)");
    auto run_once = [&](const std::string& out) {
        std::filesystem::remove_all(out);
        RunOptions opt;
        opt.config_path = cfg;
        opt.out_dir = out;
        std::string log;
        const int code = run_experiment(opt, &log);
        CHECK(code == 0);
        return slurp(out + "/property_suite.csv") + slurp(out + "/property_suite.json");
    };
    const std::string base = std::filesystem::temp_directory_path().string();
    const std::string a = run_once(base + "/oneshot_out2a");
    const std::string b = run_once(base + "/oneshot_out2b");
    CHECK(a == b);
}

TEST_CASE("ergodic scan reproduced by direct module calls") {
    const std::string cfg = write_temp("ergodic.toml", R"(
[experiment]
command = "ergodic-scan"

[rho]
kind = "markov"
transition = [[0.8, 0.25], [0.2, 0.75]]

[sigma]
kind = "transfer_gibbs"
coupling = [[-1.0, 1.0], [1.0, -1.0]]
beta = 0.5

[scan]
etas = [0.3, 0.7]
ns = [4, 8]
)");
    const std::string out = std::filesystem::temp_directory_path().string() + "/oneshot_out3";
    std::filesystem::remove_all(out);
    RunOptions opt;
    opt.config_path = cfg;
    opt.out_dir = out;
    opt.jobs = 2;
    std::string log;
    CHECK(run_experiment(opt, &log) == 0);
    const std::string csv = slurp(out + "/ergodic_scan.csv");

    ergodic::RealMatrix t(2, 2), h(2, 2);
    t << 0.8, 0.25, 0.2, 0.75;
    h << -1.0, 1.0, 1.0, -1.0;
    auto rho = ergodic::FiniteProcess::markov(t);
    auto sigma = ergodic::FiniteProcess::transfer_gibbs(h, 0.5);
    auto rows = ergodic::spectral_rate_scan(rho, sigma, {0.3, 0.7}, {4, 8});
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    for (const auto& r : rows) {
        REQUIRE(std::getline(in, line));
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        CHECK(std::stoi(cell) == r.n);
        std::getline(ls, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(r.eta));
        std::getline(ls, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(r.rate).epsilon(1e-12));
    }
}

TEST_CASE("exit codes") {
    // parse error → 2
    const std::string bad = write_temp("bad.toml", "not a valid [config\n");
    RunOptions opt;
    opt.config_path = bad;
    opt.out_dir = std::filesystem::temp_directory_path().string() + "/oneshot_out4";
    std::string log;
    CHECK(run_experiment(opt, &log) == 2);

    // unknown command → 2
    const std::string unknown = write_temp("unknown.toml", R"(
[experiment]
command = "frobnicate"
)");
    opt.config_path = unknown;
    CHECK(run_experiment(opt, &log) == 2);

    // missing mandatory seed for a randomized suite → 2
    const std::string noseed = write_temp("noseed.toml", R"(
[experiment]
command = "property-suite"

[suite]
trials = 2
)");
    opt.config_path = noseed;
    CHECK(run_experiment(opt, &log) == 2);

    // missing file → 2
    opt.config_path = "/nonexistent/path.toml";
    CHECK(run_experiment(opt, &log) == 2);
}

TEST_CASE("anchor registry") {
    const auto& anchors = check_anchors();
    CHECK(anchors.size() >= 20);
    bool has_ordering = false;
    for (const auto& [name, desc] : anchors) {
        CHECK_FALSE(name.empty());
        CHECK_FALSE(desc.empty());
        if (name == "ordering-chain") has_ordering = true;
    }
    CHECK(has_ordering);
}

TEST_CASE("thermo convert and stein scan commands") {
    const std::string cfg = write_temp("thermo.toml", R"(
[experiment]
command = "thermo-convert"

[thermo]
energies = [0.0, 0.7]
beta = 0.9
rho = [1.0, 0.0]
rho_prime = [0.662, 0.338]
eps = 0.0
)");
    const std::string out = std::filesystem::temp_directory_path().string() + "/oneshot_out5";
    std::filesystem::remove_all(out);
    RunOptions opt;
    opt.config_path = cfg;
    opt.out_dir = out;
    std::string log;
    CHECK(run_experiment(opt, &log) == 0);
    const std::string json = slurp(out + "/thermo_convert.json");
    CHECK(json.find("\"convertible\": true") != std::string::npos);

    const std::string cfg2 = write_temp("stein.toml", R"(
[experiment]
command = "stein-scan"

[stein]
rho_re = [[0.7, 0.1], [0.1, 0.3]]
h_re = [[0.0, 0.0], [0.0, 1.5]]
beta = 0.5
etas = [0.5]
ns = [4, 6]
w_report = true
w_n = 6
w_eps = 0.4
)");
    const std::string out2 = std::filesystem::temp_directory_path().string() + "/oneshot_out6";
    std::filesystem::remove_all(out2);
    opt.config_path = cfg2;
    opt.out_dir = out2;
    CHECK(run_experiment(opt, &log) == 0);
    CHECK(slurp(out2 + "/stein_scan.csv").find("n,eta,rate") == 0);
    CHECK(slurp(out2 + "/typicality_report.json").find("\"cond1\": true") != std::string::npos);
}
