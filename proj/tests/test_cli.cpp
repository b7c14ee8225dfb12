#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string out_file = "cli_stdout.tmp";
    const std::string cmd = std::string(QBATTERY_BIN) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WEXITSTATUS(status);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    std::remove(out_file.c_str());
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Value of the named column in the first data row of a one-row CSV.
double csv_value(const std::string& csv, const std::string& column) {
    std::stringstream ss(csv);
    std::string header;
    std::string row;
    std::getline(ss, header);
    std::getline(ss, row);
    std::stringstream hs(header);
    std::stringstream rs(row);
    std::string name;
    std::string value;
    while (std::getline(hs, name, ',') && std::getline(rs, value, ',')) {
        if (name == column) {
            return std::stod(value);
        }
    }
    REQUIRE(false);
    return 0.0;
}

} // namespace

TEST_CASE("advantage subcommand fixed values") {
    auto w5 = run("advantage --state w:5");
    CHECK(w5.code == 0);
    CHECK(csv_value(w5.out, "gamma_c") == doctest::Approx(2.6).epsilon(1e-9));

    auto ghz4 = run("advantage --state ghz:4");
    CHECK(ghz4.code == 0);
    CHECK(csv_value(ghz4.out, "gamma_c") == doctest::Approx(1.0).epsilon(1e-9));

    auto sep = run("advantage --state random-sep:seed=7");
    CHECK(sep.code == 0);
    CHECK(csv_value(sep.out, "gamma_c") <= 1.0 + 1e-8);
}

TEST_CASE("advantage power report saturates with the aligned Hamiltonian") {
    auto r = run("advantage --state random:dims=3x3,seed=4 --ham topu");
    CHECK(r.code == 0);
    CHECK(csv_value(r.out, "ratio") == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(csv_value(r.out, "kappa") == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("wtable matches the closed form") {
    auto r = run("wtable --n-max 6 --out wtable_test.csv");
    CHECK(r.code == 0);
    const std::string csv = slurp("wtable_test.csv");
    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line); // header
    int rows = 0;
    while (std::getline(ss, line)) {
        const auto last = line.rfind(',');
        CHECK(std::stod(line.substr(last + 1)) <= 1e-9);
        ++rows;
    }
    CHECK(rows == 5);
    std::remove("wtable_test.csv");
}

TEST_CASE("identical configs produce byte-identical outputs") {
    const std::string flags =
        "thermalize --d 2 --t-final 0.4 --record-every 50 --out therm_a.csv";
    CHECK(run(flags).code == 0);
    const std::string first = slurp("therm_a.csv");
    CHECK(run(flags).code == 0);
    const std::string second = slurp("therm_a.csv");
    CHECK(first == second);
    CHECK(!first.empty());

    // Sidecar records the resolved config.
    const std::string sidecar = slurp("therm_a.csv.config.json");
    CHECK(sidecar.find("\"t_final\"") != std::string::npos);
    std::remove("therm_a.csv");
    std::remove("therm_a.csv.config.json");

    auto s1 = run("syk --n 4 --tau-max 1.0 --tau-step 0.5 --out syk_a.csv");
    CHECK(s1.code == 0);
    const std::string syk_first = slurp("syk_a.csv");
    CHECK(run("syk --n 4 --tau-max 1.0 --tau-step 0.5 --out syk_a.csv").code == 0);
    CHECK(slurp("syk_a.csv") == syk_first);
    std::remove("syk_a.csv");
    std::remove("syk_a.csv.config.json");
}

TEST_CASE("config file values are used and flags override them") {
    {
        std::ofstream cfg("wtable_cfg.json");
        cfg << "{\"command\":\"wtable\",\"params\":{\"n_max\":4}}\n";
    }
    auto from_file = run("wtable --config wtable_cfg.json --out wtable_cfg_out.csv");
    CHECK(from_file.code == 0);
    std::stringstream ss(slurp("wtable_cfg_out.csv"));
    int lines = 0;
    std::string line;
    while (std::getline(ss, line)) {
        ++lines;
    }
    CHECK(lines == 4); // header + N = 2..4

    auto overridden = run("wtable --config wtable_cfg.json --n-max 6 --out wtable_cfg_out.csv");
    CHECK(overridden.code == 0);
    std::stringstream ss2(slurp("wtable_cfg_out.csv"));
    lines = 0;
    while (std::getline(ss2, line)) {
        ++lines;
    }
    CHECK(lines == 6);
    std::remove("wtable_cfg.json");
    std::remove("wtable_cfg_out.csv");
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("advantage").code == 2);                 // missing --state
    CHECK(run("advantage --state nosuch:1").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("thermalize --dt 0.5").code == 2);       // dt*g too large
}

TEST_CASE("verify runs the property suites") {
    auto ok = run("verify --trials 6");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("PASS") != std::string::npos);
    CHECK(ok.out.find("FAIL") == std::string::npos);

    auto mutated = run("verify --trials 6 --selftest-mutation");
    CHECK(mutated.code != 0);
    CHECK(mutated.out.find("FAIL") != std::string::npos);
    CHECK(mutated.out.find("failing seed") != std::string::npos);
}
