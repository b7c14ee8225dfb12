// qbattery — batch front-end: Gamma_C reports, thermalization and SYK
// traces, the W-state table, and the property-suite verifier.

#include "qbat/advantage.hpp"
#include "qbat/entanglement.hpp"
#include "qbat/io.hpp"
#include "qbat/lindblad.hpp"
#include "qbat/observables.hpp"
#include "qbat/propsuite.hpp"
#include "qbat/rng.hpp"
#include "qbat/states.hpp"
#include "qbat/syk.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <variant>

namespace {

using nlohmann::json;
using namespace qbat;

struct ParsedSpec {
    std::string name;
    std::map<std::string, std::string> params;
    std::string bare; // single unnamed parameter, e.g. "w:5"
};

ParsedSpec parse_spec(const std::string& text) {
    ParsedSpec out;
    const auto colon = text.find(':');
    out.name = text.substr(0, colon);
    if (colon == std::string::npos) {
        return out;
    }
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            out.bare = item;
        } else {
            out.params[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    return out;
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, 'x')) {
        dims.push_back(std::stoi(item));
    }
    return dims;
}

int spec_int(const ParsedSpec& s, const std::string& key, int fallback) {
    const auto it = s.params.find(key);
    if (it != s.params.end()) {
        return std::stoi(it->second);
    }
    if (!s.bare.empty() && s.params.empty()) {
        return std::stoi(s.bare);
    }
    return fallback;
}

double spec_double(const ParsedSpec& s, const std::string& key, double fallback) {
    const auto it = s.params.find(key);
    return it != s.params.end() ? std::stod(it->second) : fallback;
}

std::uint64_t spec_seed(const ParsedSpec& s, std::uint64_t fallback) {
    const auto it = s.params.find("seed");
    return it != s.params.end() ? std::stoull(it->second) : fallback;
}

HilbertSpec spec_dims(const ParsedSpec& s, const std::vector<int>& fallback) {
    const auto it = s.params.find("dims");
    return HilbertSpec(it != s.params.end() ? parse_dims(it->second) : fallback);
}

// Either representation of a battery state; pure states keep the Ket so the
// fast Gamma_C path applies.
struct StateValue {
    std::optional<Ket> ket;
    std::optional<DensityMatrix> density;

    const HilbertSpec& spec() const { return ket ? ket->spec() : density->spec(); }
    DensityMatrix as_density() const {
        return ket ? DensityMatrix::from_ket(*ket) : *density;
    }
    double advantage() const { return ket ? gamma_c(*ket) : gamma_c(*density); }
};

StateValue make_state(const std::string& text, std::uint64_t default_seed) {
    const ParsedSpec s = parse_spec(text);
    StateValue out;
    if (s.name == "w") {
        out.ket = w_state(spec_int(s, "n", 3));
    } else if (s.name == "ghz") {
        out.ket = ghz_two_qudit(spec_int(s, "d", 2));
    } else if (s.name == "qutrit-initial") {
        out.ket = qutrit_initial();
    } else if (s.name == "qutrit-final") {
        out.ket = qutrit_final();
    } else if (s.name == "ame5") {
        out.ket = ame5_fixture();
    } else if (s.name == "random") {
        out.ket = random_pure(spec_dims(s, {3, 3}), spec_seed(s, default_seed));
    } else if (s.name == "product") {
        const HilbertSpec spec = spec_dims(s, {2, 2});
        out.density = random_separable(spec, 1, spec_seed(s, default_seed));
    } else if (s.name == "random-mixed") {
        const HilbertSpec spec = spec_dims(s, {3, 3});
        out.density = random_density(spec, spec_int(s, "rank", 4), spec_seed(s, default_seed));
    } else if (s.name == "random-sep") {
        const HilbertSpec spec = spec_dims(s, {3, 3});
        out.density = random_separable(spec, spec_int(s, "terms", 4), spec_seed(s, default_seed));
    } else {
        throw InvalidParameter("unknown state spec '" + s.name +
                               "' (try w:N, ghz:D, qutrit-initial, qutrit-final, ame5, "
                               "random, random-mixed, random-sep, product)");
    }
    return out;
}

BatteryHamiltonian make_hamiltonian(const std::string& text, const StateValue& state,
                                    std::uint64_t default_seed) {
    const ParsedSpec s = parse_spec(text);
    const HilbertSpec& spec = state.spec();
    if (s.name == "field") {
        const double h = spec_double(s, "h", 1.0);
        std::vector<Matrix> locals;
        for (int i = 0; i < spec.cells(); ++i) {
            if (spec.dim(i) != 2) {
                throw InvalidParameter("ham field: requires qubit cells");
            }
            Matrix sy(2, 2);
            sy << 0.0, Complex(0.0, -h), Complex(0.0, h), 0.0;
            locals.push_back(sy);
        }
        return battery_hamiltonian(spec, locals);
    }
    if (s.name == "ladder") {
        const double omega0 = spec_double(s, "omega0", 1.0);
        std::vector<Matrix> locals;
        for (int i = 0; i < spec.cells(); ++i) {
            Matrix h = Matrix::Zero(spec.dim(i), spec.dim(i));
            for (int k = 0; k < spec.dim(i); ++k) {
                h(k, k) = omega0 * static_cast<double>(k + 1);
            }
            locals.push_back(h);
        }
        return battery_hamiltonian(spec, locals);
    }
    if (s.name == "random") {
        Rng rng(spec_seed(s, default_seed));
        std::vector<Matrix> locals;
        for (int i = 0; i < spec.cells(); ++i) {
            Matrix a(spec.dim(i), spec.dim(i));
            for (int r = 0; r < spec.dim(i); ++r) {
                for (int c = 0; c < spec.dim(i); ++c) {
                    a(r, c) = rng.complex_gaussian();
                }
            }
            locals.push_back(0.5 * (a + a.adjoint()).eval());
        }
        return battery_hamiltonian(spec, locals);
    }
    if (s.name == "topu") {
        // Align u with the top eigenvector of the commutation matrix: the
        // saturating choice of Theorem 1.
        const ObservableSet m(spec);
        const CommutationMatrix gc =
            state.ket ? commutation_matrix_pure(*state.ket, m)
                      : commutation_matrix(*state.density, m);
        return hamiltonian_from_direction(m, gc.top_eigenvector(),
                                          spec_double(s, "gap", 1.0));
    }
    throw InvalidParameter("unknown hamiltonian spec '" + s.name +
                           "' (try field:h=..., ladder:omega0=..., random:seed=..., topu)");
}

void write_table(const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows, const std::string& out_path,
                 const std::string& format) {
    std::ostringstream body;
    if (format == "json") {
        json j = json::array();
        for (const auto& row : rows) {
            json obj;
            for (std::size_t c = 0; c < header.size(); ++c) {
                obj[header[c]] = row[c];
            }
            j.push_back(obj);
        }
        body << j.dump(2) << '\n';
    } else {
        for (std::size_t c = 0; c < header.size(); ++c) {
            body << (c ? "," : "") << header[c];
        }
        body << '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                body << (c ? "," : "") << io::g17(row[c]);
            }
            body << '\n';
        }
    }
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(out_path);
        if (!out) {
            throw InvalidParameter("cannot open output path " + out_path);
        }
        out << body.str();
    }
}

void write_sidecar(const std::string& out_path, const json& resolved) {
    if (out_path.empty()) {
        return;
    }
    std::ofstream out(out_path + ".config.json");
    if (!out) {
        throw InvalidParameter("cannot open sidecar path " + out_path + ".config.json");
    }
    out << resolved.dump(2) << '\n';
}

json load_config(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) {
        throw CLI::ValidationError("--config", "cannot open config file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw CLI::ValidationError("--config", std::string("JSON parse error: ") + e.what());
    }
    if (j.contains("command") && j["command"] != command) {
        throw CLI::ValidationError("--config", "config command '" +
                                                   j["command"].get<std::string>() +
                                                   "' does not match subcommand '" + command + "'");
    }
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum battery charging advantage toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 1;
    app.add_option("--config", config_path, "JSON config file; flags override file values")
        ->configurable(false);
    app.add_option("--seed", seed, "base seed for random inputs");
    app.add_option("--out", out_path, "output path (default: stdout for reports)");
    app.add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // advantage
    auto* cmd_adv = app.add_subcommand("advantage", "Gamma_C of a state, optionally a power report");
    std::string state_spec;
    std::string ham_spec;
    double driving_scale = 1.0;
    cmd_adv->add_option("--state", state_spec, "state spec, e.g. w:5, ghz:4, random-sep:seed=7")
        ->required();
    cmd_adv->add_option("--ham", ham_spec,
                        "battery spec (field:h=, ladder:omega0=, random:seed=, topu); enables the "
                        "power report under optimal driving");
    cmd_adv->add_option("--driving-scale", driving_scale, "scale of the optimal driving");

    // thermalize
    auto* cmd_th = app.add_subcommand("thermalize", "two-qudit thermalization trace");
    lindblad::Config lcfg;
    cmd_th->add_option("--d", lcfg.d, "qudit dimension");
    cmd_th->add_option("--omega0", lcfg.omega0, "level spacing");
    cmd_th->add_option("--g", lcfg.g, "bath coupling rate");
    cmd_th->add_option("--kt", lcfg.kt, "bath temperature");
    cmd_th->add_option("--t-final", lcfg.t_final, "duration");
    cmd_th->add_option("--dt", lcfg.dt, "integrator step");
    cmd_th->add_option("--record-every", lcfg.record_every, "steps between samples");

    // syk
    auto* cmd_syk = app.add_subcommand("syk", "SYK charging trace");
    syk::Config scfg;
    double tau_max = 10.0;
    double tau_step = 0.05;
    cmd_syk->add_option("--n", scfg.n, "number of cells");
    cmd_syk->add_option("--jbar", scfg.jbar, "coupling scale");
    cmd_syk->add_option("--h", scfg.h, "magnetic field");
    cmd_syk->add_option("--tau-max", tau_max, "last dimensionless time");
    cmd_syk->add_option("--tau-step", tau_step, "grid step");

    // wtable
    auto* cmd_wt = app.add_subcommand("wtable", "W-state Gamma_C against the closed form");
    int n_max = 8;
    cmd_wt->add_option("--n-max", n_max, "largest N (<= 12)");

    // verify
    auto* cmd_ver = app.add_subcommand("verify", "run the property suites");
    int trials = 200;
    bool mutate = false;
    cmd_ver->add_option("--trials", trials, "trials per suite");
    cmd_ver->add_flag("--selftest-mutation", mutate)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        json file_cfg = json::object();
        if (!config_path.empty()) {
            file_cfg = load_config(config_path, command);
        }
        const json params = file_cfg.value("params", json::object());
        const bool seed_given = app.count("--seed") > 0 || file_cfg.contains("seed");
        if (!app.count("--seed") && file_cfg.contains("seed")) {
            seed = file_cfg["seed"].get<std::uint64_t>();
        }
        if (!app.count("--out") && file_cfg.contains("out")) {
            out_path = file_cfg["out"].get<std::string>();
        }
        if (!app.count("--format") && file_cfg.contains("format")) {
            format = file_cfg["format"].get<std::string>();
        }

        if (*cmd_adv) {
            if (!cmd_adv->count("--state") && params.contains("state")) {
                state_spec = params["state"].get<std::string>();
            }
            if (!cmd_adv->count("--ham") && params.contains("ham")) {
                ham_spec = params["ham"].get<std::string>();
            }
            if (!cmd_adv->count("--driving-scale") && params.contains("driving_scale")) {
                driving_scale = params["driving_scale"].get<double>();
            }
            const StateValue state = make_state(state_spec, seed);
            if (ham_spec.empty()) {
                write_table({"gamma_c"}, {{state.advantage()}}, out_path, format);
            } else {
                const DensityMatrix rho = state.as_density();
                const BatteryHamiltonian h = make_hamiltonian(ham_spec, state, seed);
                const Matrix v = optimal_driving(rho, h, driving_scale);
                const PowerReport report = power_bound(rho, h, v);
                write_table({"gamma_c", "power", "bound", "ratio", "kappa", "cos_theta_v",
                             "cos_theta_h", "driving_variance", "gap_norm"},
                            {{report.gamma_c, report.power, report.bound,
                              report.power / report.bound, report.kappa, report.cos_theta_v,
                              report.cos_theta_h, report.driving_variance, report.gap_norm}},
                            out_path, format);
            }
            return 0;
        }

        if (*cmd_th) {
            auto seti = [&](const char* flag, const char* key, int& slot) {
                if (!cmd_th->count(flag) && params.contains(key)) slot = params[key].get<int>();
            };
            auto setd = [&](const char* flag, const char* key, double& slot) {
                if (!cmd_th->count(flag) && params.contains(key)) slot = params[key].get<double>();
            };
            seti("--d", "d", lcfg.d);
            setd("--omega0", "omega0", lcfg.omega0);
            setd("--g", "g", lcfg.g);
            setd("--kt", "kt", lcfg.kt);
            setd("--t-final", "t_final", lcfg.t_final);
            setd("--dt", "dt", lcfg.dt);
            seti("--record-every", "record_every", lcfg.record_every);
            lcfg.validate();

            if (out_path.empty()) {
                out_path = "thermalize.csv";
            }
            const lindblad::Trace trace = lindblad::integrate(lcfg);
            lindblad::write_csv(trace, out_path);
            write_sidecar(out_path,
                          json{{"command", "thermalize"},
                               {"seed", seed},
                               {"out", out_path},
                               {"format", "csv"},
                               {"params",
                                {{"d", lcfg.d},
                                 {"omega0", lcfg.omega0},
                                 {"g", lcfg.g},
                                 {"kt", lcfg.kt},
                                 {"t_final", lcfg.t_final},
                                 {"dt", lcfg.dt},
                                 {"record_every", lcfg.record_every}}}});
            std::cout << "wrote " << trace.times.size() << " samples to " << out_path << '\n';
            return 0;
        }

        if (*cmd_syk) {
            auto seti = [&](const char* flag, const char* key, int& slot) {
                if (!cmd_syk->count(flag) && params.contains(key)) slot = params[key].get<int>();
            };
            auto setd = [&](const char* flag, const char* key, double& slot) {
                if (!cmd_syk->count(flag) && params.contains(key)) slot = params[key].get<double>();
            };
            seti("--n", "n", scfg.n);
            setd("--jbar", "jbar", scfg.jbar);
            setd("--h", "h", scfg.h);
            setd("--tau-max", "tau_max", tau_max);
            setd("--tau-step", "tau_step", tau_step);
            scfg.seed = seed_given ? seed : syk::kDefaultSeed;
            if (tau_step <= 0.0 || tau_max < tau_step) {
                throw InvalidParameter("syk: tau grid must be positive and ascending");
            }
            scfg.tau_grid.clear();
            for (int k = 0; tau_step * k <= tau_max + 1e-12; ++k) {
                scfg.tau_grid.push_back(tau_step * k);
            }
            scfg.validate();

            if (out_path.empty()) {
                out_path = "syk.csv";
            }
            const syk::CouplingTensor couplings = syk::sample_couplings(scfg);
            const syk::Trace trace = syk::evolve(scfg, couplings);
            syk::write_csv(trace, out_path);
            write_sidecar(out_path, json{{"command", "syk"},
                                         {"seed", scfg.seed},
                                         {"out", out_path},
                                         {"format", "csv"},
                                         {"params",
                                          {{"n", scfg.n},
                                           {"jbar", scfg.jbar},
                                           {"h", scfg.h},
                                           {"tau_max", tau_max},
                                           {"tau_step", tau_step}}}});
            std::cout << "wrote " << trace.tau.size() << " samples to " << out_path << '\n';
            return 0;
        }

        if (*cmd_wt) {
            if (!cmd_wt->count("--n-max") && params.contains("n_max")) {
                n_max = params["n_max"].get<int>();
            }
            if (n_max < 2 || n_max > 12) {
                throw InvalidParameter("wtable: N_max must be in [2, 12]");
            }
            std::vector<std::vector<double>> rows;
            for (int n = 2; n <= n_max; ++n) {
                const double computed = gamma_c(w_state(n));
                const double formula = (3.0 * n - 2.0) / n;
                rows.push_back({static_cast<double>(n), computed, formula,
                                std::abs(computed - formula)});
            }
            write_table({"n", "gamma_c", "formula", "abs_diff"}, rows, out_path, format);
            return 0;
        }

        if (*cmd_ver) {
            props::Options opt;
            opt.trials = trials;
            opt.seed0 = seed;
            opt.mutate_sign = mutate;
            const auto results = props::run_all(opt);
            bool all_pass = true;
            for (const auto& r : results) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " [" << r.trials
                          << " trials, " << r.detail << "]";
                if (!r.pass) {
                    std::cout << " failing seed " << r.failing_seed;
                    all_pass = false;
                }
                std::cout << '\n';
            }
            return all_pass ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
