// Command-line front end: overlap curves, the lattice spectrum, uncertainty
// reports, transform round trips, and the invariant check table.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "maxlenqm/maxlenqm.hpp"

namespace {

using json = nlohmann::json;
using namespace maxlenqm;

struct RunConfig {
    double tau = 0.1;
    double hbar = 1.0;
    double mass = 1.0;
    int panels = 256;
    int order = 16;
    double eta_max_mult = 40.0; // eta_max in units of tau*hbar
    double eta_step_div = 8.0;  // eta_step = tau*hbar*sqrt3 / div
    std::map<std::string, double> tol;
    std::string output_path; // empty: stdout
    std::string format = "csv";

    DeformationParams params() const { return {tau, hbar, mass}; }

    void validate() const {
        params().validate();
        if (panels < 1 || order < 2) throw ConfigError("panels >= 1 and order >= 2 required");
        if (eta_max_mult <= 0.0 || eta_step_div <= 0.0)
            throw ConfigError("eta grid multipliers must be positive");
        for (const auto& [name, value] : tol)
            if (!(value > 0.0)) throw ConfigError("tolerance must be positive: " + name);
        if (format != "csv" && format != "json")
            throw ConfigError("format must be csv or json");
    }
};

json config_to_json(const RunConfig& c) {
    return json{{"tau", c.tau},
                {"hbar", c.hbar},
                {"mass", c.mass},
                {"panels", c.panels},
                {"order", c.order},
                {"eta_max_mult", c.eta_max_mult},
                {"eta_step_div", c.eta_step_div},
                {"tol", c.tol},
                {"output_path", c.output_path},
                {"format", c.format}};
}

void config_from_json(const json& j, RunConfig& c) {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "tau")
                c.tau = value.get<double>();
            else if (key == "hbar")
                c.hbar = value.get<double>();
            else if (key == "mass")
                c.mass = value.get<double>();
            else if (key == "panels")
                c.panels = value.get<int>();
            else if (key == "order")
                c.order = value.get<int>();
            else if (key == "eta_max_mult")
                c.eta_max_mult = value.get<double>();
            else if (key == "eta_step_div")
                c.eta_step_div = value.get<double>();
            else if (key == "tol")
                c.tol = value.get<std::map<std::string, double>>();
            else if (key == "output_path")
                c.output_path = value.get<std::string>();
            else if (key == "format")
                c.format = value.get<std::string>();
            else
                throw ConfigError("unknown config field: " + key);
        } catch (const json::exception& e) {
            throw ConfigError("config field " + key + ": " + e.what());
        }
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// All output goes through a string so files and stdout are byte-identical.
void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + cfg.output_path);
    out << text;
    if (!out) throw IoError("write failed: " + cfg.output_path);
}

std::string render_table(const RunConfig& cfg, const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    if (cfg.format == "json") {
        json j{{"header", header}, {"rows", rows}};
        return j.dump(2) + "\n";
    }
    std::string text;
    for (std::size_t i = 0; i < header.size(); ++i)
        text += (i ? "," : "") + header[i];
    text += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + row[i];
        text += "\n";
    }
    return text;
}

/// Built-in test-state families.  Lengths are fractions of the chart
/// length so one spec works at every tau:
///   hermite:k=<int>[,sigma=<frac>][,center=<frac off midpoint>]
///   plane:eta=<multiple of tau*hbar>
WaveFunction make_state(const std::string& spec, const ThetaChart& chart,
                        const QuadratureGrid& grid) {
    const DeformationParams p = chart.params();
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    std::map<std::string, double> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw ConfigError("state parameter needs name=value: " + item);
            try {
                kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw ConfigError("bad state parameter value: " + item);
            }
        }
    }
    if (family == "hermite") {
        const int k = static_cast<int>(kv.count("k") ? kv["k"] : 0.0);
        const double sigma_frac = kv.count("sigma") ? kv["sigma"] : 1.0 / 12.0;
        const double center_frac = kv.count("center") ? kv["center"] : 0.0;
        if (k < 0 || sigma_frac <= 0.0) throw ConfigError("hermite needs k >= 0, sigma > 0");
        const double len = chart.length();
        return normalize(hermite_state(k, chart, sigma_frac * len,
                                       chart.midpoint() + center_frac * len),
                         grid);
    }
    if (family == "plane") {
        if (!kv.count("eta")) throw ConfigError("plane needs eta=<multiple of tau*hbar>");
        return eigenstate(kv["eta"] * p.tau * p.hbar, p).base;
    }
    throw UnknownStateError("unknown state family: " + family);
}

int cmd_overlap(const RunConfig& cfg, double delta_max, int samples) {
    if (samples < 2) throw ConfigError("samples must be at least 2");
    const DeformationParams p = cfg.params();
    if (delta_max <= 0.0) delta_max = 3.0 * p.tau * p.hbar * sqrt3;
    const ThetaChart chart(p);
    const QuadratureGrid grid = build_grid(chart, cfg.panels, cfg.order);
    const WaveFunction phi0 = eigenstate(0.0, p).base;
    std::vector<std::vector<std::string>> rows(samples);
    const double dmax = delta_max;
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        const double delta = -dmax + 2.0 * dmax * static_cast<double>(i) / (samples - 1);
        const double closed = overlap_closed_form(delta, 0.0, p);
        const cplx quad = inner_product(phi0, eigenstate(delta, p).base, grid);
        rows[i] = {fmt(delta), fmt(closed), fmt(quad.real())};
    });
    emit(cfg, render_table(cfg, {"delta", "overlap_closed", "overlap_quadrature"}, rows));
    return 0;
}

int cmd_spectrum(const RunConfig& cfg, int n_max) {
    if (n_max < 1) throw ConfigError("n-max must be at least 1");
    const DeformationParams p = cfg.params();
    std::vector<std::vector<std::string>> rows;
    for (int n = 0; n <= n_max; ++n) {
        const double eta = lattice_eta(n, p);
        rows.push_back({std::to_string(n), fmt(eta), fmt(eta * eta / (2.0 * p.mass))});
    }
    emit(cfg, render_table(cfg, {"n", "eta_n", "energy"}, rows));
    return 0;
}

int cmd_uncertainty(const RunConfig& cfg, const std::string& state_spec) {
    if (cfg.format != "json")
        throw ConfigError("uncertainty reports are JSON; use --format json");
    const DeformationParams p = cfg.params();
    const ThetaChart chart(p);
    const QuadratureGrid grid = build_grid(chart, cfg.panels, cfg.order);
    const WaveFunction psi = make_state(state_spec, chart, grid);
    const UncertaintyReport rep = moments(psi, grid);
    const auto [dx_max, dp_min] = extremal_uncertainties(p);
    json j{{"state", state_spec},
           {"report",
            {{"mean_x", rep.mean_x},
             {"mean_x2", rep.mean_x2},
             {"mean_p", rep.mean_p},
             {"mean_p2", rep.mean_p2},
             {"delta_x", rep.delta_x},
             {"delta_p", rep.delta_p},
             {"gup_rhs", rep.gup_rhs},
             {"margin", rep.margin},
             {"satisfied", rep.satisfied},
             {"mean_p_imag", rep.mean_p_imag},
             {"mean_p2_imag", rep.mean_p2_imag}}},
           {"extremal", {{"delta_x_max", dx_max}, {"delta_p_min", dp_min}}}};
    emit(cfg, j.dump(2) + "\n");
    return 0;
}

int cmd_roundtrip(const RunConfig& cfg, const std::string& state_spec) {
    const DeformationParams p = cfg.params();
    const ThetaChart chart(p);
    const QuadratureGrid grid = build_grid(chart, cfg.panels, cfg.order);
    const WaveFunction psi = make_state(state_spec, chart, grid);
    const double eta_step = p.tau * p.hbar * sqrt3 / cfg.eta_step_div;
    std::vector<std::vector<std::string>> rows;
    for (double mult = cfg.eta_max_mult / 8.0; mult <= cfg.eta_max_mult * 1.0000001;
         mult *= 2.0) {
        const double eta_max = mult * p.tau * p.hbar;
        const QuasiMomentumSamples s = to_quasi_momentum(psi, EtaGrid{eta_max, eta_step}, grid);
        rows.push_back({fmt(eta_max), fmt(roundtrip_error(psi, s, grid)),
                        fmt(parseval_factor(s, psi, grid))});
    }
    emit(cfg, render_table(cfg, {"eta_max", "roundtrip_error", "parseval_factor"}, rows));
    return 0;
}

int cmd_checks(const RunConfig& cfg) {
    CheckConfig cc;
    cc.params = cfg.params();
    cc.panels = cfg.panels;
    cc.order = cfg.order;
    cc.eta_max_mult = cfg.eta_max_mult;
    cc.eta_step_div = cfg.eta_step_div;
    cc.tol_overrides = cfg.tol;
    const std::vector<CheckResult> results = run_invariant_checks(cc);
    std::string text;
    if (cfg.format == "json") {
        json arr = json::array();
        for (const CheckResult& r : results)
            arr.push_back(json{{"name", r.name},
                               {"scored", r.scored},
                               {"pass", r.pass},
                               {"value", r.value},
                               {"threshold", r.threshold},
                               {"detail", r.detail}});
        text = arr.dump(2) + "\n";
    } else {
        for (const CheckResult& r : results) {
            const char* mark = !r.scored ? "INFO" : (r.pass ? "PASS" : "FAIL");
            char line[512];
            std::snprintf(line, sizeof line, "[%s] %-36s value=%-13.6g tol=%-10.3g %s\n", mark,
                          r.name.c_str(), r.value, r.threshold, r.detail.c_str());
            text += line;
        }
        const bool ok = all_scored_pass(results);
        text += ok ? "all scored checks passed\n" : "scored check failure\n";
    }
    emit(cfg, text);
    return all_scored_pass(results) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deformed-algebra quantum mechanics with a maximal length"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<double> tau, hbar, mass, eta_max_mult, eta_step_div;
    std::optional<int> panels, order;
    std::optional<std::string> out, format;
    std::string config_path, dump_config;
    std::vector<std::string> tol_args;
    app.add_option("--tau", tau, "deformation parameter (inverse length)");
    app.add_option("--hbar", hbar, "Planck constant");
    app.add_option("--mass", mass, "particle mass");
    app.add_option("--panels", panels, "quadrature panels across the chart");
    app.add_option("--order", order, "Gauss-Legendre order per panel");
    app.add_option("--eta-max-mult", eta_max_mult, "eta_max in units of tau*hbar");
    app.add_option("--eta-step-div", eta_step_div, "eta_step = tau*hbar*sqrt3 / this");
    app.add_option("--out", out, "output path (default: stdout)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--tol", tol_args, "tolerance override name=value (checks)");
    app.add_option("--dump-config", dump_config, "write the resolved config as JSON");

    auto* sub_overlap = app.add_subcommand("overlap", "overlap kernel samples");
    double delta_max = 0.0;
    int samples = 241;
    sub_overlap->add_option("--delta-max", delta_max,
                            "half-width in eta (default 3*tau*hbar*sqrt3)");
    sub_overlap->add_option("--samples", samples, "row count (default 241)");

    auto* sub_spectrum = app.add_subcommand("spectrum", "lattice spectrum");
    int n_max = 20;
    sub_spectrum->add_option("--n-max", n_max, "largest lattice index");

    auto* sub_uncertainty = app.add_subcommand("uncertainty", "moment and bound report");
    std::string unc_state = "hermite:k=0";
    sub_uncertainty->add_option("--state", unc_state, "state spec");

    auto* sub_roundtrip = app.add_subcommand("roundtrip", "transform round-trip ladder");
    std::string rt_state = "hermite:k=0,sigma=0.0625";
    sub_roundtrip->add_option("--state", rt_state, "state spec");

    auto* sub_checks = app.add_subcommand("checks", "invariant check table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) throw IoError("cannot open config file: " + config_path);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config parse: ") + e.what());
            }
            config_from_json(j, cfg);
        }
        if (tau) cfg.tau = *tau;
        if (hbar) cfg.hbar = *hbar;
        if (mass) cfg.mass = *mass;
        if (panels) cfg.panels = *panels;
        if (order) cfg.order = *order;
        if (eta_max_mult) cfg.eta_max_mult = *eta_max_mult;
        if (eta_step_div) cfg.eta_step_div = *eta_step_div;
        if (out) cfg.output_path = *out;
        if (format) cfg.format = *format;
        if (sub_uncertainty->parsed() && !format &&
            (config_path.empty() || cfg.format == "csv"))
            cfg.format = "json"; // uncertainty is a JSON report by default
        for (const std::string& t : tol_args) {
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw ConfigError("--tol needs name=value: " + t);
            try {
                cfg.tol[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
            } catch (const std::exception&) {
                throw ConfigError("bad tolerance value: " + t);
            }
        }
        cfg.validate();
        if (!dump_config.empty()) {
            std::ofstream dump(dump_config, std::ios::binary);
            if (!dump) throw IoError("cannot open dump path: " + dump_config);
            dump << config_to_json(cfg).dump(2) << "\n";
        }

        if (sub_overlap->parsed()) return cmd_overlap(cfg, delta_max, samples);
        if (sub_spectrum->parsed()) return cmd_spectrum(cfg, n_max);
        if (sub_uncertainty->parsed()) return cmd_uncertainty(cfg, unc_state);
        if (sub_roundtrip->parsed()) return cmd_roundtrip(cfg, rt_state);
        if (sub_checks->parsed()) return cmd_checks(cfg);
        throw ConfigError("no subcommand");
    } catch (const DivergentMomentError& e) {
        json err{{"error",
                  {{"type", "DivergentMomentError"},
                   {"moment", e.moment},
                   {"rel_disagreement", e.disagreement},
                   {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownStateError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
