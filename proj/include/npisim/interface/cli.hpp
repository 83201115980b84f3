#pragma once

#include "npisim/interface/service.hpp"
#include "npisim/interface/simulation.hpp"
#include "npisim/interface/svg.hpp"
#include "npisim/metrics/fit.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace npisim::interface {

inline constexpr const char* port_env_var = "NPISIM_PORT";

struct ScenarioSummary {
    std::string name;
    double cumulative_confirmed = 0.0;
    double peak_daily_confirmed = 0.0;
    Date peak_date;
    double cumulative_visits = 0.0; ///< sum of visits_normalized over recorded days
    double mean_ewom = 0.0;
};

inline ScenarioSummary summarize(const SimResponse& r)
{
    ScenarioSummary s;
    s.name = r.scenario.scenario.name;
    s.cumulative_confirmed = r.result.at("cumulative_confirmed").back();
    const auto& daily = r.result.at("daily_confirmed");
    std::size_t peak = 0;
    for (std::size_t i = 1; i < daily.size(); ++i) {
        if (daily[i] > daily[peak]) {
            peak = i;
        }
    }
    s.peak_daily_confirmed = daily[peak];
    s.peak_date = r.result.dates[peak];
    for (double v : r.result.at("visits_normalized")) {
        s.cumulative_visits += v;
    }
    const auto& ewom = r.result.at("ewom_mass");
    for (double v : ewom) {
        s.mean_ewom += v;
    }
    s.mean_ewom /= static_cast<double>(ewom.size());
    return s;
}

namespace detail {

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline ParamOverrides parse_sets(const std::vector<std::string>& sets)
{
    ParamOverrides out;
    const auto known = tokyo::param_names();
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--set expects name=value, got '" + s + "'");
        }
        const std::string name = s.substr(0, eq);
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            throw UsageError("unknown parameter '" + name + "'");
        }
        const std::string value = s.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (value.empty() || end != value.c_str() + value.size()) {
            throw UsageError("--set " + name + ": '" + value + "' is not a number");
        }
        out[name] = v;
    }
    return out;
}

inline SimRequest make_request(ScenarioDocument doc, const std::vector<std::string>& sets, int horizon, double dt)
{
    SimRequest req;
    req.scenario = std::move(doc);
    req.param_overrides = parse_sets(sets);
    req.horizon = horizon;
    req.dt = dt;
    return req;
}

inline metrics::GridSpec parse_grid(const std::string& text)
{
    metrics::GridSpec g;
    double* parts[] = {&g.min, &g.max, &g.step};
    std::stringstream ss(text);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ':')) {
        if (i == 3) {
            throw UsageError("--grid expects min:max:step");
        }
        char* end = nullptr;
        *parts[i] = std::strtod(item.c_str(), &end);
        if (item.empty() || end != item.c_str() + item.size()) {
            throw UsageError("--grid: '" + item + "' is not a number");
        }
        ++i;
    }
    if (i != 3) {
        throw UsageError("--grid expects min:max:step");
    }
    return g;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content) || !f.flush()) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
}

inline std::string format_row(const ScenarioSummary& s, const std::string& metric)
{
    char buf[256];
    std::string row;
    std::snprintf(buf, sizeof buf, "%-24s", s.name.c_str());
    row += buf;
    if (metric == "all" || metric == "confirmed") {
        std::snprintf(buf, sizeof buf, " %22.3f %22.3f %12s", s.cumulative_confirmed, s.peak_daily_confirmed,
                      format_iso_date(s.peak_date).c_str());
        row += buf;
    }
    if (metric == "all" || metric == "visits") {
        std::snprintf(buf, sizeof buf, " %28.4f", s.cumulative_visits);
        row += buf;
    }
    if (metric == "all" || metric == "ewom") {
        std::snprintf(buf, sizeof buf, " %14.6f", s.mean_ewom);
        row += buf;
    }
    return row;
}

inline std::string format_header(const std::string& metric)
{
    char buf[256];
    std::string row;
    std::snprintf(buf, sizeof buf, "%-24s", "scenario");
    row += buf;
    if (metric == "all" || metric == "confirmed") {
        std::snprintf(buf, sizeof buf, " %22s %22s %12s", "cumulative_confirmed", "peak_daily_confirmed", "peak_date");
        row += buf;
    }
    if (metric == "all" || metric == "visits") {
        std::snprintf(buf, sizeof buf, " %28s", "cumulative_visits_normalized");
        row += buf;
    }
    if (metric == "all" || metric == "ewom") {
        std::snprintf(buf, sizeof buf, " %14s", "mean_ewom_mass");
        row += buf;
    }
    return row;
}

inline int default_port()
{
    if (const char* env = std::getenv(port_env_var)) {
        const int p = std::atoi(env);
        if (p > 0 && p < 65536) {
            return p;
        }
    }
    return 8080;
}

} // namespace detail

/// Entry point shared by the executable and the tests. Returns the process
/// exit status: 0 on success, 1 on runtime failure, 2 on usage errors.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Stock-and-flow simulation of NPI scenarios for Tokyo", "npisim"};
    app.require_subcommand(1);
    app.set_version_flag("--version", npisim::version);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run one scenario and write its daily series");
    std::string sim_preset;
    std::string sim_scenario;
    std::string sim_out = "-";
    std::string sim_format = "csv";
    std::string sim_svg;
    std::vector<std::string> sim_sets;
    int sim_horizon = 213;
    double sim_dt = 1.0;
    auto* opt_preset = sim->add_option("--preset", sim_preset, "Preset name");
    sim->add_option("--scenario", sim_scenario, "Scenario JSON file")->excludes(opt_preset);
    sim->add_option("--out,-o", sim_out, "Output path, '-' for stdout");
    sim->add_option("--format", sim_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sim->add_option("--svg", sim_svg, "Also write an SVG chart of daily confirmed positives");
    sim->add_option("--set", sim_sets, "Parameter override name=value (repeatable)");
    sim->add_option("--horizon", sim_horizon, "Days to simulate");
    sim->add_option("--dt", sim_dt, "Integration step in days");

    // compare
    auto* cmp = app.add_subcommand("compare", "Summarize two or more scenarios side by side");
    std::vector<std::string> cmp_sources;
    std::string cmp_metric = "all";
    std::vector<std::string> cmp_sets;
    int cmp_horizon = 213;
    double cmp_dt = 1.0;
    cmp->add_option("sources", cmp_sources, "Preset names or scenario files")->required();
    cmp->add_option("--metric", cmp_metric, "all, confirmed, visits or ewom")
        ->check(CLI::IsMember({"all", "confirmed", "visits", "ewom"}));
    cmp->add_option("--set", cmp_sets, "Parameter override name=value (repeatable)");
    cmp->add_option("--horizon", cmp_horizon, "Days to simulate");
    cmp->add_option("--dt", cmp_dt, "Integration step in days");

    // fit
    auto* fit = app.add_subcommand("fit", "Grid-search the transmission scale against observed positives");
    std::string fit_observed;
    std::string fit_column = "value";
    std::string fit_grid;
    std::optional<double> fit_min, fit_max, fit_step;
    std::string fit_preset;
    std::string fit_scenario;
    std::string fit_out_scenario;
    std::vector<std::string> fit_sets;
    int fit_horizon = 213;
    double fit_dt = 1.0;
    fit->add_option("--observed", fit_observed, "Observed CSV (date,value)")->required();
    fit->add_option("--column", fit_column, "Value column in the observed CSV");
    auto* opt_grid = fit->add_option("--grid", fit_grid, "min:max:step");
    fit->add_option("--min", fit_min, "Grid minimum")->excludes(opt_grid);
    fit->add_option("--max", fit_max, "Grid maximum")->excludes(opt_grid);
    fit->add_option("--step", fit_step, "Grid step")->excludes(opt_grid);
    auto* fit_opt_preset = fit->add_option("--preset", fit_preset, "Preset to calibrate (default realistic)");
    fit->add_option("--scenario", fit_scenario, "Scenario file to calibrate")->excludes(fit_opt_preset);
    fit->add_option("--out-scenario", fit_out_scenario, "Write the scenario with the fitted scale");
    fit->add_option("--set", fit_sets, "Parameter override name=value (repeatable)");
    fit->add_option("--horizon", fit_horizon, "Days to simulate");
    fit->add_option("--dt", fit_dt, "Integration step in days");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    int port = detail::default_port();
    std::string host = "127.0.0.1";
    serve->add_option("--port", port, std::string("Listen port (default $") + port_env_var + " or 8080)");
    serve->add_option("--host", host, "Bind address");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*sim) {
            if (sim_preset.empty() && sim_scenario.empty()) {
                throw detail::UsageError("one of --preset or --scenario is required");
            }
            ScenarioDocument doc = sim_preset.empty() ? load_scenario_file(sim_scenario)
                                                      : ScenarioDocument{tokyo::preset(sim_preset), {}};
            const auto response = execute(detail::make_request(std::move(doc), sim_sets, sim_horizon, sim_dt));
            std::ostringstream buf;
            if (sim_format == "json") {
                buf << to_json(response).dump() << '\n';
            }
            else {
                write_csv(buf, response);
            }
            if (sim_out == "-") {
                out << buf.str();
            }
            else {
                detail::write_file(sim_out, buf.str());
            }
            if (!sim_svg.empty()) {
                std::ostringstream svg;
                write_svg(svg, response);
                detail::write_file(sim_svg, svg.str());
            }
            for (const auto& c : response.result.clamp_events) {
                err << "warning: stock " << c.stock << " clamped at 0 (t=" << c.time << ", would be " << c.unclamped
                    << ")\n";
            }
            return 0;
        }

        if (*cmp) {
            if (cmp_sources.size() < 2) {
                throw detail::UsageError("compare needs at least two scenario sources");
            }
            out << detail::format_header(cmp_metric) << '\n';
            for (const auto& src : cmp_sources) {
                auto doc = resolve_scenario_source(src);
                if (doc.scenario.name.empty()) {
                    doc.scenario.name = src;
                }
                const auto response = execute(detail::make_request(std::move(doc), cmp_sets, cmp_horizon, cmp_dt));
                out << detail::format_row(summarize(response), cmp_metric) << '\n';
            }
            return 0;
        }

        if (*fit) {
            metrics::GridSpec grid;
            if (!fit_grid.empty()) {
                grid = detail::parse_grid(fit_grid);
            }
            else if (fit_min && fit_max && fit_step) {
                grid = {*fit_min, *fit_max, *fit_step};
            }
            else {
                throw detail::UsageError("give --grid min:max:step or all of --min, --max, --step");
            }
            std::vector<double> points;
            try {
                points = metrics::grid_values(grid);
            }
            catch (const metrics::GridError& e) {
                throw detail::UsageError(e.what());
            }
            ScenarioDocument doc = !fit_scenario.empty() ? load_scenario_file(fit_scenario)
                                   : !fit_preset.empty() ? ScenarioDocument{tokyo::preset(fit_preset), {}}
                                                         : ScenarioDocument{tokyo::preset(tokyo::PresetId::realistic), {}};
            ParamOverrides overrides = doc.param_overrides;
            for (const auto& [k, v] : detail::parse_sets(fit_sets)) {
                overrides[k] = v;
            }
            metrics::FitInputs inputs;
            inputs.params = apply_overrides(tokyo::ModelParams{}, overrides);
            inputs.scenario = doc.scenario;
            inputs.horizon = fit_horizon;
            inputs.dt = fit_dt;
            const auto observed = metrics::ingest_observed(detail::read_file(fit_observed), fit_column);
            const auto result = metrics::fit_transmission_scale(inputs, observed, grid);

            out << "best=" << format_number(result.best_scale) << '\n';
            out << "loss=" << format_number(result.best_loss) << '\n';
            out << "scale,rmse\n";
            for (std::size_t i = 0; i < result.grid.size(); ++i) {
                out << format_number(result.grid[i]) << ',' << format_number(result.losses[i]) << '\n';
            }
            if (!fit_out_scenario.empty()) {
                overrides["disease.transmission_scale"] = result.best_scale;
                detail::write_file(fit_out_scenario, scenario_to_json(doc.scenario, overrides).dump(2) + "\n");
            }
            return 0;
        }

        if (*serve) {
            httplib::Server server;
            register_routes(server);
            out << "npisim " << npisim::version << " listening on " << host << ":" << port << std::endl;
            if (!server.listen(host, port)) {
                err << "error: cannot listen on " << host << ":" << port << '\n';
                return 1;
            }
            return 0;
        }
    }
    catch (const detail::UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace npisim::interface
