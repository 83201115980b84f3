#pragma once

#include "npisim/interface/scenario_io.hpp"
#include "npisim/tokyo/model.hpp"
#include "npisim/version.hpp"

#include <charconv>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace npisim::interface {

/// One simulation job: a scenario (preset or inline), parameter overrides on
/// top of the scenario's own, and run settings.
struct SimRequest {
    ScenarioDocument scenario;
    ParamOverrides param_overrides;
    int horizon = 213;
    double dt = 1.0;
};

struct SimResponse {
    ScenarioDocument scenario; ///< echo with the effective overrides
    int horizon = 0;
    double dt = 1.0;
    engine::SimulationResult result;
    std::vector<std::string> series_names;
};

/// Series reported by every front end, in column order.
inline const std::vector<std::string>& headline_series()
{
    static const std::vector<std::string> names = {
        "daily_confirmed", "cumulative_confirmed", "people_flow", "visits_normalized", "ewom_mass",
    };
    return names;
}

inline std::vector<std::string> response_series(const engine::SimulationResult& r)
{
    std::vector<std::string> names = headline_series();
    for (const auto& [name, field] : tokyo::scenario_schedules) {
        names.emplace_back(name);
    }
    names.insert(names.end(), r.stock_names.begin(), r.stock_names.end());
    return names;
}

/// Parses a request body. Throws SchemaError for malformed structure and
/// InvariantError for invalid values.
inline SimRequest parse_sim_request(const json& j)
{
    if (!j.is_object()) {
        throw SchemaError("$", "expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "preset" && key != "scenario" && key != "param_overrides" && key != "horizon_days" && key != "dt") {
            throw SchemaError(key, "unknown field");
        }
    }
    const bool has_preset = j.contains("preset");
    const bool has_scenario = j.contains("scenario");
    if (has_preset == has_scenario) {
        throw SchemaError("preset", "exactly one of 'preset' or 'scenario' is required");
    }
    SimRequest req;
    if (has_preset) {
        if (!j["preset"].is_string()) {
            throw SchemaError("preset", "expected a string");
        }
        try {
            req.scenario = {tokyo::preset(j["preset"].get<std::string>()), {}};
        }
        catch (const tokyo::UnknownPreset& e) {
            throw InvariantError({std::string("preset: ") + e.what()});
        }
    }
    else {
        req.scenario = scenario_from_json(j["scenario"], "scenario");
    }
    if (j.contains("param_overrides")) {
        req.param_overrides = parse_param_overrides(j["param_overrides"], "param_overrides");
    }
    if (j.contains("horizon_days")) {
        if (!j["horizon_days"].is_number_integer()) {
            throw SchemaError("horizon_days", "expected an integer");
        }
        req.horizon = j["horizon_days"].get<int>();
    }
    if (j.contains("dt")) {
        req.dt = detail::number_at(j["dt"], "dt");
    }
    engine::RunConfig cfg;
    cfg.horizon = req.horizon;
    cfg.dt = req.dt;
    try {
        (void)cfg.steps_per_day();
    }
    catch (const std::invalid_argument& e) {
        throw InvariantError({e.what()});
    }
    return req;
}

inline SimResponse execute(const SimRequest& req)
{
    ParamOverrides overrides = req.scenario.param_overrides;
    for (const auto& [k, v] : req.param_overrides) {
        overrides[k] = v;
    }
    const auto params = apply_overrides(tokyo::ModelParams{}, overrides);
    if (auto bad = tokyo::check_scenario(req.scenario.scenario); !bad.empty()) {
        throw InvariantError(std::move(bad));
    }

    SimResponse resp;
    resp.scenario = {req.scenario.scenario, overrides};
    resp.horizon = req.horizon;
    resp.dt = req.dt;
    resp.result = tokyo::simulate(params, req.scenario.scenario, req.horizon, req.dt);
    resp.series_names = response_series(resp.result);
    return resp;
}

inline json to_json(const SimResponse& r)
{
    json j;
    j["engine_version"] = npisim::version;
    j["scenario"] = scenario_to_json(r.scenario.scenario, r.scenario.param_overrides);
    j["start_date"] = format_iso_date(r.result.start);
    j["horizon_days"] = r.horizon;
    j["dt"] = r.dt;
    json dates = json::array();
    for (const auto& d : r.result.dates) {
        dates.push_back(format_iso_date(d));
    }
    j["dates"] = std::move(dates);
    json series = json::object();
    for (const auto& name : r.series_names) {
        series[name] = r.result.at(name);
    }
    j["series"] = std::move(series);
    if (!r.result.clamp_events.empty()) {
        json clamps = json::array();
        for (const auto& c : r.result.clamp_events) {
            clamps.push_back({{"time", c.time}, {"stock", c.stock}, {"unclamped", c.unclamped}});
        }
        j["clamp_events"] = std::move(clamps);
    }
    return j;
}

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double v)
{
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

/// `day,date,<series...>` with one row per recorded day.
inline void write_csv(std::ostream& out, const SimResponse& r)
{
    out << "day,date";
    for (const auto& name : r.series_names) {
        out << ',' << name;
    }
    out << '\n';
    std::vector<const std::vector<double>*> cols;
    for (const auto& name : r.series_names) {
        cols.push_back(&r.result.at(name));
    }
    for (std::size_t d = 0; d < r.result.dates.size(); ++d) {
        out << d << ',' << format_iso_date(r.result.dates[d]);
        for (const auto* c : cols) {
            out << ',' << format_number((*c)[d]);
        }
        out << '\n';
    }
}

} // namespace npisim::interface
