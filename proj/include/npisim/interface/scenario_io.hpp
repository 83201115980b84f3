#pragma once

#include "npisim/tokyo/params.hpp"
#include "npisim/tokyo/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Scenario document:
//
//   {
//     "name": "exhaustive",
//     "start_date": "2020-03-01",
//     "schedules": { "stay_at_home": [["2020-03-29", 1], ["2020-05-30", 0]], ... },
//     "param_overrides": { "disease.transmission_scale": 1.3 }
//   }
//
// An entry dated on start_date sets the initial value; otherwise a schedule
// starts at 0. Omitted schedules are all-zero, except school_closure_commute
// (copies school_closure_psych) and new_normal (on from 2020-04-15).

namespace npisim::interface {

using json = nlohmann::json;

/// Structurally malformed input; `path` names the offending field.
class SchemaError : public std::runtime_error {
  public:
    SchemaError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path))
    {
    }
    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
};

/// Well-formed input that violates a model or scenario invariant.
class InvariantError : public std::runtime_error {
  public:
    explicit InvariantError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations))
    {
    }
    const std::vector<std::string>& violations() const noexcept { return violations_; }

  private:
    std::vector<std::string> violations_;

    static std::string join(const std::vector<std::string>& v)
    {
        std::string s;
        for (const auto& x : v) {
            s += (s.empty() ? "" : "; ") + x;
        }
        return s;
    }
};

using ParamOverrides = std::map<std::string, double>;

struct ScenarioDocument {
    tokyo::ScenarioSpec scenario;
    ParamOverrides param_overrides;
};

inline const Date default_new_normal_onset = make_date(2020, 4, 15);

namespace detail {

inline Date parse_date_at(const json& j, const std::string& path)
{
    if (!j.is_string()) {
        throw SchemaError(path, "expected an ISO-8601 date string");
    }
    try {
        return parse_iso_date(j.get<std::string>());
    }
    catch (const DateError& e) {
        throw SchemaError(path, e.what());
    }
}

inline double number_at(const json& j, const std::string& path)
{
    if (!j.is_number()) {
        throw SchemaError(path, "expected a number");
    }
    return j.get<double>();
}

inline tokyo::Schedule parse_schedule(const json& j, const std::string& path, Date start)
{
    if (!j.is_array()) {
        throw SchemaError(path, "expected an array of [date, value] pairs");
    }
    double initial = 0.0;
    std::vector<tokyo::Breakpoint> bps;
    std::vector<std::string> violations;
    int prev_day = -1;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string ipath = path + "[" + std::to_string(i) + "]";
        const json& entry = j[i];
        if (!entry.is_array() || entry.size() != 2) {
            throw SchemaError(ipath, "expected a [date, value] pair");
        }
        const Date date = parse_date_at(entry[0], ipath + "[0]");
        const double value = number_at(entry[1], ipath + "[1]");
        const auto diff = (std::chrono::sys_days{date} - std::chrono::sys_days{start}).count();
        const int day = static_cast<int>(diff);
        if (diff < 0) {
            violations.push_back(ipath + ": " + format_iso_date(date) + " precedes start_date");
            continue;
        }
        if (day <= prev_day) {
            violations.push_back(ipath + ": dates must be strictly increasing");
            continue;
        }
        prev_day = day;
        if (value != 0.0 && value != 1.0) {
            violations.push_back(ipath + "[1]: schedule values must be 0 or 1");
        }
        if (day == 0) {
            initial = value;
        }
        else {
            bps.push_back({day, value});
        }
    }
    if (!violations.empty()) {
        throw InvariantError(std::move(violations));
    }
    return tokyo::Schedule(initial, std::move(bps));
}

} // namespace detail

inline ParamOverrides parse_param_overrides(const json& j, const std::string& path)
{
    if (!j.is_object()) {
        throw SchemaError(path, "expected an object of dotted parameter names to numbers");
    }
    const auto known = tokyo::param_names();
    ParamOverrides out;
    for (const auto& [key, value] : j.items()) {
        const std::string kpath = path + "." + key;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw SchemaError(kpath, "unknown parameter");
        }
        out[key] = detail::number_at(value, kpath);
    }
    return out;
}

/// Applies overrides and checks the parameter invariants.
inline tokyo::ModelParams apply_overrides(tokyo::ModelParams p, const ParamOverrides& overrides)
{
    for (const auto& [name, value] : overrides) {
        tokyo::set_param(p, name, value);
    }
    if (auto bad = tokyo::check_params(p); !bad.empty()) {
        throw InvariantError(std::move(bad));
    }
    return p;
}

inline ScenarioDocument scenario_from_json(const json& j, const std::string& path = "scenario")
{
    if (!j.is_object()) {
        throw SchemaError(path, "expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "name" && key != "start_date" && key != "schedules" && key != "param_overrides") {
            throw SchemaError(path + "." + key, "unknown field");
        }
    }
    ScenarioDocument doc;
    auto& s = doc.scenario;
    if (j.contains("name")) {
        if (!j["name"].is_string()) {
            throw SchemaError(path + ".name", "expected a string");
        }
        s.name = j["name"].get<std::string>();
    }
    if (j.contains("start_date")) {
        s.start_date = detail::parse_date_at(j["start_date"], path + ".start_date");
    }

    bool have_commute = false;
    bool have_new_normal = false;
    if (j.contains("schedules")) {
        const json& sj = j["schedules"];
        if (!sj.is_object()) {
            throw SchemaError(path + ".schedules", "expected an object");
        }
        for (const auto& [key, value] : sj.items()) {
            const auto field = tokyo::find_schedule_field(key);
            if (!field) {
                throw SchemaError(path + ".schedules." + key, "unknown schedule");
            }
            s.*field = detail::parse_schedule(value, path + ".schedules." + key, s.start_date);
            have_commute = have_commute || key == "school_closure_commute";
            have_new_normal = have_new_normal || key == "new_normal";
        }
    }
    if (!have_commute) {
        s.school_closure_commute = s.school_closure_psych;
    }
    if (!have_new_normal) {
        s.new_normal = tokyo::DatedSchedule{0.0, {{default_new_normal_onset, 1.0}}}.relative_to(s.start_date);
    }
    if (j.contains("param_overrides")) {
        doc.param_overrides = parse_param_overrides(j["param_overrides"], path + ".param_overrides");
    }
    return doc;
}

inline json schedule_to_json(const tokyo::Schedule& s, Date start)
{
    json arr = json::array();
    const bool day0 = !s.breakpoints().empty() && s.breakpoints().front().day == 0;
    if (s.default_value() != 0.0 && !day0) {
        arr.push_back(json::array({format_iso_date(start), s.default_value()}));
    }
    for (const auto& b : s.breakpoints()) {
        arr.push_back(json::array({format_iso_date(day_to_date(b.day, start)), b.value}));
    }
    return arr;
}

inline json scenario_to_json(const tokyo::ScenarioSpec& s, const ParamOverrides& overrides = {})
{
    json j;
    j["name"] = s.name;
    j["start_date"] = format_iso_date(s.start_date);
    json sched = json::object();
    for (const auto& [name, field] : tokyo::scenario_schedules) {
        sched[std::string(name)] = schedule_to_json(s.*field, s.start_date);
    }
    j["schedules"] = std::move(sched);
    j["param_overrides"] = json::object();
    for (const auto& [k, v] : overrides) {
        j["param_overrides"][k] = v;
    }
    return j;
}

inline ScenarioDocument parse_scenario_text(const std::string& text, const std::string& path = "scenario")
{
    json j;
    try {
        j = json::parse(text);
    }
    catch (const json::parse_error& e) {
        throw SchemaError(path, std::string("malformed JSON: ") + e.what());
    }
    return scenario_from_json(j, path);
}

inline ScenarioDocument load_scenario_file(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) {
        throw std::runtime_error("cannot read scenario file '" + file.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), file.filename().string());
}

/// A preset name, or otherwise a path to a scenario document.
inline ScenarioDocument resolve_scenario_source(const std::string& source)
{
    for (const auto& [name, id] : tokyo::preset_ids) {
        if (name == source) {
            return {tokyo::preset(id), {}};
        }
    }
    if (!std::filesystem::exists(source)) {
        throw tokyo::UnknownPreset(source);
    }
    return load_scenario_file(source);
}

} // namespace npisim::interface
