#pragma once

#include "npisim/calendar.hpp"
#include "npisim/engine/schedule.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace npisim::tokyo {

using engine::Breakpoint;
using engine::Schedule;

/// The eight binary intervention inputs of one scenario. Breakpoint days are
/// counted from `start_date`.
struct ScenarioSpec {
    std::string name;
    Date start_date = make_date(2020, 3, 1);
    Schedule short_term_consciousness;
    Schedule mid_term_consciousness;
    Schedule long_term_consciousness;
    Schedule school_closure_psych;
    Schedule school_closure_commute;
    Schedule stay_at_home;
    Schedule focused_intervention;
    Schedule new_normal;

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

using ScheduleField = Schedule ScenarioSpec::*;

inline constexpr std::array<std::pair<std::string_view, ScheduleField>, 8> scenario_schedules{{
    {"short_term_consciousness", &ScenarioSpec::short_term_consciousness},
    {"mid_term_consciousness", &ScenarioSpec::mid_term_consciousness},
    {"long_term_consciousness", &ScenarioSpec::long_term_consciousness},
    {"school_closure_psych", &ScenarioSpec::school_closure_psych},
    {"school_closure_commute", &ScenarioSpec::school_closure_commute},
    {"stay_at_home", &ScenarioSpec::stay_at_home},
    {"focused_intervention", &ScenarioSpec::focused_intervention},
    {"new_normal", &ScenarioSpec::new_normal},
}};

inline ScheduleField find_schedule_field(std::string_view name)
{
    for (const auto& [n, f] : scenario_schedules) {
        if (n == name) {
            return f;
        }
    }
    return nullptr;
}

/// Violated scenario invariants (non-binary values, breakpoints before the
/// start date), each prefixed with the schedule name.
inline std::vector<std::string> check_scenario(const ScenarioSpec& s)
{
    std::vector<std::string> out;
    auto binary = [](double v) { return v == 0.0 || v == 1.0; };
    for (const auto& [name, field] : scenario_schedules) {
        const Schedule& sch = s.*field;
        if (!binary(sch.default_value())) {
            out.push_back(std::string(name) + ": initial value must be 0 or 1");
        }
        for (const auto& b : sch.breakpoints()) {
            if (!binary(b.value)) {
                out.push_back(std::string(name) + ": value at day " + std::to_string(b.day) + " must be 0 or 1");
            }
            if (b.day < 0) {
                out.push_back(std::string(name) + ": breakpoint precedes the start date");
            }
        }
    }
    return out;
}

enum class PresetId { realistic, second_emergency, pre_emptive_shorter, exhaustive };

inline constexpr std::array<std::pair<std::string_view, PresetId>, 4> preset_ids{{
    {"realistic", PresetId::realistic},
    {"second_emergency", PresetId::second_emergency},
    {"pre_emptive_shorter", PresetId::pre_emptive_shorter},
    {"exhaustive", PresetId::exhaustive},
}};

class UnknownPreset : public std::invalid_argument {
  public:
    explicit UnknownPreset(std::string_view name)
        : std::invalid_argument("unknown preset '" + std::string(name) + "'; valid presets: " + valid_list())
    {
    }

    static std::string valid_list()
    {
        std::string s;
        for (const auto& [n, id] : preset_ids) {
            s += (s.empty() ? "" : ", ") + std::string(n);
        }
        return s;
    }
};

inline std::string_view preset_name(PresetId id)
{
    for (const auto& [n, p] : preset_ids) {
        if (p == id) {
            return n;
        }
    }
    return "?";
}

inline PresetId parse_preset_id(std::string_view name)
{
    for (const auto& [n, p] : preset_ids) {
        if (n == name) {
            return p;
        }
    }
    throw UnknownPreset(name);
}

namespace detail {

struct DatedStep {
    int month;
    int day;
    double value;
};

inline Schedule dated(Date start, double initial, std::initializer_list<DatedStep> steps)
{
    std::vector<Breakpoint> bps;
    for (const auto& s : steps) {
        bps.push_back({date_to_day(make_date(2020, static_cast<unsigned>(s.month), static_cast<unsigned>(s.day)), start),
                       s.value});
    }
    return Schedule(initial, std::move(bps));
}

} // namespace detail

/// The four intervention scenarios, transcribed from their dated step lists.
/// School-closure commuting follows the psychological school-closure input
/// and the new-normal lifestyle latches on from 15 Apr 2020 in every preset.
inline ScenarioSpec preset(PresetId id)
{
    using detail::dated;
    const Date start = make_date(2020, 3, 1);

    ScenarioSpec s;
    s.name = std::string(preset_name(id));
    s.start_date = start;
    s.mid_term_consciousness = dated(start, 0, {{3, 27, 1}, {5, 30, 0}});
    s.long_term_consciousness = dated(start, 0, {{3, 27, 1}});
    s.school_closure_psych = dated(start, 1, {{5, 26, 0}});
    s.school_closure_commute = s.school_closure_psych;
    s.focused_intervention = Schedule(0.0);
    s.new_normal = dated(start, 0, {{4, 15, 1}});

    switch (id) {
    case PresetId::realistic:
        s.short_term_consciousness = dated(start, 0, {{3, 27, 1}, {5, 30, 0}, {7, 5, 1}, {9, 15, 0}});
        s.stay_at_home = dated(start, 0, {{4, 8, 1}, {5, 26, 0}});
        break;
    case PresetId::second_emergency:
        s.short_term_consciousness = dated(start, 0, {{3, 27, 1}, {5, 30, 0}, {7, 5, 1}, {9, 1, 0}});
        s.stay_at_home = dated(start, 0, {{4, 8, 1}, {5, 26, 0}, {7, 19, 1}, {9, 1, 0}});
        break;
    case PresetId::pre_emptive_shorter:
        s.short_term_consciousness = dated(start, 0, {{3, 27, 1}, {5, 30, 0}, {6, 28, 1}, {7, 28, 0}});
        s.stay_at_home = dated(start, 0, {{4, 8, 1}, {5, 26, 0}, {6, 28, 1}, {7, 28, 0}});
        break;
    case PresetId::exhaustive:
        s.short_term_consciousness = dated(start, 0, {{3, 27, 1}, {5, 30, 0}, {7, 3, 1}, {9, 1, 0}});
        s.stay_at_home = dated(start, 0, {{3, 29, 1}, {5, 30, 0}, {6, 3, 1}, {9, 1, 0}});
        break;
    }
    return s;
}

inline ScenarioSpec preset(std::string_view name) { return preset(parse_preset_id(name)); }

inline std::vector<ScenarioSpec> all_presets()
{
    std::vector<ScenarioSpec> out;
    for (const auto& [n, id] : preset_ids) {
        out.push_back(preset(id));
    }
    return out;
}

} // namespace npisim::tokyo
