#pragma once

#include "npisim/calendar.hpp"
#include "npisim/engine/schedule.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace npisim::tokyo {

/// A step schedule keyed by calendar date; converted to day indices once the
/// simulation start is known.
struct DatedSchedule {
    double initial = 0.0;
    std::vector<std::pair<Date, double>> changes;

    /// Changes dated before `start` fold into the value in force at day 0.
    engine::Schedule relative_to(Date start) const
    {
        double def = initial;
        std::vector<engine::Breakpoint> bps;
        for (const auto& [date, value] : changes) {
            if (date < start) {
                def = value;
            }
            else {
                bps.push_back({date_to_day(date, start), value});
            }
        }
        return engine::Schedule(def, std::move(bps));
    }
};

/// Per-compartment weights in the carrier count that drives infection.
struct CarrierWeights {
    double infected = 1.0;
    double inapparent = 1.0;
    double apparent = 0.0;
    double not_tested = 0.0;
    double confirmed = 0.0;
};

struct DiseaseParams {
    double total_population = 1.40e7;
    double reproduction_rate_daily = 0.207;
    double r0_per_occasion = 2.9; // informational; the daily rate is what the model uses
    double apparent_ratio = 0.375;
    double incubation_days = 5.0;
    double inapparent_clearance_days = 8.0;
    double symptomatic_resolution_days = 8.0;
    double confirmation_delay_days = 2.0;
    double hospitalisation_delay_days = 1.0;
    double transmission_scale = 1.0;
    CarrierWeights carrier_weights;

    double initial_infected = 149.0;
    double initial_apparent = 60.0;
    double initial_inapparent = 664.0;
    double initial_confirmed = 5.0;
    double initial_not_tested = 50.0;

    DatedSchedule testing_policy{0.5, {{make_date(2020, 5, 10), 1.0}}};
    DatedSchedule temperature_effect{1.0,
                                     {{make_date(2020, 5, 15), 1.2},
                                      {make_date(2020, 6, 15), 1.6},
                                      {make_date(2020, 7, 15), 1.1},
                                      {make_date(2020, 9, 15), 1.6}}};
};

struct MobilityBehaviorParams {
    double baseline_people_flow = 250000.0; // persons/hour at a representative node
    double c_school = 0.2;
    double c_stay = 0.1;
    double c_shortterm = 0.1;
    double c_newnormal = 0.4;
    double distancing_factor = 0.5;
    double protect_prob_epidemic = 0.6;
    double protect_prob_normal = 0.3;
    DatedSchedule behaviour_guidance{0.0, {{make_date(2020, 4, 15), 1.0}}};
};

struct RestaurantParams {
    double customer_population = 1.07e7;
    /// persons/day; unset means 10% of the customer population
    std::optional<double> baseline_dining_out;
    double dining_return_days = 1.0;

    double v_school = 0.2;
    double v_stay = 0.1;
    double v_mid = 0.1;
    double v_focused = 0.1;
    double v_long = 0.3;

    double w_school = 0.2;
    double w_long = 0.2;
    double w_stay = 0.1;
    double w_focused = 0.1;
    double w_mid = 0.1;

    double effective_baseline_dining_out() const
    {
        return baseline_dining_out.value_or(0.1 * customer_population);
    }
};

struct ModelParams {
    DiseaseParams disease;
    MobilityBehaviorParams mobility;
    RestaurantParams restaurant;
};

class ParameterError : public std::runtime_error {
  public:
    explicit ParameterError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations))
    {
    }
    const std::vector<std::string>& violations() const noexcept { return violations_; }

  private:
    std::vector<std::string> violations_;

    static std::string join(const std::vector<std::string>& v)
    {
        std::string s = "invalid parameters:";
        for (const auto& x : v) {
            s += " " + x + ";";
        }
        return s;
    }
};

class UnknownParameter : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Every violated parameter invariant, empty when all hold.
inline std::vector<std::string> check_params(const ModelParams& p)
{
    std::vector<std::string> out;
    auto in_unit = [&](std::string_view name, double v) {
        if (!(v >= 0.0 && v <= 1.0)) {
            out.push_back(std::string(name) + " must lie in [0, 1]");
        }
    };
    auto positive = [&](std::string_view name, double v) {
        if (!(v > 0.0)) {
            out.push_back(std::string(name) + " must be > 0");
        }
    };
    auto non_negative = [&](std::string_view name, double v) {
        if (!(v >= 0.0)) {
            out.push_back(std::string(name) + " must be >= 0");
        }
    };
    auto sum_at_most_one = [&](std::string_view name, std::initializer_list<double> xs) {
        double s = 0.0;
        for (double x : xs) {
            s += x;
        }
        if (s > 1.0 + 1e-12) {
            out.push_back(std::string(name) + " coefficients must sum to at most 1");
        }
    };

    const auto& d = p.disease;
    positive("disease.total_population", d.total_population);
    non_negative("disease.reproduction_rate_daily", d.reproduction_rate_daily);
    in_unit("disease.apparent_ratio", d.apparent_ratio);
    positive("disease.incubation_days", d.incubation_days);
    positive("disease.inapparent_clearance_days", d.inapparent_clearance_days);
    positive("disease.symptomatic_resolution_days", d.symptomatic_resolution_days);
    positive("disease.confirmation_delay_days", d.confirmation_delay_days);
    positive("disease.hospitalisation_delay_days", d.hospitalisation_delay_days);
    positive("disease.transmission_scale", d.transmission_scale);
    non_negative("disease.carrier_weights.infected", d.carrier_weights.infected);
    non_negative("disease.carrier_weights.inapparent", d.carrier_weights.inapparent);
    non_negative("disease.carrier_weights.apparent", d.carrier_weights.apparent);
    non_negative("disease.carrier_weights.not_tested", d.carrier_weights.not_tested);
    non_negative("disease.carrier_weights.confirmed", d.carrier_weights.confirmed);
    non_negative("disease.initial_infected", d.initial_infected);
    non_negative("disease.initial_apparent", d.initial_apparent);
    non_negative("disease.initial_inapparent", d.initial_inapparent);
    non_negative("disease.initial_confirmed", d.initial_confirmed);
    non_negative("disease.initial_not_tested", d.initial_not_tested);

    const auto& m = p.mobility;
    non_negative("mobility.baseline_people_flow", m.baseline_people_flow);
    in_unit("mobility.c_school", m.c_school);
    in_unit("mobility.c_stay", m.c_stay);
    in_unit("mobility.c_shortterm", m.c_shortterm);
    in_unit("mobility.c_newnormal", m.c_newnormal);
    sum_at_most_one("mobility flow", {m.c_school, m.c_stay, m.c_shortterm, m.c_newnormal});
    in_unit("mobility.distancing_factor", m.distancing_factor);
    in_unit("mobility.protect_prob_epidemic", m.protect_prob_epidemic);
    in_unit("mobility.protect_prob_normal", m.protect_prob_normal);

    const auto& r = p.restaurant;
    positive("restaurant.customer_population", r.customer_population);
    non_negative("restaurant.baseline_dining_out", r.effective_baseline_dining_out());
    positive("restaurant.dining_return_days", r.dining_return_days);
    for (auto [n, v] : {std::pair{"restaurant.v_school", r.v_school}, {"restaurant.v_stay", r.v_stay},
                        {"restaurant.v_mid", r.v_mid}, {"restaurant.v_focused", r.v_focused},
                        {"restaurant.v_long", r.v_long}, {"restaurant.w_school", r.w_school},
                        {"restaurant.w_long", r.w_long}, {"restaurant.w_stay", r.w_stay},
                        {"restaurant.w_focused", r.w_focused}, {"restaurant.w_mid", r.w_mid}}) {
        in_unit(n, v);
    }
    sum_at_most_one("restaurant visit", {r.v_school, r.v_stay, r.v_mid, r.v_focused, r.v_long});
    sum_at_most_one("restaurant eWOM", {r.w_school, r.w_long, r.w_stay, r.w_focused, r.w_mid});
    return out;
}

namespace detail {

struct ParamSlot {
    std::string_view name;
    std::function<double*(ModelParams&)> field;
};

inline const std::vector<ParamSlot>& param_slots()
{
    static const std::vector<ParamSlot> slots = {
        {"disease.total_population", [](ModelParams& p) { return &p.disease.total_population; }},
        {"disease.reproduction_rate_daily", [](ModelParams& p) { return &p.disease.reproduction_rate_daily; }},
        {"disease.r0_per_occasion", [](ModelParams& p) { return &p.disease.r0_per_occasion; }},
        {"disease.apparent_ratio", [](ModelParams& p) { return &p.disease.apparent_ratio; }},
        {"disease.incubation_days", [](ModelParams& p) { return &p.disease.incubation_days; }},
        {"disease.inapparent_clearance_days", [](ModelParams& p) { return &p.disease.inapparent_clearance_days; }},
        {"disease.symptomatic_resolution_days", [](ModelParams& p) { return &p.disease.symptomatic_resolution_days; }},
        {"disease.confirmation_delay_days", [](ModelParams& p) { return &p.disease.confirmation_delay_days; }},
        {"disease.hospitalisation_delay_days", [](ModelParams& p) { return &p.disease.hospitalisation_delay_days; }},
        {"disease.transmission_scale", [](ModelParams& p) { return &p.disease.transmission_scale; }},
        {"disease.carrier_weights.infected", [](ModelParams& p) { return &p.disease.carrier_weights.infected; }},
        {"disease.carrier_weights.inapparent", [](ModelParams& p) { return &p.disease.carrier_weights.inapparent; }},
        {"disease.carrier_weights.apparent", [](ModelParams& p) { return &p.disease.carrier_weights.apparent; }},
        {"disease.carrier_weights.not_tested", [](ModelParams& p) { return &p.disease.carrier_weights.not_tested; }},
        {"disease.carrier_weights.confirmed", [](ModelParams& p) { return &p.disease.carrier_weights.confirmed; }},
        {"disease.initial_infected", [](ModelParams& p) { return &p.disease.initial_infected; }},
        {"disease.initial_apparent", [](ModelParams& p) { return &p.disease.initial_apparent; }},
        {"disease.initial_inapparent", [](ModelParams& p) { return &p.disease.initial_inapparent; }},
        {"disease.initial_confirmed", [](ModelParams& p) { return &p.disease.initial_confirmed; }},
        {"disease.initial_not_tested", [](ModelParams& p) { return &p.disease.initial_not_tested; }},
        {"mobility.baseline_people_flow", [](ModelParams& p) { return &p.mobility.baseline_people_flow; }},
        {"mobility.c_school", [](ModelParams& p) { return &p.mobility.c_school; }},
        {"mobility.c_stay", [](ModelParams& p) { return &p.mobility.c_stay; }},
        {"mobility.c_shortterm", [](ModelParams& p) { return &p.mobility.c_shortterm; }},
        {"mobility.c_newnormal", [](ModelParams& p) { return &p.mobility.c_newnormal; }},
        {"mobility.distancing_factor", [](ModelParams& p) { return &p.mobility.distancing_factor; }},
        {"mobility.protect_prob_epidemic", [](ModelParams& p) { return &p.mobility.protect_prob_epidemic; }},
        {"mobility.protect_prob_normal", [](ModelParams& p) { return &p.mobility.protect_prob_normal; }},
        {"restaurant.customer_population", [](ModelParams& p) { return &p.restaurant.customer_population; }},
        {"restaurant.baseline_dining_out",
         [](ModelParams& p) {
             if (!p.restaurant.baseline_dining_out) {
                 p.restaurant.baseline_dining_out = p.restaurant.effective_baseline_dining_out();
             }
             return &*p.restaurant.baseline_dining_out;
         }},
        {"restaurant.dining_return_days", [](ModelParams& p) { return &p.restaurant.dining_return_days; }},
        {"restaurant.v_school", [](ModelParams& p) { return &p.restaurant.v_school; }},
        {"restaurant.v_stay", [](ModelParams& p) { return &p.restaurant.v_stay; }},
        {"restaurant.v_mid", [](ModelParams& p) { return &p.restaurant.v_mid; }},
        {"restaurant.v_focused", [](ModelParams& p) { return &p.restaurant.v_focused; }},
        {"restaurant.v_long", [](ModelParams& p) { return &p.restaurant.v_long; }},
        {"restaurant.w_school", [](ModelParams& p) { return &p.restaurant.w_school; }},
        {"restaurant.w_long", [](ModelParams& p) { return &p.restaurant.w_long; }},
        {"restaurant.w_stay", [](ModelParams& p) { return &p.restaurant.w_stay; }},
        {"restaurant.w_focused", [](ModelParams& p) { return &p.restaurant.w_focused; }},
        {"restaurant.w_mid", [](ModelParams& p) { return &p.restaurant.w_mid; }},
    };
    return slots;
}

} // namespace detail

/// Dotted names accepted by set_param, e.g. "disease.transmission_scale".
inline std::vector<std::string> param_names()
{
    std::vector<std::string> out;
    for (const auto& s : detail::param_slots()) {
        out.emplace_back(s.name);
    }
    return out;
}

inline void set_param(ModelParams& p, std::string_view dotted_name, double value)
{
    for (const auto& s : detail::param_slots()) {
        if (s.name == dotted_name) {
            *s.field(p) = value;
            return;
        }
    }
    throw UnknownParameter("unknown parameter '" + std::string(dotted_name) + "'");
}

inline double get_param(const ModelParams& p, std::string_view dotted_name)
{
    ModelParams copy = p;
    for (const auto& s : detail::param_slots()) {
        if (s.name == dotted_name) {
            return *s.field(copy);
        }
    }
    throw UnknownParameter("unknown parameter '" + std::string(dotted_name) + "'");
}

} // namespace npisim::tokyo
