#pragma once

#include "npisim/engine/simulate.hpp"
#include "npisim/tokyo/params.hpp"
#include "npisim/tokyo/scenario.hpp"

#include <array>
#include <string_view>

namespace npisim::tokyo {

using engine::Unit;

/// Stocks holding people in the disease block; their sum is conserved.
inline constexpr std::array<std::string_view, 9> epidemiological_stocks{
    "Susceptible", "Infected",     "Apparent",          "Inapparent",        "Confirmed",
    "NotTested",   "Hospitalised", "RecoveredInapparent", "RecoveredNotTested",
};

/// Assembles the disease, people-flow/behaviour, and restaurant blocks for
/// one scenario. Parameters become named constant auxiliaries so every
/// equation below reads like its source formula.
inline engine::ModelDef build_model(const DiseaseParams& d, const MobilityBehaviorParams& m,
                                    const RestaurantParams& r, const ScenarioSpec& s)
{
    if (auto bad = check_params(ModelParams{d, m, r}); !bad.empty()) {
        throw ParameterError(std::move(bad));
    }
    if (auto bad = check_scenario(s); !bad.empty()) {
        throw ParameterError(std::move(bad));
    }

    engine::ModelDef model;

    // Scenario inputs and dated parameter schedules.
    for (const auto& [name, field] : scenario_schedules) {
        model.add_schedule(std::string(name), s.*field);
    }
    model.add_schedule("testing_policy", d.testing_policy.relative_to(s.start_date));
    model.add_schedule("temperature_effect", d.temperature_effect.relative_to(s.start_date));
    model.add_schedule("behaviour_guidance", m.behaviour_guidance.relative_to(s.start_date));

    // Disease constants.
    model.add_constant("total_population", d.total_population, Unit::persons)
        .add_constant("reproduction_rate_daily", d.reproduction_rate_daily)
        .add_constant("transmission_scale", d.transmission_scale)
        .add_constant("apparent_ratio", d.apparent_ratio)
        .add_constant("incubation_days", d.incubation_days)
        .add_constant("inapparent_clearance_days", d.inapparent_clearance_days)
        .add_constant("symptomatic_resolution_days", d.symptomatic_resolution_days)
        .add_constant("confirmation_delay_days", d.confirmation_delay_days)
        .add_constant("hospitalisation_delay_days", d.hospitalisation_delay_days)
        .add_constant("carrier_weight_infected", d.carrier_weights.infected)
        .add_constant("carrier_weight_inapparent", d.carrier_weights.inapparent)
        .add_constant("carrier_weight_apparent", d.carrier_weights.apparent)
        .add_constant("carrier_weight_not_tested", d.carrier_weights.not_tested)
        .add_constant("carrier_weight_confirmed", d.carrier_weights.confirmed);

    // People flow and behaviour constants.
    model.add_constant("baseline_people_flow", m.baseline_people_flow, Unit::persons_per_hour)
        .add_constant("c_school", m.c_school)
        .add_constant("c_stay", m.c_stay)
        .add_constant("c_shortterm", m.c_shortterm)
        .add_constant("c_newnormal", m.c_newnormal)
        .add_constant("distancing_factor", m.distancing_factor)
        .add_constant("protect_prob_epidemic", m.protect_prob_epidemic)
        .add_constant("protect_prob_normal", m.protect_prob_normal);

    // Restaurant constants.
    model.add_constant("baseline_dining_out", r.effective_baseline_dining_out(), Unit::persons_per_day)
        .add_constant("dining_return_days", r.dining_return_days)
        .add_constant("v_school", r.v_school)
        .add_constant("v_stay", r.v_stay)
        .add_constant("v_mid", r.v_mid)
        .add_constant("v_focused", r.v_focused)
        .add_constant("v_long", r.v_long)
        .add_constant("w_school", r.w_school)
        .add_constant("w_long", r.w_long)
        .add_constant("w_stay", r.w_stay)
        .add_constant("w_focused", r.w_focused)
        .add_constant("w_mid", r.w_mid);

    // Derived quantities.
    model.add_auxiliary("susceptible_ratio", "Susceptible / total_population")
        .add_auxiliary("carriers",
                       "carrier_weight_infected * Infected + carrier_weight_inapparent * Inapparent"
                       " + carrier_weight_apparent * Apparent + carrier_weight_not_tested * NotTested"
                       " + carrier_weight_confirmed * Confirmed",
                       Unit::persons)
        .add_auxiliary("flow_mult",
                       "max(1 - c_school * school_closure_commute - c_stay * stay_at_home"
                       " - c_shortterm * short_term_consciousness - c_newnormal * new_normal, 0)")
        .add_auxiliary("people_flow", "baseline_people_flow * flow_mult", Unit::persons_per_hour)
        .add_auxiliary("behavior_mult",
                       "1 - (protect_prob_normal + (protect_prob_epidemic - protect_prob_normal)"
                       " * behaviour_guidance) * (1 - distancing_factor)")
        .add_auxiliary("daily_confirmed", "Apparent * testing_policy / confirmation_delay_days",
                       Unit::persons_per_day)
        .add_auxiliary("cumulative_confirmed", "Confirmed + Hospitalised", Unit::persons)
        .add_auxiliary("visits_normalized",
                       "1 - v_school * school_closure_psych - v_stay * stay_at_home - v_mid * mid_term_consciousness"
                       " - v_focused * focused_intervention - v_long * long_term_consciousness")
        .add_auxiliary("ewom_mass",
                       "1 - w_school * school_closure_psych - w_long * long_term_consciousness"
                       " - w_stay * stay_at_home - w_focused * focused_intervention - w_mid * mid_term_consciousness");

    // Flows (persons/day).
    model
        .add_flow("infection", "reproduction_rate_daily * transmission_scale * temperature_effect"
                               " * susceptible_ratio * flow_mult * behavior_mult * carriers")
        .add_flow("apparent_infection", "Infected * apparent_ratio / incubation_days")
        .add_flow("inapparent_infection", "Infected * (1 - apparent_ratio) / incubation_days")
        .add_flow("virus_testing", "daily_confirmed")
        .add_flow("not_tested", "Apparent * (1 - testing_policy) / confirmation_delay_days")
        .add_flow("inapparent_recovery", "Inapparent / inapparent_clearance_days")
        .add_flow("not_tested_recovery", "NotTested / symptomatic_resolution_days")
        .add_flow("hospitalisation", "Confirmed / hospitalisation_delay_days")
        .add_flow("dining_out", "baseline_dining_out * visits_normalized")
        .add_flow("dining_return", "CustomerOut / dining_return_days");

    model.add_stock("Susceptible", d.total_population, {}, {"infection"})
        .add_stock("Infected", d.initial_infected, {"infection"}, {"apparent_infection", "inapparent_infection"})
        .add_stock("Apparent", d.initial_apparent, {"apparent_infection"}, {"virus_testing", "not_tested"})
        .add_stock("Inapparent", d.initial_inapparent, {"inapparent_infection"}, {"inapparent_recovery"})
        .add_stock("Confirmed", d.initial_confirmed, {"virus_testing"}, {"hospitalisation"})
        .add_stock("NotTested", d.initial_not_tested, {"not_tested"}, {"not_tested_recovery"})
        .add_stock("Hospitalised", 0.0, {"hospitalisation"}, {})
        .add_stock("RecoveredInapparent", 0.0, {"inapparent_recovery"}, {})
        .add_stock("RecoveredNotTested", 0.0, {"not_tested_recovery"}, {})
        .add_stock("CustomerHome", r.customer_population, {"dining_return"}, {"dining_out"})
        .add_stock("CustomerOut", 0.0, {"dining_out"}, {"dining_return"});

    if (auto report = engine::validate_model(model); !report.empty()) {
        throw engine::ValidationError(std::move(report));
    }
    return model;
}

inline engine::ModelDef build_model(const ModelParams& p, const ScenarioSpec& s)
{
    return build_model(p.disease, p.mobility, p.restaurant, s);
}

/// Builds and runs one scenario; the run starts on the scenario's start date.
inline engine::SimulationResult simulate(const ModelParams& p, const ScenarioSpec& s, int horizon = 213,
                                         double dt = 1.0)
{
    const auto model = build_model(p, s);
    engine::RunConfig cfg;
    cfg.start = s.start_date;
    cfg.horizon = horizon;
    cfg.dt = dt;
    return engine::run(model, cfg);
}

} // namespace npisim::tokyo
