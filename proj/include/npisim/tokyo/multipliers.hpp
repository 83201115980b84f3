#pragma once

#include "npisim/tokyo/params.hpp"

#include <algorithm>
#include <optional>

// Closed forms of the model's multiplier equations. build_model writes the
// same arithmetic, term for term, as engine expressions, so these functions
// and the simulated series agree bit for bit.

namespace npisim::tokyo {

/// Fraction of baseline people flow remaining, floored at 0.
inline double people_flow_multiplier(double school_commute, double stay_home, double short_term,
                                     double new_normal, const MobilityBehaviorParams& m = {})
{
    return std::max(1 - m.c_school * school_commute - m.c_stay * stay_home - m.c_shortterm * short_term -
                        m.c_newnormal * new_normal,
                    0.0);
}

/// Relative infection risk left after protective behaviour.
///
/// The protection probability in force moves from `normal_prob` toward
/// `protect_prob` as guidance goes from 0 to 1; with no `normal_prob` the
/// probability is `protect_prob` regardless of guidance.
inline double behavior_risk_multiplier(double protect_prob, double guidance, double distancing_factor,
                                       std::optional<double> normal_prob = std::nullopt)
{
    const double normal = normal_prob.value_or(protect_prob);
    return 1 - (normal + (protect_prob - normal) * guidance) * (1 - distancing_factor);
}

/// New infections per day.
inline double infection_flow(double carriers, double susceptible_ratio, double temperature, double flow_mult,
                             double behavior_mult, const DiseaseParams& d = {})
{
    return d.reproduction_rate_daily * d.transmission_scale * temperature * susceptible_ratio * flow_mult *
           behavior_mult * carriers;
}

inline double carrier_count(double infected, double inapparent, double apparent, double not_tested,
                            double confirmed, const CarrierWeights& w = {})
{
    return w.infected * infected + w.inapparent * inapparent + w.apparent * apparent +
           w.not_tested * not_tested + w.confirmed * confirmed;
}

/// Dining-out demand relative to the no-intervention baseline.
inline double visits_multiplier(double school_psych, double stay_home, double mid_term, double focused,
                                double long_term, const RestaurantParams& r = {})
{
    return 1 - r.v_school * school_psych - r.v_stay * stay_home - r.v_mid * mid_term - r.v_focused * focused -
           r.v_long * long_term;
}

/// Relative daily eWOM mass.
inline double ewom_multiplier(double school_psych, double long_term, double stay_home, double focused,
                              double mid_term, const RestaurantParams& r = {})
{
    return 1 - r.w_school * school_psych - r.w_long * long_term - r.w_stay * stay_home -
           r.w_focused * focused - r.w_mid * mid_term;
}

} // namespace npisim::tokyo
