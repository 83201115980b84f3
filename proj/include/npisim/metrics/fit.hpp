#pragma once

#include "npisim/metrics/compare.hpp"
#include "npisim/tokyo/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace npisim::metrics {

struct GridSpec {
    double min = 0.5;
    double max = 2.0;
    double step = 0.1;
};

class GridError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// min, min+step, ... up to max inclusive. Points are rounded to 12 decimal
/// places so a 0.1 grid lands on the doubles nearest 0.5, 0.6, ...
inline std::vector<double> grid_values(const GridSpec& g)
{
    if (!std::isfinite(g.min) || !std::isfinite(g.max) || !std::isfinite(g.step)) {
        throw GridError("grid bounds must be finite");
    }
    if (g.max < g.min) {
        throw GridError("empty grid: max < min");
    }
    if (!(g.step > 0.0)) {
        throw GridError("empty grid: step must be > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor((g.max - g.min) / g.step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::round((g.min + static_cast<double>(i) * g.step) * 1e12) / 1e12);
    }
    return out;
}

struct FitInputs {
    tokyo::ModelParams params;
    tokyo::ScenarioSpec scenario = tokyo::preset(tokyo::PresetId::realistic);
    int horizon = 213;
    double dt = 1.0;
    std::string series = "daily_confirmed";
};

struct FitResult {
    double best_scale = 0.0;
    double best_loss = 0.0;
    std::vector<double> grid;
    std::vector<double> losses; ///< RMSE per grid point
};

/// Grid search over disease.transmission_scale minimising RMSE between the
/// simulated series and the observations on shared dates. Ties go to the
/// smaller scale.
inline FitResult fit_transmission_scale(const FitInputs& base, const ObservedSeries& observed, const GridSpec& grid)
{
    FitResult fit;
    fit.grid = grid_values(grid);
    fit.best_loss = std::numeric_limits<double>::infinity();

    for (double scale : fit.grid) {
        tokyo::ModelParams p = base.params;
        p.disease.transmission_scale = scale;
        const auto result = tokyo::simulate(p, base.scenario, base.horizon, base.dt);
        const auto pairs = align(result, base.series, observed);
        if (pairs.empty()) {
            throw DataError("observed series has no dates inside the simulation window " +
                                format_iso_date(result.dates.front()) + " .. " + format_iso_date(result.dates.back()),
                            0);
        }
        std::vector<double> s;
        std::vector<double> o;
        for (const auto& r : pairs) {
            s.push_back(r.simulated);
            o.push_back(r.observed);
        }
        const double loss = rmse(s, o);
        fit.losses.push_back(loss);
        if (loss < fit.best_loss) {
            fit.best_loss = loss;
            fit.best_scale = scale;
        }
    }
    return fit;
}

} // namespace npisim::metrics
