#pragma once

#include "npisim/engine/simulate.hpp"
#include "npisim/metrics/observed.hpp"
#include "npisim/metrics/stats.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace npisim::metrics {

struct Residual {
    Date date;
    double simulated;
    double observed;
    double residual; ///< simulated - observed
};

struct MetricComparison {
    std::string metric;
    Date first;
    Date last;
    std::size_t count = 0;
    double rmse = 0.0;
    std::optional<double> pearson; ///< absent below 3 points or with a flat series
    std::vector<Residual> residuals;
};

struct ComparisonReport {
    std::vector<MetricComparison> metrics;
};

/// Pairs a simulated series with observations on the dates both cover.
inline std::vector<Residual> align(const engine::SimulationResult& result, std::string_view series,
                                   const ObservedSeries& observed)
{
    const auto& sim = result.at(series);
    std::vector<Residual> out;
    for (const auto& obs : observed.records) {
        const auto diff = (std::chrono::sys_days{obs.date} - std::chrono::sys_days{result.start}).count();
        if (diff < 0 || static_cast<std::size_t>(diff) >= sim.size()) {
            continue;
        }
        const double s = sim[static_cast<std::size_t>(diff)];
        out.push_back({obs.date, s, obs.value, s - obs.value});
    }
    return out;
}

/// Compares each observed series against the simulated series of the same
/// metric name, over the strict date intersection.
inline ComparisonReport compare(const engine::SimulationResult& result, std::span<const ObservedSeries> observed)
{
    ComparisonReport report;
    for (const auto& obs : observed) {
        MetricComparison m;
        m.metric = obs.metric;
        m.residuals = align(result, obs.metric, obs);
        if (m.residuals.empty()) {
            throw DataError("observed '" + obs.metric + "' does not overlap the simulation window", 0);
        }
        m.count = m.residuals.size();
        m.first = m.residuals.front().date;
        m.last = m.residuals.back().date;
        std::vector<double> s;
        std::vector<double> o;
        for (const auto& r : m.residuals) {
            s.push_back(r.simulated);
            o.push_back(r.observed);
        }
        m.rmse = rmse(s, o);
        if (m.count >= 3) {
            try {
                m.pearson = pearson(s, o);
            }
            catch (const StatsError&) {
                m.pearson.reset();
            }
        }
        report.metrics.push_back(std::move(m));
    }
    return report;
}

} // namespace npisim::metrics
