#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace npisim::metrics {

class StatsError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Sample Pearson correlation coefficient.
inline double pearson(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw StatsError("pearson: length mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    }
    if (a.size() < 3) {
        throw StatsError("pearson: need at least 3 paired values");
    }
    const double n = static_cast<double>(a.size());
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= n;
    mean_b /= n;

    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw StatsError("pearson: zero-variance input");
    }
    const double r = sab / std::sqrt(saa * sbb);
    return r > 1.0 ? 1.0 : (r < -1.0 ? -1.0 : r);
}

/// Root mean squared residual.
inline double rmse(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw StatsError("rmse: length mismatch (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                         ")");
    }
    if (a.empty()) {
        throw StatsError("rmse: empty input");
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = a[i] - b[i];
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(a.size()));
}

} // namespace npisim::metrics
