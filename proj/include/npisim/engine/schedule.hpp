#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace npisim::engine {

struct Breakpoint {
    int day = 0; ///< days since simulation start
    double value = 0.0;

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Piecewise-constant exogenous input. A breakpoint takes effect on its own
/// day: the value at `day` is that of the last breakpoint with day <= `day`.
class Schedule {
  public:
    Schedule() = default;

    explicit Schedule(double default_value, std::vector<Breakpoint> breakpoints = {})
        : default_(default_value), breakpoints_(std::move(breakpoints))
    {
        for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
            if (breakpoints_[i].day <= breakpoints_[i - 1].day) {
                throw std::invalid_argument("schedule breakpoints must be strictly increasing in day (" +
                                            std::to_string(breakpoints_[i - 1].day) + " then " +
                                            std::to_string(breakpoints_[i].day) + ")");
            }
        }
    }

    double default_value() const noexcept { return default_; }
    const std::vector<Breakpoint>& breakpoints() const noexcept { return breakpoints_; }

    double at(double day) const noexcept
    {
        const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), day,
                                         [](double d, const Breakpoint& b) { return d < b.day; });
        return it == breakpoints_.begin() ? default_ : std::prev(it)->value;
    }

    friend bool operator==(const Schedule&, const Schedule&) = default;

  private:
    double default_ = 0.0;
    std::vector<Breakpoint> breakpoints_;
};

inline double eval_schedule(const Schedule& s, double day) { return s.at(day); }

} // namespace npisim::engine
