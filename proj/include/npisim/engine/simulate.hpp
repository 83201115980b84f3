#pragma once

#include "npisim/calendar.hpp"
#include "npisim/engine/model.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace npisim::engine {

class SimulationError : public std::runtime_error {
  public:
    SimulationError(const std::string& what, std::string entity, double time)
        : std::runtime_error(what), entity_(std::move(entity)), time_(time)
    {
    }
    const std::string& entity() const noexcept { return entity_; }
    double time() const noexcept { return time_; }

  private:
    std::string entity_;
    double time_;
};

struct RunConfig {
    Date start = make_date(2020, 3, 1);
    int horizon = 213; ///< days; the run records horizon + 1 daily values
    double dt = 1.0;

    /// Integration steps per day. Throws unless 0 < dt <= 1 and 1/dt is whole.
    int steps_per_day() const
    {
        if (horizon < 1) {
            throw std::invalid_argument("horizon must be at least 1 day");
        }
        if (!(dt > 0.0 && dt <= 1.0)) {
            throw std::invalid_argument("dt must lie in (0, 1]");
        }
        const double n = std::round(1.0 / dt);
        if (std::abs(n * dt - 1.0) > 1e-12) {
            throw std::invalid_argument("dt must divide one day evenly");
        }
        return static_cast<int>(n);
    }
};

struct SimState {
    double time = 0.0;
    std::map<std::string, double, std::less<>> stocks;
};

struct ClampEvent {
    double time;
    std::string stock;
    double unclamped; ///< value the update would have produced
};

struct SimulationResult {
    Date start;
    std::vector<Date> dates;
    std::vector<std::string> stock_names;
    std::vector<std::string> flow_names;
    std::vector<std::string> auxiliary_names;
    std::vector<std::string> schedule_names;
    std::map<std::string, std::vector<double>, std::less<>> series;
    std::vector<ClampEvent> clamp_events;

    const std::vector<double>& at(std::string_view name) const
    {
        const auto it = series.find(name);
        if (it == series.end()) {
            throw std::out_of_range("no series named '" + std::string(name) + "'");
        }
        return it->second;
    }
    std::size_t days() const noexcept { return dates.size(); }
};

/// A validated model with every reference resolved to a value slot.
///
/// Slot layout: stocks, then auxiliaries, then schedules, then flows, each in
/// declaration order.
class CompiledModel {
  public:
    explicit CompiledModel(const ModelDef& model) : model_(&model)
    {
        if (auto report = validate_model(model); !report.empty()) {
            throw ValidationError(std::move(report));
        }
        const std::size_t ns = model.stocks().size();
        const std::size_t na = model.auxiliaries().size();
        const std::size_t nsch = model.schedules().size();
        aux_base_ = ns;
        sched_base_ = ns + na;
        flow_base_ = ns + na + nsch;
        slot_count_ = flow_base_ + model.flows().size();

        auto resolve = [&](Expr e) {
            for_each_reference(e, [&](Expr& r) {
                const auto entry = *model.find(r.name);
                switch (entry.kind) {
                case EntityKind::stock:
                    r.ref_kind = RefKind::stock;
                    r.slot = entry.index;
                    break;
                case EntityKind::auxiliary:
                    r.ref_kind = RefKind::auxiliary;
                    r.slot = aux_base_ + entry.index;
                    break;
                case EntityKind::schedule:
                    r.ref_kind = RefKind::schedule;
                    r.slot = sched_base_ + entry.index;
                    break;
                case EntityKind::flow:
                    break; // rejected by validation
                }
            });
            return e;
        };
        for (std::size_t i : topological_order(model)) {
            aux_order_.push_back({aux_base_ + i, resolve(model.auxiliaries()[i].expr)});
        }
        for (std::size_t i = 0; i < model.flows().size(); ++i) {
            flows_.push_back({flow_base_ + i, resolve(model.flows()[i].expr)});
        }
        for (const auto& s : model.stocks()) {
            StockUpdate u;
            for (const auto& f : s.inflows) {
                u.inflows.push_back(flow_base_ + model.find(f)->index);
            }
            for (const auto& f : s.outflows) {
                u.outflows.push_back(flow_base_ + model.find(f)->index);
            }
            u.non_negative = s.non_negative;
            stock_updates_.push_back(std::move(u));
        }
    }

    const ModelDef& model() const noexcept { return *model_; }
    std::size_t slot_count() const noexcept { return slot_count_; }

    /// Fills auxiliary, schedule, and flow slots from the stock slots at time `t`.
    void evaluate(std::vector<double>& slots, double t) const
    {
        const auto& scheds = model_->schedules();
        for (std::size_t i = 0; i < scheds.size(); ++i) {
            slots[sched_base_ + i] = scheds[i].schedule.at(t);
        }
        auto lookup = [&](const Expr& r) { return slots[r.slot]; };
        auto run = [&](const Assignment& a, const std::string& name) {
            double v;
            try {
                v = npisim::engine::evaluate(a.expr, lookup);
            }
            catch (const EvalError& err) {
                throw SimulationError(name + ": " + err.what() + " at t=" + std::to_string(t), name, t);
            }
            if (!std::isfinite(v)) {
                throw SimulationError(name + " became non-finite at t=" + std::to_string(t), name, t);
            }
            slots[a.slot] = v;
        };
        for (const auto& a : aux_order_) {
            run(a, model_->auxiliaries()[a.slot - aux_base_].name);
        }
        for (const auto& a : flows_) {
            run(a, model_->flows()[a.slot - flow_base_].name);
        }
    }

    /// Advances the stock slots by one explicit Euler step using the flow
    /// slots filled by the preceding evaluate().
    void advance(std::vector<double>& slots, double t, double dt, std::vector<ClampEvent>* clamps) const
    {
        std::vector<double> next(stock_updates_.size());
        for (std::size_t i = 0; i < stock_updates_.size(); ++i) {
            const auto& u = stock_updates_[i];
            double net = 0.0;
            for (std::size_t f : u.inflows) {
                net += slots[f];
            }
            for (std::size_t f : u.outflows) {
                net -= slots[f];
            }
            double v = slots[i] + net * dt;
            if (!std::isfinite(v)) {
                const auto& name = model_->stocks()[i].name;
                throw SimulationError(name + " became non-finite at t=" + std::to_string(t), name, t);
            }
            if (u.non_negative && v < 0.0) {
                if (clamps) {
                    clamps->push_back({t + dt, model_->stocks()[i].name, v});
                }
                v = 0.0;
            }
            next[i] = v;
        }
        std::copy(next.begin(), next.end(), slots.begin());
    }

    std::vector<double> initial_slots() const
    {
        std::vector<double> slots(slot_count_, 0.0);
        for (std::size_t i = 0; i < model_->stocks().size(); ++i) {
            slots[i] = model_->stocks()[i].initial;
        }
        return slots;
    }

    std::size_t aux_slot(std::size_t i) const noexcept { return aux_base_ + i; }
    std::size_t schedule_slot(std::size_t i) const noexcept { return sched_base_ + i; }
    std::size_t flow_slot(std::size_t i) const noexcept { return flow_base_ + i; }

  private:
    struct Assignment {
        std::size_t slot;
        Expr expr;
    };
    struct StockUpdate {
        std::vector<std::size_t> inflows;
        std::vector<std::size_t> outflows;
        bool non_negative = true;
    };

    const ModelDef* model_;
    std::size_t aux_base_ = 0;
    std::size_t sched_base_ = 0;
    std::size_t flow_base_ = 0;
    std::size_t slot_count_ = 0;
    std::vector<Assignment> aux_order_;
    std::vector<Assignment> flows_;
    std::vector<StockUpdate> stock_updates_;
};

inline SimState initial_state(const ModelDef& model)
{
    SimState s;
    for (const auto& stock : model.stocks()) {
        s.stocks[stock.name] = stock.initial;
    }
    return s;
}

/// One explicit Euler step: auxiliaries in dependency order, then flows, then
/// stock += (inflows - outflows) * dt with non-negative stocks clamped at 0.
inline SimState step(const ModelDef& model, const SimState& state, double dt)
{
    const CompiledModel compiled(model);
    std::vector<double> slots = compiled.initial_slots();
    for (std::size_t i = 0; i < model.stocks().size(); ++i) {
        const auto it = state.stocks.find(model.stocks()[i].name);
        if (it == state.stocks.end()) {
            throw std::invalid_argument("state is missing stock '" + model.stocks()[i].name + "'");
        }
        slots[i] = it->second;
    }
    compiled.evaluate(slots, state.time);
    compiled.advance(slots, state.time, dt, nullptr);
    SimState out;
    out.time = state.time + dt;
    for (std::size_t i = 0; i < model.stocks().size(); ++i) {
        out.stocks[model.stocks()[i].name] = slots[i];
    }
    return out;
}

/// Runs `model` over cfg.horizon days. Every stock, flow, auxiliary, and
/// schedule is recorded at each whole day; flows recorded on day d are the
/// rates applied from day d onward.
inline SimulationResult run(const ModelDef& model, const RunConfig& cfg)
{
    const int per_day = cfg.steps_per_day();
    const CompiledModel compiled(model);

    SimulationResult result;
    result.start = cfg.start;
    const auto days = static_cast<std::size_t>(cfg.horizon) + 1;
    result.dates.reserve(days);
    for (int d = 0; d <= cfg.horizon; ++d) {
        result.dates.push_back(day_to_date(d, cfg.start));
    }

    struct Recorder {
        std::vector<double>* series;
        std::size_t slot;
    };
    std::vector<Recorder> recorders;
    auto add = [&](std::vector<std::string>& names, const std::string& name, std::size_t slot) {
        names.push_back(name);
        auto& s = result.series[name];
        s.reserve(days);
        recorders.push_back({&s, slot});
    };
    for (std::size_t i = 0; i < model.stocks().size(); ++i) {
        add(result.stock_names, model.stocks()[i].name, i);
    }
    for (std::size_t i = 0; i < model.flows().size(); ++i) {
        add(result.flow_names, model.flows()[i].name, compiled.flow_slot(i));
    }
    for (std::size_t i = 0; i < model.auxiliaries().size(); ++i) {
        add(result.auxiliary_names, model.auxiliaries()[i].name, compiled.aux_slot(i));
    }
    for (std::size_t i = 0; i < model.schedules().size(); ++i) {
        add(result.schedule_names, model.schedules()[i].name, compiled.schedule_slot(i));
    }

    std::vector<double> slots = compiled.initial_slots();
    for (int d = 0; d <= cfg.horizon; ++d) {
        for (int k = 0; k < per_day; ++k) {
            const double t = d + k * cfg.dt;
            try {
                compiled.evaluate(slots, t);
                if (k == 0) {
                    for (auto& r : recorders) {
                        r.series->push_back(slots[r.slot]);
                    }
                    if (d == cfg.horizon) {
                        break;
                    }
                }
                compiled.advance(slots, t, cfg.dt, &result.clamp_events);
            }
            catch (const SimulationError& e) {
                throw SimulationError("day " + std::to_string(d) + ": " + e.what(), e.entity(), e.time());
            }
        }
    }
    return result;
}

} // namespace npisim::engine
