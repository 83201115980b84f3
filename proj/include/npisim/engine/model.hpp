#pragma once

#include "npisim/engine/expression.hpp"
#include "npisim/engine/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace npisim::engine {

enum class Unit { dimensionless, persons, persons_per_day, persons_per_hour };

inline std::string_view unit_name(Unit u)
{
    switch (u) {
    case Unit::dimensionless: return "dimensionless";
    case Unit::persons: return "persons";
    case Unit::persons_per_day: return "persons/day";
    case Unit::persons_per_hour: return "persons/hour";
    }
    return "?";
}

struct StockDef {
    std::string name;
    double initial = 0.0;
    std::vector<std::string> inflows;
    std::vector<std::string> outflows;
    bool non_negative = true;
};

struct FlowDef {
    std::string name;
    Expr expr;
    Unit unit = Unit::persons_per_day;
};

struct AuxiliaryDef {
    std::string name;
    Expr expr;
    Unit unit = Unit::dimensionless;
};

struct ScheduleDef {
    std::string name;
    Schedule schedule;
};

enum class EntityKind { stock, flow, auxiliary, schedule };

/// Stock-and-flow graph. Entities are kept in declaration order; the name
/// index covers all four categories.
class ModelDef {
  public:
    ModelDef& add_stock(StockDef s)
    {
        index(s.name, EntityKind::stock, stocks_.size());
        stocks_.push_back(std::move(s));
        return *this;
    }
    ModelDef& add_stock(std::string name, double initial, std::vector<std::string> inflows,
                        std::vector<std::string> outflows, bool non_negative = true)
    {
        return add_stock(StockDef{std::move(name), initial, std::move(inflows), std::move(outflows), non_negative});
    }

    ModelDef& add_flow(std::string name, Expr expr, Unit unit = Unit::persons_per_day)
    {
        index(name, EntityKind::flow, flows_.size());
        flows_.push_back(FlowDef{std::move(name), std::move(expr), unit});
        return *this;
    }
    ModelDef& add_flow(std::string name, std::string_view expr, Unit unit = Unit::persons_per_day)
    {
        return add_flow(std::move(name), parse_expression(expr), unit);
    }

    ModelDef& add_auxiliary(std::string name, Expr expr, Unit unit = Unit::dimensionless)
    {
        index(name, EntityKind::auxiliary, auxiliaries_.size());
        auxiliaries_.push_back(AuxiliaryDef{std::move(name), std::move(expr), unit});
        return *this;
    }
    ModelDef& add_auxiliary(std::string name, std::string_view expr, Unit unit = Unit::dimensionless)
    {
        return add_auxiliary(std::move(name), parse_expression(expr), unit);
    }
    ModelDef& add_constant(std::string name, double value, Unit unit = Unit::dimensionless)
    {
        return add_auxiliary(std::move(name), Expr::constant(value), unit);
    }

    ModelDef& add_schedule(std::string name, Schedule s)
    {
        index(name, EntityKind::schedule, schedules_.size());
        schedules_.push_back(ScheduleDef{std::move(name), std::move(s)});
        return *this;
    }

    const std::vector<StockDef>& stocks() const noexcept { return stocks_; }
    const std::vector<FlowDef>& flows() const noexcept { return flows_; }
    const std::vector<AuxiliaryDef>& auxiliaries() const noexcept { return auxiliaries_; }
    const std::vector<ScheduleDef>& schedules() const noexcept { return schedules_; }

    struct Entry {
        EntityKind kind;
        std::size_t index;
    };

    /// First declaration of `name`, if any.
    std::optional<Entry> find(std::string_view name) const
    {
        const auto it = index_.find(name);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    /// Names declared more than once, in declaration order of the repeat.
    const std::vector<std::string>& duplicates() const noexcept { return duplicates_; }

  private:
    std::vector<StockDef> stocks_;
    std::vector<FlowDef> flows_;
    std::vector<AuxiliaryDef> auxiliaries_;
    std::vector<ScheduleDef> schedules_;
    std::map<std::string, Entry, std::less<>> index_;
    std::vector<std::string> duplicates_;

    void index(const std::string& name, EntityKind kind, std::size_t i)
    {
        if (!index_.emplace(name, Entry{kind, i}).second) {
            duplicates_.push_back(name);
        }
    }
};

enum class DefectKind {
    duplicate_name,
    unknown_reference,
    flow_reference,
    unknown_flow_endpoint,
    cycle,
    unit_mismatch,
    non_finite_initial,
};

struct Defect {
    DefectKind kind;
    std::string entity; ///< the entity where the defect was found
    std::vector<std::string> names; ///< offending names (cycle path, missing reference, ...)
    std::string message;
};

using ValidationReport = std::vector<Defect>;

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(ValidationReport report)
        : std::runtime_error(summarize(report)), report_(std::move(report))
    {
    }
    const ValidationReport& report() const noexcept { return report_; }

  private:
    ValidationReport report_;

    static std::string summarize(const ValidationReport& r)
    {
        std::string s = "model validation failed:";
        for (const auto& d : r) {
            s += "\n  " + d.message;
        }
        return s;
    }
};

namespace detail {

struct AuxGraph {
    std::vector<std::vector<std::size_t>> deps; ///< aux index -> aux indices it reads
};

inline AuxGraph aux_graph(const ModelDef& m)
{
    AuxGraph g;
    g.deps.resize(m.auxiliaries().size());
    for (std::size_t i = 0; i < m.auxiliaries().size(); ++i) {
        for_each_reference(m.auxiliaries()[i].expr, [&](const Expr& r) {
            const auto e = m.find(r.name);
            if (e && e->kind == EntityKind::auxiliary) {
                g.deps[i].push_back(e->index);
            }
        });
    }
    return g;
}

/// Every distinct cycle reached by a depth-first walk, as a list of names.
inline std::vector<std::vector<std::string>> find_cycles(const ModelDef& m, const AuxGraph& g)
{
    enum class Mark { white, grey, black };
    std::vector<Mark> mark(g.deps.size(), Mark::white);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::string>> cycles;

    auto visit = [&](auto&& self, std::size_t v) -> void {
        mark[v] = Mark::grey;
        stack.push_back(v);
        for (std::size_t w : g.deps[v]) {
            if (mark[w] == Mark::grey) {
                std::vector<std::string> path;
                auto it = std::find(stack.begin(), stack.end(), w);
                for (; it != stack.end(); ++it) {
                    path.push_back(m.auxiliaries()[*it].name);
                }
                cycles.push_back(std::move(path));
            }
            else if (mark[w] == Mark::white) {
                self(self, w);
            }
        }
        stack.pop_back();
        mark[v] = Mark::black;
    };
    for (std::size_t v = 0; v < g.deps.size(); ++v) {
        if (mark[v] == Mark::white) {
            visit(visit, v);
        }
    }
    return cycles;
}

} // namespace detail

inline ValidationReport validate_model(const ModelDef& m)
{
    ValidationReport report;

    for (const auto& name : m.duplicates()) {
        report.push_back({DefectKind::duplicate_name, name, {name}, "duplicate name '" + name + "'"});
    }

    auto check_refs = [&](const std::string& owner, const Expr& expr) {
        for (const auto& ref : referenced_names(expr)) {
            const auto e = m.find(ref);
            if (!e) {
                report.push_back({DefectKind::unknown_reference, owner, {ref},
                                  "'" + owner + "' references undeclared '" + ref + "'"});
            }
            else if (e->kind == EntityKind::flow) {
                report.push_back({DefectKind::flow_reference, owner, {ref},
                                  "'" + owner + "' references flow '" + ref +
                                      "'; flows may not be read by other entities"});
            }
        }
    };
    for (const auto& a : m.auxiliaries()) {
        check_refs(a.name, a.expr);
    }
    for (const auto& f : m.flows()) {
        check_refs(f.name, f.expr);
        if (f.unit != Unit::persons_per_day) {
            report.push_back({DefectKind::unit_mismatch, f.name, {f.name},
                              "flow '" + f.name + "' has unit " + std::string(unit_name(f.unit)) +
                                  ", expected persons/day"});
        }
    }

    for (const auto& s : m.stocks()) {
        if (!std::isfinite(s.initial)) {
            report.push_back({DefectKind::non_finite_initial, s.name, {s.name},
                              "stock '" + s.name + "' has a non-finite initial value"});
        }
        auto check_endpoint = [&](const std::string& flow) {
            const auto e = m.find(flow);
            if (!e || e->kind != EntityKind::flow) {
                report.push_back({DefectKind::unknown_flow_endpoint, s.name, {flow},
                                  "stock '" + s.name + "' lists unknown flow '" + flow + "'"});
            }
        };
        for (const auto& f : s.inflows) {
            check_endpoint(f);
        }
        for (const auto& f : s.outflows) {
            check_endpoint(f);
        }
    }

    for (auto& cycle : detail::find_cycles(m, detail::aux_graph(m))) {
        std::string msg = "auxiliary cycle: ";
        for (const auto& n : cycle) {
            msg += n + " -> ";
        }
        msg += cycle.front();
        report.push_back({DefectKind::cycle, cycle.front(), std::move(cycle), std::move(msg)});
    }
    return report;
}

/// Auxiliary indices in dependency order; ties keep declaration order.
inline std::vector<std::size_t> topological_order(const ModelDef& m)
{
    const auto g = detail::aux_graph(m);
    const std::size_t n = g.deps.size();
    std::vector<std::size_t> pending(n, 0);
    std::vector<std::vector<std::size_t>> users(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t w : g.deps[v]) {
            ++pending[v];
            users[w].push_back(v);
        }
    }
    std::vector<std::size_t> order;
    std::vector<bool> done(n, false);
    // Repeated scans keep the result independent of anything but declaration order.
    while (order.size() < n) {
        bool progressed = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (!done[v] && pending[v] == 0) {
                done[v] = true;
                order.push_back(v);
                for (std::size_t u : users[v]) {
                    --pending[u];
                }
                progressed = true;
            }
        }
        if (!progressed) {
            throw ValidationError(validate_model(m));
        }
    }
    return order;
}

} // namespace npisim::engine
