#pragma once

#include "npisim/calendar.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace npisim::metrics {

class DataError : public std::runtime_error {
  public:
    DataError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }
    /// 1-based input line, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

enum class Normalization { raw, relative_to_baseline, relative_to_prior_year };

inline std::string_view normalization_name(Normalization n)
{
    switch (n) {
    case Normalization::raw: return "raw";
    case Normalization::relative_to_baseline: return "relative-to-baseline";
    case Normalization::relative_to_prior_year: return "relative-to-prior-year";
    }
    return "?";
}

struct Observation {
    Date date;
    double value;
};

struct ObservedSeries {
    std::string metric;
    std::vector<Observation> records;
    Normalization mode = Normalization::raw;
    /// Divisor applied to each record by normalize(); empty in raw mode.
    std::vector<double> reference;

    std::vector<double> values() const
    {
        std::vector<double> v;
        v.reserve(records.size());
        for (const auto& r : records) {
            v.push_back(r.value);
        }
        return v;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const auto comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) {
            return out;
        }
        pos = comma + 1;
    }
}

} // namespace detail

/// Reads a `date,<column>` CSV. Lines starting with '#' and blank lines are
/// skipped; extra columns are allowed, so simulation output re-parses by
/// naming the wanted column. Dates must be strictly increasing.
inline ObservedSeries ingest_observed(std::string_view text, std::string_view column = "value",
                                      std::string metric = {})
{
    ObservedSeries series;
    series.metric = metric.empty() ? std::string(column) : std::move(metric);

    std::size_t date_col = 0;
    std::size_t value_col = 0;
    std::size_t width = 0;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        pos = 3;
    }
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto fields = detail::split(line);
        if (!have_header) {
            bool found_date = false;
            bool found_value = false;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == "date" && !found_date) {
                    date_col = i;
                    found_date = true;
                }
                else if (fields[i] == column && !found_value) {
                    value_col = i;
                    found_value = true;
                }
            }
            if (!found_date || !found_value) {
                throw DataError("header must contain 'date' and '" + std::string(column) + "' columns", line_no);
            }
            width = fields.size();
            have_header = true;
            continue;
        }
        if (fields.size() != width) {
            throw DataError("expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()),
                            line_no);
        }
        Date date;
        try {
            date = parse_iso_date(fields[date_col]);
        }
        catch (const DateError& e) {
            throw DataError(e.what(), line_no);
        }
        const std::string value_text(fields[value_col]);
        char* end = nullptr;
        const double value = std::strtod(value_text.c_str(), &end);
        if (value_text.empty() || end != value_text.c_str() + value_text.size() || !std::isfinite(value)) {
            throw DataError("malformed value '" + value_text + "'", line_no);
        }
        if (!series.records.empty()) {
            const Date prev = series.records.back().date;
            if (date == prev) {
                throw DataError("duplicate date " + format_iso_date(date), line_no);
            }
            if (date < prev) {
                throw DataError("date " + format_iso_date(date) + " is out of order (after " +
                                    format_iso_date(prev) + ")",
                                line_no);
            }
        }
        series.records.push_back({date, value});
    }
    if (!have_header) {
        throw DataError("missing header 'date," + std::string(column) + "'", 0);
    }
    return series;
}

/// Either a constant baseline or the prior year's series.
using NormalizationReference = std::variant<double, ObservedSeries>;

/// Divides each value by its reference. Baseline mode takes a positive
/// constant; prior-year mode looks up the same calendar day one year earlier.
inline ObservedSeries normalize(const ObservedSeries& s, Normalization mode, const NormalizationReference& ref = 1.0)
{
    if (s.mode != Normalization::raw) {
        throw DataError("series '" + s.metric + "' is already normalized", 0);
    }
    ObservedSeries out = s;
    out.mode = mode;
    if (mode == Normalization::raw) {
        return out;
    }
    out.reference.reserve(s.records.size());

    if (mode == Normalization::relative_to_baseline) {
        const double* baseline = std::get_if<double>(&ref);
        if (!baseline) {
            throw std::invalid_argument("baseline normalization needs a numeric reference");
        }
        if (!(*baseline > 0.0) || !std::isfinite(*baseline)) {
            throw DataError("baseline reference must be a positive number", 0);
        }
        for (auto& r : out.records) {
            r.value /= *baseline;
            out.reference.push_back(*baseline);
        }
        return out;
    }

    const ObservedSeries* prior = std::get_if<ObservedSeries>(&ref);
    if (!prior) {
        throw std::invalid_argument("prior-year normalization needs a reference series");
    }
    for (auto& r : out.records) {
        const Date target{r.date.year() - std::chrono::years{1}, r.date.month(), r.date.day()};
        const Observation* match = nullptr;
        if (target.ok()) {
            for (const auto& p : prior->records) {
                if (p.date == target) {
                    match = &p;
                    break;
                }
            }
        }
        if (!match) {
            throw DataError("no prior-year value for " + format_iso_date(r.date), 0);
        }
        if (match->value == 0.0) {
            throw DataError("prior-year value for " + format_iso_date(r.date) + " is zero", 0);
        }
        r.value /= match->value;
        out.reference.push_back(match->value);
    }
    return out;
}

/// Inverse of normalize(): multiplies the references back in.
inline ObservedSeries denormalize(const ObservedSeries& s)
{
    ObservedSeries out = s;
    if (s.mode != Normalization::raw) {
        for (std::size_t i = 0; i < out.records.size(); ++i) {
            out.records[i].value *= s.reference[i];
        }
    }
    out.mode = Normalization::raw;
    out.reference.clear();
    return out;
}

} // namespace npisim::metrics
