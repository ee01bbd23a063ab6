#pragma once

#include "epiwave/date.hpp"
#include "epiwave/errors.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace epiwave {

struct CountTag {
    static constexpr bool allow_negative = false;
    static constexpr const char* name = "daily count series";
};

struct ExcessTag {
    static constexpr bool allow_negative = true;
    static constexpr const char* name = "excess series";
};

/// A gap-free run of per-day values starting at a calendar day.
///
/// Storage is a start date plus one value per consecutive day, so the
/// strictly-increasing, gap-free date invariant holds by construction.
/// Count series additionally reject negative values; excess series keep them.
template <class Tag>
class DatedSeries {
public:
    DatedSeries() = default;

    DatedSeries(Date start, std::vector<double> values) : start_(start), values_(std::move(values))
    {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double v = values_[i];
            if (!std::isfinite(v)) {
                throw InvariantError(std::string(Tag::name) + ": non-finite value on " + format_date(date_at(i)));
            }
            if (!Tag::allow_negative && v < 0.0) {
                throw InvariantError(std::string(Tag::name) + ": negative value on " + format_date(date_at(i)));
            }
        }
    }

    /// Reinterprets another series kind, re-checking this kind's invariants.
    template <class Other>
    static DatedSeries from(const DatedSeries<Other>& other)
    {
        return DatedSeries(other.start(), std::vector<double>(other.values().begin(), other.values().end()));
    }

    Date start() const { return start_; }
    /// Last date; only meaningful for non-empty series.
    Date last() const { return start_ + std::chrono::days{static_cast<long>(values_.size()) - 1}; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    Date date_at(std::size_t i) const { return start_ + std::chrono::days{static_cast<long>(i)}; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const& { return values_; }
    std::span<const double> values() const&& = delete; // would dangle

    bool contains(Date d) const { return !empty() && d >= start_ && d <= last(); }

    std::optional<std::size_t> index_of(Date d) const
    {
        if (!contains(d)) return std::nullopt;
        return static_cast<std::size_t>(days_between(start_, d));
    }

    double at(Date d) const
    {
        auto i = index_of(d);
        if (!i) throw InvariantError(std::string(Tag::name) + ": no value on " + format_date(d));
        return values_[*i];
    }

    /// Inclusive sub-range [from, to]. Both ends must lie within the series.
    DatedSeries slice(Date from, Date to) const
    {
        if (to < from || !contains(from) || !contains(to)) {
            throw InvariantError(std::string(Tag::name) + ": slice [" + format_date(from) + ", " + format_date(to) +
                                 "] outside series range");
        }
        const auto b = static_cast<std::ptrdiff_t>(*index_of(from));
        const auto e = static_cast<std::ptrdiff_t>(*index_of(to)) + 1;
        return DatedSeries(from, std::vector<double>(values_.begin() + b, values_.begin() + e));
    }

    friend bool operator==(const DatedSeries&, const DatedSeries&) = default;

private:
    Date start_{};
    std::vector<double> values_;
};

using DailyCountSeries = DatedSeries<CountTag>;
using ExcessSeries = DatedSeries<ExcessTag>;

} // namespace epiwave
