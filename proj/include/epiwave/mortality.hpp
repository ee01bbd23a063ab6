#pragma once

#include "epiwave/series.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace epiwave {

/// Weighted combination of previous years used as the expected-deaths baseline.
class BaselineWeights {
public:
    struct Entry {
        int year_offset; ///< 1 = most recent history year
        double weight;
    };

    /// Throws InvariantError unless weights lie in [0,1], sum to 1 within
    /// 1e-12 and year offsets are distinct and >= 1.
    explicit BaselineWeights(std::vector<Entry> entries);

    /// 40/30/20/5/5 over the five most recent years.
    static BaselineWeights five_year_default();

    /// Comma separated weights, most recent year first ("0.4,0.3,0.2,0.05,0.05").
    static BaselineWeights parse(std::string_view text);

    std::span<const Entry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<Entry> entries_;
};

/// Trailing seven-day mean: out[i] = (s[i] + ... + s[i-6]) / 7.
/// The output starts six days after the input; no partial windows.
template <class Tag>
DatedSeries<Tag> trailing_average_7(const DatedSeries<Tag>& s)
{
    constexpr std::size_t window = 7;
    if (s.size() < window) throw InvariantError("trailing_average_7: series shorter than 7 days");
    std::vector<double> out(s.size() - (window - 1));
    for (std::size_t i = window - 1; i < s.size(); ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < window; ++k) sum += s[i - k];
        out[i - (window - 1)] = sum / static_cast<double>(window);
    }
    return DatedSeries<Tag>(s.date_at(window - 1), std::move(out));
}

/// Expected deaths for every day of `target_year`.
///
/// History k is paired with weight entry k. Each history must cover a full
/// calendar year and is aligned to the target by (month, day). A target
/// Feb 29 takes the mean of a non-leap history's Feb 28 and Mar 1; a history
/// Feb 29 is ignored for non-leap targets.
DailyCountSeries expected_deaths(std::span<const DailyCountSeries> histories, const BaselineWeights& weights,
                                 int target_year);

/// Expected deaths over an arbitrary inclusive date range, year by year.
DailyCountSeries expected_deaths_range(std::span<const DailyCountSeries> histories, const BaselineWeights& weights,
                                       Date from, Date to);

/// reported - expected on the overlapping dates. Negative values are kept.
ExcessSeries excess_mortality(const DailyCountSeries& reported, const DailyCountSeries& expected);

/// Splits a multi-year series into its complete calendar years, most recent first.
std::vector<DailyCountSeries> split_calendar_years(const DailyCountSeries& s);

enum class SmoothingOrder {
    smooth_then_subtract, ///< smooth reported and baseline, then subtract
    subtract_then_smooth, ///< subtract raw series, then smooth the excess
};

/// Full baselining pipeline: baseline over the reported range, seven-day
/// trailing smoothing and subtraction. The result starts six days after
/// `reported` regardless of the order.
ExcessSeries compute_excess(const DailyCountSeries& reported, std::span<const DailyCountSeries> histories,
                            const BaselineWeights& weights,
                            SmoothingOrder order = SmoothingOrder::smooth_then_subtract);

} // namespace epiwave
