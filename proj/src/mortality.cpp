#include "epiwave/mortality.hpp"

#include "epiwave/series_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace epiwave {

using namespace std::chrono;

BaselineWeights::BaselineWeights(std::vector<Entry> entries) : entries_(std::move(entries))
{
    if (entries_.empty()) throw InvariantError("baseline weights: empty");
    std::set<int> offsets;
    double sum = 0.0;
    for (const auto& e : entries_) {
        if (e.year_offset < 1) throw InvariantError("baseline weights: year offset must be >= 1");
        if (!offsets.insert(e.year_offset).second) throw InvariantError("baseline weights: duplicate year offset");
        if (!(e.weight >= 0.0 && e.weight <= 1.0)) throw InvariantError("baseline weights: weight outside [0,1]");
        sum += e.weight;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw InvariantError("baseline weights: sum " + format_number(sum) + " differs from 1");
    }
}

BaselineWeights BaselineWeights::five_year_default()
{
    return BaselineWeights({{1, 0.40}, {2, 0.30}, {3, 0.20}, {4, 0.05}, {5, 0.05}});
}

BaselineWeights BaselineWeights::parse(std::string_view text)
{
    std::vector<Entry> entries;
    int offset = 1;
    while (true) {
        const auto comma = text.find(',');
        const auto field = text.substr(0, comma);
        const auto v = parse_number(field);
        if (!v) throw ParseError("baseline weights: invalid number '" + std::string(field) + "'");
        entries.push_back({offset++, *v});
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return BaselineWeights(std::move(entries));
}

namespace {

// First calendar year fully covered by the series, if any.
std::optional<int> first_full_year(const DailyCountSeries& s)
{
    if (s.empty()) return std::nullopt;
    const year_month_day first{s.start()};
    int y = static_cast<int>(first.year());
    if (first.month() != January || first.day() != day{1}) ++y;
    const Date dec31 = year{y} / December / 31;
    if (!s.contains(sys_days{year{y} / January / 1}) || !s.contains(dec31)) return std::nullopt;
    return y;
}

double history_value(const DailyCountSeries& h, int hist_year, month m, day d)
{
    const year_month_day ymd{year{hist_year}, m, d};
    if (ymd.ok()) return h.at(sys_days{ymd});
    // Feb 29 requested from a non-leap history year.
    const double feb28 = h.at(sys_days{year{hist_year} / February / 28});
    const double mar1 = h.at(sys_days{year{hist_year} / March / 1});
    return 0.5 * (feb28 + mar1);
}

} // namespace

DailyCountSeries expected_deaths(std::span<const DailyCountSeries> histories, const BaselineWeights& weights,
                                 int target_year)
{
    if (histories.size() != weights.size()) {
        throw InvariantError("expected_deaths: " + std::to_string(histories.size()) + " histories for " +
                             std::to_string(weights.size()) + " weights");
    }
    std::vector<int> years;
    for (std::size_t k = 0; k < histories.size(); ++k) {
        const auto y = first_full_year(histories[k]);
        if (!y) throw InvariantError("expected_deaths: history " + std::to_string(k + 1) + " misses required month-days");
        years.push_back(*y);
    }

    const Date first = year{target_year} / January / 1;
    const Date last = year{target_year} / December / 31;
    std::vector<double> out;
    out.reserve(366);
    for (Date d = first; d <= last; d += days{1}) {
        const year_month_day ymd{d};
        double v = 0.0;
        for (std::size_t k = 0; k < histories.size(); ++k) {
            v += weights.entries()[k].weight * history_value(histories[k], years[k], ymd.month(), ymd.day());
        }
        out.push_back(v);
    }
    return DailyCountSeries(first, std::move(out));
}

DailyCountSeries expected_deaths_range(std::span<const DailyCountSeries> histories, const BaselineWeights& weights,
                                       Date from, Date to)
{
    if (to < from) throw InvariantError("expected_deaths_range: empty range");
    const int y0 = static_cast<int>(year_month_day{from}.year());
    const int y1 = static_cast<int>(year_month_day{to}.year());
    std::vector<double> values;
    for (int y = y0; y <= y1; ++y) {
        const auto year_series = expected_deaths(histories, weights, y);
        values.insert(values.end(), year_series.values().begin(), year_series.values().end());
    }
    return DailyCountSeries(year{y0} / January / 1, std::move(values)).slice(from, to);
}

ExcessSeries excess_mortality(const DailyCountSeries& reported, const DailyCountSeries& expected)
{
    if (reported.empty() || expected.empty()) throw InvariantError("excess_mortality: empty input");
    const Date from = std::max(reported.start(), expected.start());
    const Date to = std::min(reported.last(), expected.last());
    if (to < from) throw InvariantError("excess_mortality: reported and expected ranges do not overlap");
    std::vector<double> out;
    for (Date d = from; d <= to; d += days{1}) out.push_back(reported.at(d) - expected.at(d));
    return ExcessSeries(from, std::move(out));
}

std::vector<DailyCountSeries> split_calendar_years(const DailyCountSeries& s)
{
    std::vector<DailyCountSeries> years;
    if (s.empty()) return years;
    const int y0 = static_cast<int>(year_month_day{s.start()}.year());
    const int y1 = static_cast<int>(year_month_day{s.last()}.year());
    for (int y = y1; y >= y0; --y) {
        const Date jan1 = year{y} / January / 1;
        const Date dec31 = year{y} / December / 31;
        if (s.contains(jan1) && s.contains(dec31)) years.push_back(s.slice(jan1, dec31));
    }
    return years;
}

ExcessSeries compute_excess(const DailyCountSeries& reported, std::span<const DailyCountSeries> histories,
                            const BaselineWeights& weights, SmoothingOrder order)
{
    if (reported.size() < 7) throw InvariantError("compute_excess: reported series shorter than 7 days");
    const auto expected = expected_deaths_range(histories, weights, reported.start(), reported.last());
    if (order == SmoothingOrder::smooth_then_subtract) {
        return excess_mortality(trailing_average_7(reported), trailing_average_7(expected));
    }
    return trailing_average_7(excess_mortality(reported, expected));
}

} // namespace epiwave
