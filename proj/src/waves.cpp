#include "epiwave/waves.hpp"

#include <algorithm>
#include <optional>

namespace epiwave {

void SegmentationConfig::validate() const
{
    if (!(start_threshold >= 0.0) || !(end_threshold >= 0.0)) throw InvariantError("segmentation: negative threshold");
    if (end_threshold > start_threshold) throw InvariantError("segmentation: end_threshold exceeds start_threshold");
    if (min_persistence_days < 1) throw InvariantError("segmentation: min_persistence_days must be >= 1");
    if (min_wave_days < 1) throw InvariantError("segmentation: min_wave_days must be >= 1");
}

namespace {

// True when values[i .. i+len) all satisfy pred, or the run reaches the end of
// the series and `allow_truncated` is set.
template <class Pred>
bool run_holds(std::span<const double> values, std::size_t i, int len, bool allow_truncated, Pred pred)
{
    std::size_t k = 0;
    for (; k < static_cast<std::size_t>(len) && i + k < values.size(); ++k) {
        if (!pred(values[i + k])) return false;
    }
    return k == static_cast<std::size_t>(len) || allow_truncated;
}

} // namespace

std::vector<WaveSegment> segment_waves(const ExcessSeries& excess, const SegmentationConfig& config)
{
    config.validate();
    if (excess.empty()) throw InvariantError("segment_waves: empty series");
    const auto v = excess.values();
    const std::size_t n = v.size();
    const int persist = config.min_persistence_days;
    auto above_start = [&](double x) { return x > config.start_threshold; };
    auto above_end = [&](double x) { return x > config.end_threshold; };
    auto below_end = [&](double x) { return x < config.end_threshold; };

    std::vector<WaveSegment> waves;
    std::size_t i = 0;
    while (i < n) {
        if (!run_holds(v, i, persist, false, above_start)) {
            ++i;
            continue;
        }
        const std::size_t open = i;
        // Closing run: first index > open starting a run below end_threshold.
        std::size_t close = n;
        for (std::size_t j = open + 1; j < n; ++j) {
            if (run_holds(v, j, persist, true, below_end)) {
                close = j;
                break;
            }
        }
        std::size_t last = close - 1;
        while (last > open && !above_end(v[last])) --last;

        std::size_t peak = open;
        for (std::size_t k = open + 1; k <= last; ++k) {
            if (v[k] > v[peak]) peak = k;
        }

        WaveSegment w;
        w.start_date = excess.date_at(open);
        w.peak_date = excess.date_at(peak);
        w.end_date = excess.date_at(last);
        w = wave_summary(w, excess);
        if (w.total_days >= config.min_wave_days) waves.push_back(w);
        i = close;
    }
    return waves;
}

WaveSegment wave_summary(const WaveSegment& segment, const ExcessSeries& excess)
{
    if (!excess.contains(segment.start_date) || !excess.contains(segment.end_date) ||
        !excess.contains(segment.peak_date)) {
        throw InvariantError("wave_summary: segment outside series range");
    }
    if (segment.peak_date < segment.start_date || segment.end_date < segment.peak_date) {
        throw InvariantError("wave_summary: dates not ordered start <= peak <= end");
    }
    WaveSegment w = segment;
    w.rise_days = days_between(w.start_date, w.peak_date);
    w.fall_days = days_between(w.peak_date, w.end_date);
    w.total_days = w.rise_days + w.fall_days;

    const std::size_t s = *excess.index_of(w.start_date);
    const std::size_t p = *excess.index_of(w.peak_date);
    const std::size_t e = *excess.index_of(w.end_date);
    w.deaths_to_peak = 0.0;
    w.deaths_after_peak = 0.0;
    for (std::size_t k = s; k < p; ++k) w.deaths_to_peak += std::max(excess[k], 0.0);
    for (std::size_t k = p; k <= e; ++k) w.deaths_after_peak += std::max(excess[k], 0.0);
    w.total_deaths = w.deaths_to_peak + w.deaths_after_peak;
    return w;
}

DailyCountSeries wave_deaths(const WaveSegment& segment, const ExcessSeries& excess)
{
    const auto slice = excess.slice(segment.start_date, segment.end_date);
    std::vector<double> out(slice.values().begin(), slice.values().end());
    for (auto& x : out) x = std::max(x, 0.0);
    return DailyCountSeries(segment.start_date, std::move(out));
}

} // namespace epiwave
