#pragma once

#include "epiwave/series.hpp"

#include <vector>

namespace epiwave {

/// One epidemic wave. Day counts are date differences:
/// rise = peak - start, fall = end - peak. Deaths on the peak day belong to
/// the falling half, so deaths_to_peak sums [start, peak) and
/// deaths_after_peak sums [peak, end].
struct WaveSegment {
    Date start_date{};
    Date peak_date{};
    Date end_date{};
    int rise_days = 0;
    int fall_days = 0;
    int total_days = 0;
    double deaths_to_peak = 0.0;
    double deaths_after_peak = 0.0;
    double total_deaths = 0.0;

    friend bool operator==(const WaveSegment&, const WaveSegment&) = default;
};

struct SegmentationConfig {
    double start_threshold = 10.0; ///< deaths/day
    double end_threshold = 10.0;   ///< deaths/day
    int min_persistence_days = 3;
    int min_wave_days = 21;

    void validate() const;
};

/// Threshold segmentation of an excess series.
///
/// A wave opens on the first day of a run of at least `min_persistence_days`
/// values above `start_threshold` and closes when a run of the same length
/// falls below `end_threshold` (or the series ends). Its end date is the last
/// day before that closing run whose value exceeds `end_threshold`. The peak is
/// the earliest maximum in [start, end]. Waves with fewer than `min_wave_days`
/// total days are dropped.
std::vector<WaveSegment> segment_waves(const ExcessSeries& excess, const SegmentationConfig& config = {});

/// Recomputes day counts and death totals (daily values floored at 0) from
/// the series. Throws InvariantError when the segment lies outside the series.
WaveSegment wave_summary(const WaveSegment& segment, const ExcessSeries& excess);

/// Floors the segment's daily values at zero, yielding the observed curve used for fitting.
DailyCountSeries wave_deaths(const WaveSegment& segment, const ExcessSeries& excess);

} // namespace epiwave
