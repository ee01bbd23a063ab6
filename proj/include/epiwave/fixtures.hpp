#pragma once

#include "epiwave/epidemic.hpp"
#include "epiwave/mortality.hpp"

#include <string_view>
#include <vector>

namespace epiwave {

/// Noiseless SEIR mortality wave: kappa-scaled daily removals from the seeded
/// state, cut to the contiguous days around the peak that reach at least
/// `cutoff_fraction` of the peak value.
DailyCountSeries synthetic_wave(const SeirParams& params, double kappa, Date start, double cutoff_fraction = 0.05,
                                double seed = kDefaultSeed, double step = kDefaultStep);

/// Symmetric triangle 0 -> peak -> 0 over 2 * half_width + 1 days, padded
/// with `padding` zero days on both sides.
ExcessSeries triangle_excess(Date start, int half_width = 20, double peak = 100.0, int padding = 10);

struct MortalityFixture {
    DailyCountSeries reported;               ///< 2020-01-01 .. 2021-12-31
    std::vector<DailyCountSeries> histories; ///< 2019, 2018, ..., 2015
    BaselineWeights weights = BaselineWeights::five_year_default();
};

/// Synthetic registry with four epidemic waves (spring and winter 2020,
/// spring and late summer 2021) on top of a seasonal baseline. Counts are
/// integers with deterministic noise.
MortalityFixture synthetic_istanbul();

/// Looks a fixture up by name; only "synthetic-istanbul" exists.
MortalityFixture fixture_by_name(std::string_view name);

} // namespace epiwave
