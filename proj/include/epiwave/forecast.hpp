#pragma once

#include "epiwave/calibration.hpp"

#include <iosfwd>
#include <span>

namespace epiwave {

struct BandAssumption {
    SeirParams params;
    double kappa = 0.0;
    double r0 = 0.0;
};

/// Next-wave daily deaths with an envelope built from prior waves' fits.
struct ForecastBand {
    DailyCountSeries central;
    DailyCountSeries lower;
    DailyCountSeries upper;
    BandAssumption central_assumption;
    BandAssumption lower_assumption; ///< min beta, max eta (lowest r0 corner)
    BandAssumption upper_assumption; ///< max beta, min eta (highest r0 corner)
    bool repaired = false;           ///< pointwise min/max repair was applied
};

struct ForecastOptions {
    double seed = kDefaultSeed;
    double step = kDefaultStep;
};

/// Integrates the mean prior parameters and the two r0 corners from the
/// seeded state at `start_date` over `horizon_days`. All bands share the mean
/// epsilon and kappa. Where the corner curves cross the central one, lower
/// and upper become the pointwise min and max of the three curves.
ForecastBand predict_wave(std::span<const FitCandidate> priors, Date start_date, int horizon_days,
                          const ForecastOptions& options = {});

/// `date,lower,central,upper` rows.
void write_forecast_csv(std::ostream& out, const ForecastBand& band);

} // namespace epiwave
