#pragma once

#include "epiwave/epidemic.hpp"
#include "epiwave/series.hpp"
#include "epiwave/waves.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace epiwave {

enum class FitMetric {
    nrmse_peak, ///< 100 * RMSE(model, observed) / max(observed)
    cum_mape,   ///< 100 * mean(|cum_model - cum_obs| / cum_obs) over days with cum_obs > 0
};

std::string_view to_string(FitMetric metric);
/// Accepts "nrmse-peak" and "cum-mape"; throws ParseError otherwise.
FitMetric parse_metric(std::string_view text);

/// Evenly spaced values from min to max inclusive; a single step yields min.
struct AxisRange {
    double min = 0.0;
    double max = 0.0;
    int steps = 1;

    double value(int i) const;
    void validate(std::string_view axis) const;
};

struct GridSpec {
    AxisRange beta;
    AxisRange eta;
    AxisRange epsilon;

    /// beta in [0.15, 0.35] x 200, eta in [0.05, 0.20] x 150, epsilon in {2, 2.5, ..., 5}.
    static GridSpec default_grid();
    std::size_t cells() const;
    void validate() const;
};

struct FitOptions {
    double seed = kDefaultSeed;
    double step = kDefaultStep;
    unsigned threads = 0;            ///< 0 = hardware concurrency
    int max_horizon_days = 3650;     ///< integration cut-off for very slow epidemics
};

struct FitResult {
    double error_pct = 0.0;
    double kappa = 0.0;
};

struct FitCandidate {
    SeirParams params;
    double kappa = 0.0;
    double r0 = 0.0;
    double error_pct = 0.0;

    friend bool operator==(const FitCandidate&, const FitCandidate&) = default;
};

struct ErrorScanPoint {
    double value = 0.0;
    double min_error_pct = 0.0;
};

struct FitReport {
    std::vector<FitCandidate> candidates; ///< ascending error, ties by (beta, eta, epsilon)
    std::optional<WaveSegment> observed_wave;
    GridSpec grid;
    FitMetric metric = FitMetric::nrmse_peak;
    /// Lowest error reached for each value of one axis (minimised over the others).
    std::vector<ErrorScanPoint> beta_scan;
    std::vector<ErrorScanPoint> eta_scan;
    std::vector<ErrorScanPoint> epsilon_scan;
};

/// Unscaled model daily deaths (daily increments of R) aligned to an
/// observed window of `length` days whose peak sits at `observed_peak`.
/// The model is integrated from the seeded state and shifted so that its
/// earliest daily maximum lands on `observed_peak`; days before the model
/// start contribute zero.
std::vector<double> aligned_model_curve(const SeirParams& params, std::size_t length, std::size_t observed_peak,
                                        const FitOptions& options = {});

/// Error of `params` against an observed wave with kappa profiled out so that
/// model and observed totals agree. Throws InvariantError for all-zero or
/// shorter-than-14-day observations.
FitResult fit_error(const SeirParams& params, const DailyCountSeries& observed, FitMetric metric = FitMetric::nrmse_peak,
                    const FitOptions& options = {});

/// kappa-scaled aligned model curve on the observed dates.
DailyCountSeries fitted_curve(const SeirParams& params, const DailyCountSeries& observed,
                              const FitOptions& options = {});

/// Orders candidates by error, then beta, eta, epsilon.
bool candidate_less(const FitCandidate& a, const FitCandidate& b);
void rank_candidates(std::vector<FitCandidate>& candidates);

/// Exhaustive search over every grid cell; keeps the `top_k` best.
/// Cells are evaluated concurrently and ranked afterwards, so the result does
/// not depend on the thread count.
FitReport grid_search(const DailyCountSeries& observed, const GridSpec& grid, FitMetric metric, std::size_t top_k,
                      const FitOptions& options = {});

/// Mean beta, eta, epsilon, kappa and error over the n best candidates;
/// r0 is mean beta / mean eta.
FitCandidate average_top_candidates(const FitReport& report, std::size_t n);

void write_fit_report_csv(std::ostream& out, const FitReport& report);
std::vector<FitCandidate> read_fit_report_csv(std::istream& in, const std::string& source = "<stream>");
void write_error_scan_csv(std::ostream& out, const std::vector<ErrorScanPoint>& scan);

} // namespace epiwave
