#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epiwave {

/// Positive root of r_f + exp(-r0 r_f) = 1 and its residual.
struct FinalSizeResult {
    double r0 = 0.0;
    double r_f = 0.0;
    double residual = 0.0;
};

/// Final epidemic size for a basic reproduction number.
/// r0 <= 1 yields 0; otherwise bisection on [1e-9, 1] down to a 1e-12 bracket.
/// Throws InvariantError for negative or non-finite r0.
FinalSizeResult solve_final_size(double r0);

/// `points` evenly spaced r0 values over [r0_min, r0_max].
std::vector<FinalSizeResult> final_size_curve(double r0_min, double r0_max, int points);

struct HerdImmunityRow {
    std::string label;
    double r0 = 0.0;
};

/// `r0,r_f` rows.
void write_final_size_csv(std::ostream& out, const std::vector<FinalSizeResult>& curve);

/// `wave,r0,r_f_pct` rows, r_f as a percentage with one decimal.
void write_herd_immunity_table(std::ostream& out, const std::vector<HerdImmunityRow>& rows);

} // namespace epiwave
