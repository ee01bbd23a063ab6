#include "epiwave/finalsize.hpp"

#include "epiwave/errors.hpp"
#include "epiwave/series_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace epiwave {

namespace {

double final_size_residual(double r0, double r) { return r + std::exp(-r0 * r) - 1.0; }

} // namespace

FinalSizeResult solve_final_size(double r0)
{
    if (!std::isfinite(r0) || r0 < 0.0) throw InvariantError("solve_final_size: r0 must be finite and >= 0");
    FinalSizeResult res{r0, 0.0, 0.0};
    if (r0 <= 1.0) return res;

    double lo = 1e-9;
    double hi = 1.0;
    // Just above threshold the positive root can sit below the bracket.
    if (final_size_residual(r0, lo) >= 0.0) {
        res.residual = final_size_residual(r0, 0.0);
        return res;
    }
    while (hi - lo >= 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (final_size_residual(r0, mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    res.r_f = 0.5 * (lo + hi);
    res.residual = final_size_residual(r0, res.r_f);
    return res;
}

std::vector<FinalSizeResult> final_size_curve(double r0_min, double r0_max, int points)
{
    if (!(r0_min >= 0.0) || !(r0_min < r0_max) || !std::isfinite(r0_max)) {
        throw InvariantError("final_size_curve: need 0 <= r0_min < r0_max");
    }
    if (points < 2) throw InvariantError("final_size_curve: points must be >= 2");
    std::vector<FinalSizeResult> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double r0 = i == points - 1 ? r0_max : r0_min + (r0_max - r0_min) * i / (points - 1);
        out.push_back(solve_final_size(r0));
    }
    return out;
}

void write_final_size_csv(std::ostream& out, const std::vector<FinalSizeResult>& curve)
{
    out << "r0,r_f\n";
    for (const auto& r : curve) out << format_number(r.r0) << ',' << format_number(r.r_f) << '\n';
}

void write_herd_immunity_table(std::ostream& out, const std::vector<HerdImmunityRow>& rows)
{
    out << "wave,r0,r_f_pct\n";
    char buf[32];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.1f", 100.0 * solve_final_size(row.r0).r_f);
        out << row.label << ',' << format_number(row.r0) << ',' << buf << '\n';
    }
}

} // namespace epiwave
