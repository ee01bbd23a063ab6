#include "epiwave/forecast.hpp"

#include "epiwave/series_io.hpp"

#include <algorithm>
#include <ostream>

namespace epiwave {

namespace {

DailyCountSeries render(const BandAssumption& a, Date start, int horizon_days, const ForecastOptions& options)
{
    const auto traj = integrate(seeded_seir(options.seed), a.params, static_cast<double>(horizon_days), options.step);
    return daily_deaths(traj, a.kappa, start);
}

BandAssumption assumption(const SeirParams& p, double kappa) { return {p, kappa, basic_reproduction(p)}; }

} // namespace

ForecastBand predict_wave(std::span<const FitCandidate> priors, Date start_date, int horizon_days,
                          const ForecastOptions& options)
{
    if (priors.empty()) throw InvariantError("predict_wave: no prior candidates");
    if (horizon_days < 14) throw InvariantError("predict_wave: horizon must be at least 14 days");

    SeirParams mean{0.0, 0.0, 0.0};
    double kappa = 0.0;
    double beta_min = priors.front().params.beta;
    double beta_max = beta_min;
    double eta_min = priors.front().params.eta;
    double eta_max = eta_min;
    for (const auto& c : priors) {
        c.params.validate();
        mean.beta += c.params.beta;
        mean.eta += c.params.eta;
        mean.epsilon += c.params.epsilon;
        kappa += c.kappa;
        beta_min = std::min(beta_min, c.params.beta);
        beta_max = std::max(beta_max, c.params.beta);
        eta_min = std::min(eta_min, c.params.eta);
        eta_max = std::max(eta_max, c.params.eta);
    }
    const auto n = static_cast<double>(priors.size());
    mean.beta /= n;
    mean.eta /= n;
    mean.epsilon /= n;
    kappa /= n;

    ForecastBand band;
    band.central_assumption = assumption(mean, kappa);
    band.lower_assumption = assumption({beta_min, eta_max, mean.epsilon}, kappa);
    band.upper_assumption = assumption({beta_max, eta_min, mean.epsilon}, kappa);
    band.central = render(band.central_assumption, start_date, horizon_days, options);
    const auto lower = render(band.lower_assumption, start_date, horizon_days, options);
    const auto upper = render(band.upper_assumption, start_date, horizon_days, options);

    std::vector<double> lo(band.central.size());
    std::vector<double> hi(band.central.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
        const double c = band.central[i];
        lo[i] = std::min({lower[i], upper[i], c});
        hi[i] = std::max({lower[i], upper[i], c});
        if (lo[i] != lower[i] || hi[i] != upper[i]) band.repaired = true;
    }
    band.lower = DailyCountSeries(start_date, std::move(lo));
    band.upper = DailyCountSeries(start_date, std::move(hi));
    return band;
}

void write_forecast_csv(std::ostream& out, const ForecastBand& band)
{
    out << "date,lower,central,upper\n";
    for (std::size_t i = 0; i < band.central.size(); ++i) {
        out << format_date(band.central.date_at(i)) << ',' << format_number(band.lower[i]) << ','
            << format_number(band.central[i]) << ',' << format_number(band.upper[i]) << '\n';
    }
}

} // namespace epiwave
