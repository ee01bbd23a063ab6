#include "epiwave/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace epiwave {

using namespace std::chrono;

namespace {

// Daily removals from the seeded state until the curve has dropped below
// `cutoff_fraction` of its maximum on the falling side.
std::vector<double> full_wave_curve(const SeirParams& params, double cutoff_fraction, double seed, double step)
{
    double horizon = 200.0;
    while (true) {
        const auto daily = daily_deaths(integrate(seeded_seir(seed), params, horizon, step), 1.0);
        const auto v = daily.values();
        const auto peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
        if (v.back() < cutoff_fraction * v[peak] && peak + 1 < v.size()) return {v.begin(), v.end()};
        if (horizon > 20000.0) throw InvariantError("synthetic_wave: epidemic does not decline");
        horizon *= 2.0;
    }
}

struct Window {
    std::size_t first;
    std::size_t last;
    std::size_t peak;
};

Window wave_window(const std::vector<double>& v, double cutoff_fraction)
{
    const auto peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    const double cut = cutoff_fraction * v[peak];
    std::size_t first = peak;
    while (first > 0 && v[first - 1] >= cut) --first;
    std::size_t last = peak;
    while (last + 1 < v.size() && v[last + 1] >= cut) ++last;
    return {first, last, peak};
}

// Uniform noise in [-amplitude, amplitude] from raw mt19937 output, which the
// standard pins down bit for bit.
class Noise {
public:
    explicit Noise(std::uint32_t seed) : engine_(seed) {}
    double operator()(double amplitude)
    {
        const double u = static_cast<double>(engine_()) / 4294967296.0;
        return amplitude * (2.0 * u - 1.0);
    }

private:
    std::mt19937 engine_;
};

double seasonal_baseline(Date d, int year_index)
{
    const year_month_day ymd{d};
    const Date jan1 = ymd.year() / January / 1;
    const double doy = static_cast<double>((d - jan1).count());
    return 215.0 + 3.0 * year_index + 25.0 * std::cos(2.0 * std::numbers::pi * (doy - 15.0) / 365.25);
}

struct WaveSpec {
    SeirParams params;
    Date peak;
    double total_deaths;
};

} // namespace

DailyCountSeries synthetic_wave(const SeirParams& params, double kappa, Date start, double cutoff_fraction, double seed,
                                double step)
{
    params.validate();
    if (!(cutoff_fraction > 0.0 && cutoff_fraction < 1.0)) {
        throw InvariantError("synthetic_wave: cutoff fraction must lie in (0, 1)");
    }
    const auto curve = full_wave_curve(params, cutoff_fraction, seed, step);
    const auto w = wave_window(curve, cutoff_fraction);
    std::vector<double> out;
    for (std::size_t i = w.first; i <= w.last; ++i) out.push_back(kappa * curve[i]);
    return DailyCountSeries(start, std::move(out));
}

ExcessSeries triangle_excess(Date start, int half_width, double peak, int padding)
{
    if (half_width < 1 || padding < 0) throw InvariantError("triangle_excess: invalid shape");
    std::vector<double> v(static_cast<std::size_t>(padding), 0.0);
    for (int k = 0; k <= 2 * half_width; ++k) {
        v.push_back(peak * (half_width - std::abs(k - half_width)) / half_width);
    }
    v.insert(v.end(), static_cast<std::size_t>(padding), 0.0);
    return ExcessSeries(start, std::move(v));
}

MortalityFixture synthetic_istanbul()
{
    MortalityFixture fx;
    Noise noise(20200315u);

    for (int y = 2019; y >= 2015; --y) {
        const Date first = year{y} / January / 1;
        const Date last = year{y} / December / 31;
        std::vector<double> v;
        for (Date d = first; d <= last; d += days{1}) {
            v.push_back(std::round(seasonal_baseline(d, y - 2015) + noise(6.0)));
        }
        fx.histories.emplace_back(first, std::move(v));
    }

    const Date first = year{2020} / January / 1;
    const Date last = year{2021} / December / 31;
    const auto expected = expected_deaths_range(fx.histories, fx.weights, first, last);
    std::vector<double> excess(expected.size(), 0.0);

    // Wave totals and peaks echo the registry bookkeeping of the four waves.
    const WaveSpec waves[] = {
        {{0.231419776, 0.073068182, 3.0}, year{2020} / April / 10, 4451.0},
        {{0.230520067, 0.14194734, 3.0}, year{2020} / November / 26, 11187.0},
        {{0.228682277, 0.142128916, 3.9}, year{2021} / April / 20, 8308.0},
        {{0.229601172, 0.142038128, 3.5}, year{2021} / October / 12, 6500.0},
    };
    for (const auto& w : waves) {
        const auto curve = full_wave_curve(w.params, 0.01, kDefaultSeed, kDefaultStep);
        const auto win = wave_window(curve, 0.01);
        double sum = 0.0;
        for (std::size_t i = win.first; i <= win.last; ++i) sum += curve[i];
        const auto peak_index = static_cast<std::ptrdiff_t>(*expected.index_of(w.peak));
        for (std::size_t i = win.first; i <= win.last; ++i) {
            const std::ptrdiff_t j = peak_index + static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(win.peak);
            if (j >= 0 && j < static_cast<std::ptrdiff_t>(excess.size())) {
                excess[static_cast<std::size_t>(j)] += w.total_deaths * curve[i] / sum;
            }
        }
    }

    std::vector<double> reported(expected.size());
    for (std::size_t i = 0; i < reported.size(); ++i) {
        reported[i] = std::max(0.0, std::round(expected[i] + excess[i] + noise(6.0)));
    }
    fx.reported = DailyCountSeries(first, std::move(reported));
    return fx;
}

MortalityFixture fixture_by_name(std::string_view name)
{
    if (name == "synthetic-istanbul") return synthetic_istanbul();
    throw InvariantError("unknown fixture '" + std::string(name) + "'");
}

} // namespace epiwave
