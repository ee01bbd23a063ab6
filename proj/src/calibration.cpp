#include "epiwave/calibration.hpp"

#include "epiwave/series_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <thread>
#include <tuple>

namespace epiwave {

std::string_view to_string(FitMetric metric)
{
    switch (metric) {
    case FitMetric::nrmse_peak: return "nrmse-peak";
    case FitMetric::cum_mape: return "cum-mape";
    }
    return "unknown";
}

FitMetric parse_metric(std::string_view text)
{
    if (text == "nrmse-peak") return FitMetric::nrmse_peak;
    if (text == "cum-mape") return FitMetric::cum_mape;
    throw ParseError("unknown metric '" + std::string(text) + "' (expected nrmse-peak or cum-mape)");
}

double AxisRange::value(int i) const
{
    if (steps <= 1 || i <= 0) return min;
    if (i >= steps - 1) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void AxisRange::validate(std::string_view axis) const
{
    const std::string name(axis);
    if (steps < 1) throw InvariantError("grid " + name + ": steps must be >= 1");
    if (!(min > 0.0) || !std::isfinite(min) || !std::isfinite(max)) {
        throw InvariantError("grid " + name + ": bounds must be finite and > 0");
    }
    if (steps > 1 && !(min < max)) throw InvariantError("grid " + name + ": min must be < max when steps > 1");
}

GridSpec GridSpec::default_grid()
{
    return {{0.15, 0.35, 200}, {0.05, 0.20, 150}, {2.0, 5.0, 7}};
}

std::size_t GridSpec::cells() const
{
    return static_cast<std::size_t>(beta.steps) * static_cast<std::size_t>(eta.steps) *
           static_cast<std::size_t>(epsilon.steps);
}

void GridSpec::validate() const
{
    beta.validate("beta");
    eta.validate("eta");
    epsilon.validate("epsilon");
}

namespace {

constexpr std::size_t kMinWaveDays = 14;

std::size_t earliest_argmax(std::span<const double> v)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

void check_observed(const DailyCountSeries& observed)
{
    if (observed.size() < kMinWaveDays) throw InvariantError("fit: observed wave shorter than 14 days");
    const auto v = observed.values();
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
        throw InvariantError("fit: observed series is all zero");
    }
}

// Daily removals from the seeded SEIR state, integrated until the daily
// maximum is final and `tail_days` further days exist past it.
std::vector<double> model_daily_removals(const SeirParams& p, std::size_t tail_days, const FitOptions& opt)
{
    const std::size_t stride = steps_per_day(opt.step);
    const auto max_days = static_cast<std::size_t>(std::max(opt.max_horizon_days, 1));
    SeirState x = seeded_seir(opt.seed);
    std::vector<double> daily;
    daily.reserve(256);
    std::size_t peak = 0;
    while (daily.size() < max_days) {
        const double r_before = x.R;
        for (std::size_t k = 0; k < stride; ++k) x = rk4_step(x, p, opt.step);
        if (!std::isfinite(x.R)) throw InvariantError("fit: non-finite model state");
        daily.push_back(std::max(x.R - r_before, 0.0));
        const std::size_t d = daily.size() - 1;
        if (daily[d] > daily[peak]) peak = d;
        // Once beta S < eta and I is falling, I (and daily removals) decrease for good.
        const bool declining = p.beta * x.S < p.eta && p.epsilon * x.E < p.eta * x.I;
        if (declining && d >= peak + tail_days) break;
    }
    return daily;
}

struct Profiled {
    std::vector<double> model; // unscaled, aligned
    double kappa;
};

Profiled profile(const SeirParams& params, const DailyCountSeries& observed, const FitOptions& options)
{
    const auto obs = observed.values();
    const std::size_t obs_peak = earliest_argmax(obs);
    Profiled out{aligned_model_curve(params, obs.size(), obs_peak, options), 0.0};
    double model_total = 0.0;
    double obs_total = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        model_total += out.model[i];
        obs_total += obs[i];
    }
    out.kappa = model_total > 0.0 ? obs_total / model_total : 0.0;
    return out;
}

double metric_value(FitMetric metric, std::span<const double> obs, const std::vector<double>& model, double kappa)
{
    const std::size_t n = obs.size();
    if (metric == FitMetric::nrmse_peak) {
        double sq = 0.0;
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = kappa * model[i] - obs[i];
            sq += r * r;
            peak = std::max(peak, obs[i]);
        }
        return 100.0 * std::sqrt(sq / static_cast<double>(n)) / peak;
    }
    double cum_model = 0.0;
    double cum_obs = 0.0;
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cum_model += kappa * model[i];
        cum_obs += obs[i];
        if (cum_obs > 0.0) {
            sum += std::abs(cum_model - cum_obs) / cum_obs;
            ++counted;
        }
    }
    return 100.0 * sum / static_cast<double>(counted);
}

} // namespace

std::vector<double> aligned_model_curve(const SeirParams& params, std::size_t length, std::size_t observed_peak,
                                        const FitOptions& options)
{
    params.validate();
    if (observed_peak >= length) throw InvariantError("aligned_model_curve: peak outside window");
    const auto daily = model_daily_removals(params, length - observed_peak, options);
    const std::size_t model_peak = earliest_argmax(daily);
    const auto shift = static_cast<std::ptrdiff_t>(model_peak) - static_cast<std::ptrdiff_t>(observed_peak);
    std::vector<double> out(length, 0.0);
    for (std::size_t i = 0; i < length; ++i) {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + shift;
        if (j >= 0 && j < static_cast<std::ptrdiff_t>(daily.size())) out[i] = daily[static_cast<std::size_t>(j)];
    }
    return out;
}

FitResult fit_error(const SeirParams& params, const DailyCountSeries& observed, FitMetric metric,
                    const FitOptions& options)
{
    check_observed(observed);
    const auto prof = profile(params, observed, options);
    return {metric_value(metric, observed.values(), prof.model, prof.kappa), prof.kappa};
}

DailyCountSeries fitted_curve(const SeirParams& params, const DailyCountSeries& observed, const FitOptions& options)
{
    check_observed(observed);
    auto prof = profile(params, observed, options);
    for (auto& v : prof.model) v *= prof.kappa;
    return DailyCountSeries(observed.start(), std::move(prof.model));
}

bool candidate_less(const FitCandidate& a, const FitCandidate& b)
{
    return std::tie(a.error_pct, a.params.beta, a.params.eta, a.params.epsilon) <
           std::tie(b.error_pct, b.params.beta, b.params.eta, b.params.epsilon);
}

void rank_candidates(std::vector<FitCandidate>& candidates)
{
    std::sort(candidates.begin(), candidates.end(), candidate_less);
}

FitReport grid_search(const DailyCountSeries& observed, const GridSpec& grid, FitMetric metric, std::size_t top_k,
                      const FitOptions& options)
{
    grid.validate();
    if (top_k < 1) throw InvariantError("grid_search: top_k must be >= 1");
    if (grid.cells() == 0) throw InvariantError("grid_search: empty grid");
    check_observed(observed);
    steps_per_day(options.step);

    const auto nb = static_cast<std::size_t>(grid.beta.steps);
    const auto ne = static_cast<std::size_t>(grid.eta.steps);
    const auto nx = static_cast<std::size_t>(grid.epsilon.steps);
    const std::size_t cells = grid.cells();
    std::vector<FitCandidate> all(cells);

    auto evaluate = [&](std::size_t c) {
        const auto ib = static_cast<int>(c / (ne * nx));
        const auto ie = static_cast<int>((c / nx) % ne);
        const auto ix = static_cast<int>(c % nx);
        FitCandidate& out = all[c];
        out.params = {grid.beta.value(ib), grid.eta.value(ie), grid.epsilon.value(ix)};
        const auto fit = fit_error(out.params, observed, metric, options);
        out.kappa = fit.kappa;
        out.error_pct = fit.error_pct;
        out.r0 = basic_reproduction(out.params);
    };

    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));
    if (threads <= 1) {
        for (std::size_t c = 0; c < cells; ++c) evaluate(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t c = next++; c < cells && !failed; c = next++) evaluate(c);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    FitReport report;
    report.grid = grid;
    report.metric = metric;
    const double inf = std::numeric_limits<double>::infinity();
    report.beta_scan.resize(nb, {0.0, inf});
    report.eta_scan.resize(ne, {0.0, inf});
    report.epsilon_scan.resize(nx, {0.0, inf});
    for (std::size_t i = 0; i < nb; ++i) report.beta_scan[i].value = grid.beta.value(static_cast<int>(i));
    for (std::size_t i = 0; i < ne; ++i) report.eta_scan[i].value = grid.eta.value(static_cast<int>(i));
    for (std::size_t i = 0; i < nx; ++i) report.epsilon_scan[i].value = grid.epsilon.value(static_cast<int>(i));
    for (std::size_t c = 0; c < cells; ++c) {
        const double err = all[c].error_pct;
        auto& b = report.beta_scan[c / (ne * nx)].min_error_pct;
        auto& e = report.eta_scan[(c / nx) % ne].min_error_pct;
        auto& x = report.epsilon_scan[c % nx].min_error_pct;
        b = std::min(b, err);
        e = std::min(e, err);
        x = std::min(x, err);
    }

    const std::size_t keep = std::min(top_k, cells);
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), candidate_less);
    all.resize(keep);
    report.candidates = std::move(all);
    return report;
}

FitCandidate average_top_candidates(const FitReport& report, std::size_t n)
{
    if (n < 1) throw InvariantError("average_top_candidates: n must be >= 1");
    if (report.candidates.size() < n) {
        throw InvariantError("average_top_candidates: report has " + std::to_string(report.candidates.size()) +
                             " candidates, " + std::to_string(n) + " requested");
    }
    FitCandidate mean;
    mean.params = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = report.candidates[i];
        mean.params.beta += c.params.beta;
        mean.params.eta += c.params.eta;
        mean.params.epsilon += c.params.epsilon;
        mean.kappa += c.kappa;
        mean.error_pct += c.error_pct;
    }
    const auto count = static_cast<double>(n);
    mean.params.beta /= count;
    mean.params.eta /= count;
    mean.params.epsilon /= count;
    mean.kappa /= count;
    mean.error_pct /= count;
    mean.r0 = basic_reproduction(mean.params);
    return mean;
}

void write_fit_report_csv(std::ostream& out, const FitReport& report)
{
    out << "r0,beta,eta,epsilon,kappa,error_pct\n";
    for (const auto& c : report.candidates) {
        out << format_number(c.r0) << ',' << format_number(c.params.beta) << ',' << format_number(c.params.eta) << ','
            << format_number(c.params.epsilon) << ',' << format_number(c.kappa) << ',' << format_number(c.error_pct)
            << '\n';
    }
}

std::vector<FitCandidate> read_fit_report_csv(std::istream& in, const std::string& source)
{
    std::string line;
    std::size_t line_no = 0;
    std::vector<FitCandidate> out;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != "r0,beta,eta,epsilon,kappa,error_pct") {
                throw ParseError(source + ":" + std::to_string(line_no) + ": expected fit report header");
            }
            header = true;
            continue;
        }
        double v[6];
        std::string_view rest = line;
        for (int k = 0; k < 6; ++k) {
            const auto comma = rest.find(',');
            if ((k < 5) == (comma == std::string_view::npos)) {
                throw ParseError(source + ":" + std::to_string(line_no) + ": expected 6 fields");
            }
            const auto parsed = parse_number(rest.substr(0, comma));
            if (!parsed) throw ParseError(source + ":" + std::to_string(line_no) + ": invalid number");
            v[k] = *parsed;
            if (k < 5) rest.remove_prefix(comma + 1);
        }
        FitCandidate c{{v[1], v[2], v[3]}, v[4], v[0], v[5]};
        try {
            c.params.validate();
        } catch (const InvariantError& e) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
        out.push_back(c);
    }
    if (!header) throw ParseError(source + ": empty fit report");
    return out;
}

void write_error_scan_csv(std::ostream& out, const std::vector<ErrorScanPoint>& scan)
{
    out << "param_value,min_error_pct\n";
    for (const auto& p : scan) out << format_number(p.value) << ',' << format_number(p.min_error_pct) << '\n';
}

} // namespace epiwave
