#include "cli.hpp"

#include "config.hpp"

#include "epiwave/calibration.hpp"
#include "epiwave/epidemic.hpp"
#include "epiwave/finalsize.hpp"
#include "epiwave/fixtures.hpp"
#include "epiwave/forecast.hpp"
#include "epiwave/mortality.hpp"
#include "epiwave/series_io.hpp"
#include "epiwave/waves.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace epiwave::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a run can be configured with; filled from flags and the config file.
struct RunConfig {
    std::string config_path;
    std::string out_dir = ".";
    bool quiet = false;
    bool no_timestamp = false;

    // inputs
    std::string reported;
    std::vector<std::string> histories;
    std::string weights = "0.4,0.3,0.2,0.05,0.05";
    std::string smoothing = "smooth-first";
    std::string fixture;
    std::string excess;
    std::string series;

    SegmentationConfig segmentation;

    // calibration
    int wave_index = 0;
    std::string beta_grid = "0.15:0.35:200";
    std::string eta_grid = "0.05:0.2:150";
    std::string epsilon_grid = "2:5:7";
    std::string metric = "nrmse-peak";
    int top_k = 10;
    unsigned threads = 0;
    double step = kDefaultStep;
    double seed = kDefaultSeed;

    // forecast
    std::vector<std::string> priors;
    std::vector<std::string> params;
    int average_top = 10;
    int priors_last = 2;
    std::string start;
    int horizon_days = 200;

    // final size
    std::vector<double> r0s;
    std::optional<double> curve_min;
    std::optional<double> curve_max;
    int points = 121;
    std::vector<std::string> table;

    // simulate
    std::string model = "seir";
    double beta = 0.0;
    double eta = 0.0;
    double epsilon = 3.0;
    std::optional<double> e0;
    std::optional<double> i0;
    double days = 200.0;
    double kappa = 1.0;
    double every = 1.0;
};

fs::path resolve_input(const std::string& path)
{
    fs::path p(path);
    if (p.is_relative()) {
        if (const char* root = std::getenv("EPIWAVE_DATA_DIR"); root != nullptr && *root != '\0') {
            return fs::path(root) / p;
        }
    }
    return p;
}

void write_file(const RunConfig& cfg, const std::string& name, const std::function<void(std::ostream&)>& body)
{
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvariantError("cannot write " + path.string());
    body(out);
    if (!out) throw InvariantError("write failed: " + path.string());
}

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void add_metadata(json& doc, const RunConfig& cfg)
{
    if (!cfg.no_timestamp) doc["generated_at"] = utc_timestamp();
}

json wave_json(const WaveSegment& w)
{
    return json{{"start", format_date(w.start_date)},
                {"peak", format_date(w.peak_date)},
                {"end", format_date(w.end_date)},
                {"rise_days", w.rise_days},
                {"fall_days", w.fall_days},
                {"total_days", w.total_days},
                {"deaths_to_peak", w.deaths_to_peak},
                {"deaths_after_peak", w.deaths_after_peak},
                {"total_deaths", w.total_deaths}};
}

json params_json(const SeirParams& p, double kappa)
{
    return json{{"beta", p.beta},
                {"eta", p.eta},
                {"epsilon", p.epsilon},
                {"kappa", kappa},
                {"r0", basic_reproduction(p)},
                {"incubation_days", 1.0 / p.epsilon}};
}

AxisRange parse_axis(const std::string& text, const std::string& axis)
{
    // min:max:steps, or a single value
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    auto number = [&](const std::string& s) {
        const auto v = parse_number(s);
        if (!v) throw UsageError("--" + axis + ": invalid number '" + s + "'");
        return *v;
    };
    if (parts.size() == 1) return {number(parts[0]), number(parts[0]), 1};
    if (parts.size() != 3) throw UsageError("--" + axis + ": expected min:max:steps");
    const double steps = number(parts[2]);
    if (steps < 1 || steps != std::floor(steps)) throw UsageError("--" + axis + ": steps must be a positive integer");
    return {number(parts[0]), number(parts[1]), static_cast<int>(steps)};
}

SmoothingOrder parse_smoothing(const std::string& s)
{
    if (s == "smooth-first") return SmoothingOrder::smooth_then_subtract;
    if (s == "subtract-first") return SmoothingOrder::subtract_then_smooth;
    throw UsageError("--smoothing: expected smooth-first or subtract-first");
}

std::vector<DailyCountSeries> load_histories(const RunConfig& cfg, const BaselineWeights& weights)
{
    if (cfg.histories.empty()) throw UsageError("at least one --history file is required");
    std::vector<DailyCountSeries> out;
    if (cfg.histories.size() == 1) {
        auto years = split_calendar_years(load_series(resolve_input(cfg.histories.front())));
        if (years.size() < weights.size()) {
            throw InvariantError("history file holds " + std::to_string(years.size()) + " complete years, " +
                                 std::to_string(weights.size()) + " weights given");
        }
        years.resize(weights.size());
        return years;
    }
    for (const auto& h : cfg.histories) out.push_back(load_series(resolve_input(h)));
    return out;
}

ExcessSeries acquire_excess(const RunConfig& cfg)
{
    if (!cfg.fixture.empty()) {
        const auto fx = fixture_by_name(cfg.fixture);
        return compute_excess(fx.reported, fx.histories, fx.weights, parse_smoothing(cfg.smoothing));
    }
    if (cfg.excess.empty()) throw UsageError("an --excess file or --fixture is required");
    return load_excess_series(resolve_input(cfg.excess));
}

void log(const RunConfig& cfg, std::ostream& out, const std::string& line)
{
    if (!cfg.quiet) out << line << '\n';
}

// ---------------------------------------------------------------- commands

int cmd_excess(const RunConfig& cfg, std::ostream& out)
{
    DailyCountSeries reported;
    std::vector<DailyCountSeries> histories;
    std::optional<BaselineWeights> weights;
    if (!cfg.fixture.empty()) {
        auto fx = fixture_by_name(cfg.fixture);
        write_file(cfg, "fixture_reported.csv", [&](std::ostream& os) { write_series_csv(os, fx.reported); });
        for (const auto& h : fx.histories) {
            const auto y = static_cast<int>(std::chrono::year_month_day{h.start()}.year());
            write_file(cfg, "fixture_history_" + std::to_string(y) + ".csv",
                       [&](std::ostream& os) { write_series_csv(os, h); });
        }
        reported = std::move(fx.reported);
        histories = std::move(fx.histories);
        weights = fx.weights;
    } else {
        if (cfg.reported.empty()) throw UsageError("--reported is required (or --fixture)");
        weights = BaselineWeights::parse(cfg.weights);
        reported = load_series(resolve_input(cfg.reported));
        histories = load_histories(cfg, *weights);
    }
    const auto excess = compute_excess(reported, histories, *weights, parse_smoothing(cfg.smoothing));
    write_file(cfg, "excess.csv", [&](std::ostream& os) { write_series_csv(os, excess); });

    double total = 0.0;
    for (double v : excess.values()) total += v;
    log(cfg, out,
        "total_excess=" + format_number(total) + " days=" + std::to_string(excess.size()) +
            " first=" + format_date(excess.start()) + " last=" + format_date(excess.last()));
    return kOk;
}

int cmd_waves(const RunConfig& cfg, std::ostream& out)
{
    const auto excess = acquire_excess(cfg);
    const auto waves = segment_waves(excess, cfg.segmentation);
    json doc = json::array();
    for (const auto& w : waves) doc.push_back(wave_json(w));
    write_file(cfg, "waves.json", [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    log(cfg, out, "waves=" + std::to_string(waves.size()));
    return kOk;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out)
{
    DailyCountSeries observed;
    std::optional<WaveSegment> wave;
    if (!cfg.series.empty()) {
        observed = load_series(resolve_input(cfg.series));
    } else {
        const auto excess = acquire_excess(cfg);
        const auto waves = segment_waves(excess, cfg.segmentation);
        if (cfg.wave_index < 0 || static_cast<std::size_t>(cfg.wave_index) >= waves.size()) {
            throw UsageError("--wave " + std::to_string(cfg.wave_index) + " out of range (" +
                             std::to_string(waves.size()) + " waves detected)");
        }
        wave = waves[static_cast<std::size_t>(cfg.wave_index)];
        observed = wave_deaths(*wave, excess);
    }

    const GridSpec grid{parse_axis(cfg.beta_grid, "beta"), parse_axis(cfg.eta_grid, "eta"),
                        parse_axis(cfg.epsilon_grid, "epsilon")};
    if (cfg.top_k < 1) throw UsageError("--top-k must be >= 1");
    FitOptions options;
    options.seed = cfg.seed;
    options.step = cfg.step;
    options.threads = cfg.threads;
    const auto metric = parse_metric(cfg.metric);
    auto report = grid_search(observed, grid, metric, static_cast<std::size_t>(cfg.top_k), options);
    report.observed_wave = wave;

    write_file(cfg, "fit_report.csv", [&](std::ostream& os) { write_fit_report_csv(os, report); });
    write_file(cfg, "error_scan_beta.csv", [&](std::ostream& os) { write_error_scan_csv(os, report.beta_scan); });
    write_file(cfg, "error_scan_eta.csv", [&](std::ostream& os) { write_error_scan_csv(os, report.eta_scan); });
    write_file(cfg, "error_scan_epsilon.csv",
               [&](std::ostream& os) { write_error_scan_csv(os, report.epsilon_scan); });

    const auto& best = report.candidates.front();
    const auto model = fitted_curve(best.params, observed, options);
    write_file(cfg, "fit_curve.csv", [&](std::ostream& os) {
        os << "date,observed,model\n";
        for (std::size_t i = 0; i < observed.size(); ++i) {
            os << format_date(observed.date_at(i)) << ',' << format_number(observed[i]) << ','
               << format_number(model[i]) << '\n';
        }
    });

    json meta;
    meta["metric"] = std::string(to_string(metric));
    meta["top_k"] = cfg.top_k;
    meta["grid"] = {{"beta", {grid.beta.min, grid.beta.max, grid.beta.steps}},
                    {"eta", {grid.eta.min, grid.eta.max, grid.eta.steps}},
                    {"epsilon", {grid.epsilon.min, grid.epsilon.max, grid.epsilon.steps}}};
    meta["integrator"] = {{"step", cfg.step}, {"seed", cfg.seed}};
    meta["wave"] = wave ? wave_json(*wave) : json(nullptr);
    meta["observed"] = {{"start", format_date(observed.start())}, {"days", observed.size()}};
    meta["best"] = params_json(best.params, best.kappa);
    meta["best"]["error_pct"] = best.error_pct;
    add_metadata(meta, cfg);
    write_file(cfg, "fit_meta.json", [&](std::ostream& os) { os << meta.dump(2) << '\n'; });

    char line[160];
    std::snprintf(line, sizeof line, "best r0=%.3f beta=%.6f eta=%.6f epsilon=%.3f error_pct=%.6f", best.r0,
                  best.params.beta, best.params.eta, best.params.epsilon, best.error_pct);
    log(cfg, out, line);
    return kOk;
}

FitCandidate parse_params_candidate(const std::string& text)
{
    std::vector<double> v;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto x = parse_number(item);
        if (!x) throw UsageError("--params: invalid number '" + item + "'");
        v.push_back(*x);
    }
    if (v.size() != 4) throw UsageError("--params expects beta,eta,epsilon,kappa");
    FitCandidate c{{v[0], v[1], v[2]}, v[3], 0.0, 0.0};
    c.params.validate();
    c.r0 = basic_reproduction(c.params);
    return c;
}

int cmd_forecast(const RunConfig& cfg, std::ostream& out)
{
    std::vector<FitCandidate> priors;
    for (const auto& path : cfg.priors) {
        const auto resolved = resolve_input(path);
        std::ifstream in(resolved);
        if (!in) throw ParseError(resolved.string() + ": cannot open file");
        FitReport report;
        report.candidates = read_fit_report_csv(in, resolved.string());
        if (report.candidates.empty()) throw InvariantError(resolved.string() + ": fit report has no rows");
        const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.average_top, 1)),
                                             report.candidates.size());
        priors.push_back(average_top_candidates(report, n));
    }
    if (cfg.priors_last > 0 && priors.size() > static_cast<std::size_t>(cfg.priors_last)) {
        priors.erase(priors.begin(), priors.end() - cfg.priors_last);
    }
    for (const auto& p : cfg.params) priors.push_back(parse_params_candidate(p));
    if (priors.empty()) throw UsageError("forecast needs --prior reports or --params");
    if (cfg.start.empty()) throw UsageError("--start is required");
    if (cfg.horizon_days < 1) throw UsageError("--horizon must be positive");

    ForecastOptions options;
    options.seed = cfg.seed;
    options.step = cfg.step;
    const auto band = predict_wave(priors, parse_date(cfg.start), cfg.horizon_days, options);
    write_file(cfg, "forecast.csv", [&](std::ostream& os) { write_forecast_csv(os, band); });

    json doc;
    doc["start"] = cfg.start;
    doc["horizon_days"] = cfg.horizon_days;
    doc["priors"] = json::array();
    for (const auto& p : priors) doc["priors"].push_back(params_json(p.params, p.kappa));
    doc["central"] = params_json(band.central_assumption.params, band.central_assumption.kappa);
    doc["lower"] = params_json(band.lower_assumption.params, band.lower_assumption.kappa);
    doc["upper"] = params_json(band.upper_assumption.params, band.upper_assumption.kappa);
    doc["band_repaired"] = band.repaired;
    add_metadata(doc, cfg);
    write_file(cfg, "forecast_assumptions.json", [&](std::ostream& os) { os << doc.dump(2) << '\n'; });

    double lo = 0.0;
    double mid = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < band.central.size(); ++i) {
        lo += band.lower[i];
        mid += band.central[i];
        hi += band.upper[i];
    }
    log(cfg, out,
        "central_r0=" + format_number(band.central_assumption.r0) + " total_deaths lower=" + format_number(lo) +
            " central=" + format_number(mid) + " upper=" + format_number(hi));
    return kOk;
}

int cmd_finalsize(const RunConfig& cfg, std::ostream& out)
{
    bool did_something = false;
    for (double r0 : cfg.r0s) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", solve_final_size(r0).r_f);
        out << buf << '\n';
        did_something = true;
    }
    if (cfg.curve_min || cfg.curve_max) {
        const auto curve = final_size_curve(cfg.curve_min.value_or(0.0), cfg.curve_max.value_or(7.0), cfg.points);
        write_file(cfg, "final_size_curve.csv", [&](std::ostream& os) { write_final_size_csv(os, curve); });
        did_something = true;
    }
    if (!cfg.table.empty()) {
        std::vector<HerdImmunityRow> rows;
        for (const auto& entry : cfg.table) {
            const auto eq = entry.rfind('=');
            const auto r0 = eq == std::string::npos ? std::nullopt : parse_number(entry.substr(eq + 1));
            if (!r0) throw UsageError("--table expects label=r0, got '" + entry + "'");
            rows.push_back({entry.substr(0, eq), *r0});
        }
        write_file(cfg, "herd_immunity.csv", [&](std::ostream& os) { write_herd_immunity_table(os, rows); });
        did_something = true;
    }
    if (!did_something) throw UsageError("finalsize needs --r0, --curve-min/--curve-max or --table");
    return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out)
{
    const SeirParams params{cfg.beta, cfg.eta, cfg.epsilon};
    steps_per_day(cfg.step);
    const double samples_per_row = cfg.every / cfg.step;
    if (!(samples_per_row >= 1.0) || std::abs(samples_per_row - std::round(samples_per_row)) > 1e-9) {
        throw UsageError("--every must be a positive multiple of --step");
    }
    const auto stride = static_cast<std::size_t>(std::round(samples_per_row));
    const Date start = cfg.start.empty() ? make_date(2020, 1, 1) : parse_date(cfg.start);
    DailyCountSeries deaths;
    double peak_i = 0.0;
    double peak_t = 0.0;
    if (cfg.model == "seir") {
        const double e0 = cfg.e0.value_or(cfg.seed);
        const double i0 = cfg.i0.value_or(cfg.seed);
        const auto traj = integrate(SeirState{1.0 - e0 - i0, e0, i0, 0.0}, params, cfg.days, cfg.step);
        write_file(cfg, "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj, stride); });
        deaths = daily_deaths(traj, cfg.kappa, start);
        for (const auto& s : traj.samples) {
            if (s.state.I > peak_i) peak_i = s.state.I, peak_t = s.t;
        }
    } else if (cfg.model == "sir") {
        const double i0 = cfg.i0.value_or(cfg.seed);
        const auto traj = integrate(SirState{1.0 - i0, i0, 0.0}, params, cfg.days, cfg.step);
        write_file(cfg, "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj, stride); });
        deaths = daily_deaths(traj, cfg.kappa, start);
        for (const auto& s : traj.samples) {
            if (s.state.I > peak_i) peak_i = s.state.I, peak_t = s.t;
        }
    } else {
        throw UsageError("--model must be seir or sir");
    }
    write_file(cfg, "daily_deaths.csv", [&](std::ostream& os) { write_series_csv(os, deaths); });
    log(cfg, out,
        "r0=" + format_number(basic_reproduction(params)) + " peak_I=" + format_number(peak_i) +
            " peak_t=" + format_number(peak_t));
    return kOk;
}

// ---------------------------------------------------------------- wiring

void add_common(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--config", cfg.config_path, "key=value configuration file (flags win)");
    sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    sub->add_flag("--quiet", cfg.quiet, "suppress summary lines");
    sub->add_flag("--no-timestamp", cfg.no_timestamp, "omit generated_at from JSON metadata");
}

void add_excess_inputs(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--fixture", cfg.fixture, "built-in dataset instead of files (synthetic-istanbul)");
    sub->add_option("--smoothing", cfg.smoothing, "smooth-first or subtract-first")->capture_default_str();
}

void add_segmentation(CLI::App* sub, RunConfig& cfg)
{
    auto& s = cfg.segmentation;
    sub->add_option("--start-threshold", s.start_threshold, "deaths/day opening a wave")->capture_default_str();
    sub->add_option("--end-threshold", s.end_threshold, "deaths/day closing a wave")->capture_default_str();
    sub->add_option("--persistence", s.min_persistence_days, "days a threshold crossing must persist")
        ->capture_default_str();
    sub->add_option("--min-wave-days", s.min_wave_days, "shortest wave kept")->capture_default_str();
}

void add_integrator(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--step", cfg.step, "integrator step in days")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "initial exposed and infectious fraction")->capture_default_str();
}

bool user_gave(const std::vector<std::string>& args, const std::string& name)
{
    const std::string flag = "--" + name;
    for (const auto& a : args) {
        if (a == flag || a.starts_with(flag + "=")) return true;
    }
    return false;
}

// Inserts config-file entries as flags right after the subcommand name,
// skipping every key the user already passed on the command line.
std::vector<std::string> merge_config(CLI::App& app, const std::vector<std::string>& args)
{
    std::optional<std::string> config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
        if (args[i].starts_with("--config=")) config = args[i].substr(9);
    }
    if (!config || args.empty()) return args;

    CLI::App* sub = nullptr;
    for (auto* s : app.get_subcommands([](CLI::App*) { return true; })) {
        if (s->get_name() == args.front()) sub = s;
    }
    if (sub == nullptr) return args;

    std::vector<std::string> injected;
    for (const auto& e : read_config(resolve_input(*config))) {
        if (!e.section.empty() && e.section != sub->get_name()) continue;
        if (e.key == "config") continue;
        const CLI::Option* opt = sub->get_option_no_throw("--" + e.key);
        if (opt == nullptr) {
            if (!e.section.empty()) throw UsageError("config line " + std::to_string(e.line) + ": unknown key " + e.key);
            continue;
        }
        if (user_gave(args, e.key)) continue;
        injected.push_back("--" + e.key + "=" + e.value);
    }
    std::vector<std::string> merged{args.front()};
    merged.insert(merged.end(), injected.begin(), injected.end());
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"epiwave: excess-mortality waves, SEIR calibration, forecasts and final sizes"};
    app.name("epiwave");
    app.require_subcommand(1);

    auto* excess = app.add_subcommand("excess", "reported minus weighted multi-year baseline");
    add_common(excess, cfg);
    add_excess_inputs(excess, cfg);
    excess->add_option("--reported", cfg.reported, "reported daily deaths CSV");
    excess->add_option("--history", cfg.histories,
                       "baseline history CSV; one multi-year file or one file per weight, most recent first");
    excess->add_option("--weights", cfg.weights, "baseline weights, most recent year first")->capture_default_str();

    auto* waves = app.add_subcommand("waves", "segment an excess series into waves");
    add_common(waves, cfg);
    add_excess_inputs(waves, cfg);
    add_segmentation(waves, cfg);
    waves->add_option("--excess", cfg.excess, "excess CSV");

    auto* fit = app.add_subcommand("fit", "grid-search SEIR parameters for one wave");
    add_common(fit, cfg);
    add_excess_inputs(fit, cfg);
    add_segmentation(fit, cfg);
    add_integrator(fit, cfg);
    fit->add_option("--excess", cfg.excess, "excess CSV");
    fit->add_option("--series", cfg.series, "fit a daily count CSV directly instead of a detected wave");
    fit->add_option("--wave", cfg.wave_index, "0-based wave index")->capture_default_str();
    fit->add_option("--beta", cfg.beta_grid, "beta grid min:max:steps")->capture_default_str();
    fit->add_option("--eta", cfg.eta_grid, "eta grid min:max:steps")->capture_default_str();
    fit->add_option("--epsilon", cfg.epsilon_grid, "epsilon grid min:max:steps")->capture_default_str();
    fit->add_option("--metric", cfg.metric, "nrmse-peak or cum-mape")->capture_default_str();
    fit->add_option("--top-k", cfg.top_k, "rows kept in the report")->capture_default_str();
    fit->add_option("--threads", cfg.threads, "worker threads (0 = all cores)")->capture_default_str();

    auto* forecast = app.add_subcommand("forecast", "next-wave prediction with lower/upper bands");
    add_common(forecast, cfg);
    add_integrator(forecast, cfg);
    forecast->add_option("--prior", cfg.priors, "fit_report.csv of a previous wave (oldest first)");
    forecast->add_option("--params", cfg.params, "explicit prior beta,eta,epsilon,kappa");
    forecast->add_option("--average-top", cfg.average_top, "report rows averaged per prior")->capture_default_str();
    forecast->add_option("--priors-last", cfg.priors_last, "use only the most recent N report priors (0 = all)")
        ->capture_default_str();
    forecast->add_option("--start", cfg.start, "first forecast date (YYYY-MM-DD)");
    forecast->add_option("--horizon", cfg.horizon_days, "forecast length in days")->capture_default_str();

    auto* finalsize = app.add_subcommand("finalsize", "final epidemic size from R0");
    add_common(finalsize, cfg);
    finalsize->add_option("--r0", cfg.r0s, "print the final size for these R0 values");
    finalsize->add_option("--curve-min", cfg.curve_min, "write final_size_curve.csv from this R0");
    finalsize->add_option("--curve-max", cfg.curve_max, "... up to this R0");
    finalsize->add_option("--points", cfg.points, "curve points")->capture_default_str();
    finalsize->add_option("--table", cfg.table, "label=r0 rows for herd_immunity.csv");

    auto* simulate = app.add_subcommand("simulate", "integrate SIR/SEIR and export the trajectory");
    add_common(simulate, cfg);
    add_integrator(simulate, cfg);
    simulate->add_option("--model", cfg.model, "seir or sir")->capture_default_str();
    simulate->add_option("--beta", cfg.beta, "transmission rate per day")->required();
    simulate->add_option("--eta", cfg.eta, "removal rate per day")->required();
    simulate->add_option("--epsilon", cfg.epsilon, "incubation transfer rate per day")->capture_default_str();
    simulate->add_option("--e0", cfg.e0, "initial exposed fraction (default: seed)");
    simulate->add_option("--i0", cfg.i0, "initial infectious fraction (default: seed)");
    simulate->add_option("--days", cfg.days, "integration length")->capture_default_str();
    simulate->add_option("--kappa", cfg.kappa, "deaths per unit removed fraction")->capture_default_str();
    simulate->add_option("--every", cfg.every, "trajectory row spacing in days")->capture_default_str();
    simulate->add_option("--start", cfg.start, "calendar date of t = 0 (default 2020-01-01)");

    try {
        auto argv = merge_config(app, args);
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kOk : kUsageError;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParseError;
    }

    try {
        if (*excess) return cmd_excess(cfg, out);
        if (*waves) return cmd_waves(cfg, out);
        if (*fit) return cmd_fit(cfg, out);
        if (*forecast) return cmd_forecast(cfg, out);
        if (*finalsize) return cmd_finalsize(cfg, out);
        if (*simulate) return cmd_simulate(cfg, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvariantError;
    }
    return kUsageError;
}

} // namespace epiwave::cli
