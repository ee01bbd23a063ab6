#include "epiwave/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace epiwave {

void SeirParams::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(beta)) throw InvariantError("SEIR parameters: beta must be finite and > 0");
    if (!positive(eta)) throw InvariantError("SEIR parameters: eta must be finite and > 0");
    if (!positive(epsilon)) throw InvariantError("SEIR parameters: epsilon must be finite and > 0");
}

SeirState seeded_seir(double seed)
{
    if (!(seed >= 0.0 && seed <= 0.5)) throw InvariantError("seed fraction must lie in [0, 0.5]");
    return {1.0 - 2.0 * seed, seed, seed, 0.0};
}

SirState seeded_sir(double seed)
{
    if (!(seed >= 0.0 && seed <= 1.0)) throw InvariantError("seed fraction must lie in [0, 1]");
    return {1.0 - seed, seed, 0.0};
}

namespace {

constexpr double kStateTolerance = 1e-9;

bool finite(const SirState& x) { return std::isfinite(x.S) && std::isfinite(x.I) && std::isfinite(x.R); }
bool finite(const SeirState& x)
{
    return std::isfinite(x.S) && std::isfinite(x.E) && std::isfinite(x.I) && std::isfinite(x.R);
}

double total(const SirState& x) { return x.S + x.I + x.R; }
double total(const SeirState& x) { return x.S + x.E + x.I + x.R; }

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }
bool components_in_unit(const SirState& x) { return in_unit(x.S) && in_unit(x.I) && in_unit(x.R); }
bool components_in_unit(const SeirState& x)
{
    return in_unit(x.S) && in_unit(x.E) && in_unit(x.I) && in_unit(x.R);
}

template <class State>
Trajectory<State> integrate_impl(const State& initial, const SeirParams& params, double t_end, double step)
{
    params.validate();
    if (!(step > 0.0) || !std::isfinite(step)) throw InvariantError("integrate: step must be > 0");
    if (!(t_end >= step) || !std::isfinite(t_end)) throw InvariantError("integrate: t_end must be >= step");
    if (!finite(initial) || !components_in_unit(initial) || std::abs(total(initial) - 1.0) > kStateTolerance) {
        throw InvariantError("integrate: initial state must be fractions in [0,1] summing to 1");
    }
    const auto n = static_cast<std::size_t>(std::floor(t_end / step + 1e-9));
    Trajectory<State> traj;
    traj.step = step;
    traj.samples.reserve(n + 1);
    traj.samples.push_back({0.0, initial});
    State x = initial;
    for (std::size_t k = 1; k <= n; ++k) {
        x = rk4_step(x, params, step);
        if (!finite(x)) {
            throw InvariantError("integrate: non-finite state at t = " + std::to_string(static_cast<double>(k) * step));
        }
        traj.samples.push_back({static_cast<double>(k) * step, x});
    }
    return traj;
}

double removed(const SirState& x) { return x.R; }
double removed(const SeirState& x) { return x.R; }

} // namespace

SirTrajectory integrate(const SirState& initial, const SeirParams& params, double t_end, double step)
{
    return integrate_impl(initial, params, t_end, step);
}

SeirTrajectory integrate(const SeirState& initial, const SeirParams& params, double t_end, double step)
{
    return integrate_impl(initial, params, t_end, step);
}

double basic_reproduction(const SeirParams& params)
{
    if (!(params.eta > 0.0)) throw InvariantError("basic_reproduction: eta must be > 0");
    return params.beta / params.eta;
}

std::size_t steps_per_day(double step)
{
    if (!(step > 0.0) || step > 1.0) throw InvariantError("step must lie in (0, 1] day");
    const double per_day = std::round(1.0 / step);
    if (std::abs(per_day * step - 1.0) > 1e-9) {
        throw InvariantError("step " + std::to_string(step) + " does not divide one day");
    }
    return static_cast<std::size_t>(per_day);
}

template <class State>
DailyCountSeries daily_deaths(const Trajectory<State>& traj, double scale, Date start)
{
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw InvariantError("daily_deaths: scale must be finite and >= 0");
    const std::size_t stride = steps_per_day(traj.step);
    if (traj.samples.size() < stride + 1) throw InvariantError("daily_deaths: trajectory shorter than one day");
    const std::size_t days = (traj.samples.size() - 1) / stride;
    std::vector<double> out(days);
    for (std::size_t d = 0; d < days; ++d) {
        const double inc = removed(traj.samples[(d + 1) * stride].state) - removed(traj.samples[d * stride].state);
        out[d] = scale * std::max(inc, 0.0);
    }
    return DailyCountSeries(start, std::move(out));
}

template DailyCountSeries daily_deaths(const SirTrajectory&, double, Date);
template DailyCountSeries daily_deaths(const SeirTrajectory&, double, Date);

namespace {

void write_row(std::ostream& out, double t, double s, double e, double i, double r)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", t, s, e, i, r);
    out << buf;
}

void write_state(std::ostream& out, double t, const SirState& x) { write_row(out, t, x.S, 0.0, x.I, x.R); }
void write_state(std::ostream& out, double t, const SeirState& x) { write_row(out, t, x.S, x.E, x.I, x.R); }

} // namespace

template <class State>
void write_trajectory_csv(std::ostream& out, const Trajectory<State>& traj, std::size_t stride)
{
    if (stride == 0) stride = 1;
    out << "t,S,E,I,R\n";
    for (std::size_t k = 0; k < traj.samples.size(); k += stride) {
        write_state(out, traj.samples[k].t, traj.samples[k].state);
    }
}

template void write_trajectory_csv(std::ostream&, const SirTrajectory&, std::size_t);
template void write_trajectory_csv(std::ostream&, const SeirTrajectory&, std::size_t);

} // namespace epiwave
