#pragma once

#include "epiwave/series.hpp"

#include <iosfwd>
#include <vector>

namespace epiwave {

/// Rates per day: transmission (beta), removal (eta), exposed-to-infectious (epsilon).
struct SeirParams {
    double beta = 0.0;
    double eta = 0.0;
    double epsilon = 0.0;

    /// Throws InvariantError unless every rate is finite and > 0.
    void validate() const;
    friend bool operator==(const SeirParams&, const SeirParams&) = default;
};

/// Population fractions.
struct SirState {
    double S = 1.0;
    double I = 0.0;
    double R = 0.0;
};

struct SeirState {
    double S = 1.0;
    double E = 0.0;
    double I = 0.0;
    double R = 0.0;
};

inline constexpr double kDefaultStep = 0.05;
inline constexpr double kDefaultSeed = 1e-5;

/// (-beta S I, beta S I - eta I, eta I)
inline SirState sir_rhs(const SirState& x, const SeirParams& p)
{
    const double infection = p.beta * x.S * x.I;
    const double removal = p.eta * x.I;
    return {-infection, infection - removal, removal};
}

/// (-beta S I, beta S I - epsilon E, epsilon E - eta I, eta I)
inline SeirState seir_rhs(const SeirState& x, const SeirParams& p)
{
    const double infection = p.beta * x.S * x.I;
    const double incubation = p.epsilon * x.E;
    const double removal = p.eta * x.I;
    return {-infection, infection - incubation, incubation - removal, removal};
}

inline SirState derivative(const SirState& x, const SeirParams& p) { return sir_rhs(x, p); }
inline SeirState derivative(const SeirState& x, const SeirParams& p) { return seir_rhs(x, p); }

inline SirState axpy(const SirState& x, double h, const SirState& k)
{
    return {x.S + h * k.S, x.I + h * k.I, x.R + h * k.R};
}

inline SeirState axpy(const SeirState& x, double h, const SeirState& k)
{
    return {x.S + h * k.S, x.E + h * k.E, x.I + h * k.I, x.R + h * k.R};
}

/// One classical fourth-order Runge-Kutta step.
template <class State>
State rk4_step(const State& x, const SeirParams& p, double h)
{
    const State k1 = derivative(x, p);
    const State k2 = derivative(axpy(x, 0.5 * h, k1), p);
    const State k3 = derivative(axpy(x, 0.5 * h, k2), p);
    const State k4 = derivative(axpy(x, h, k3), p);
    State k = k1;
    k = axpy(k, 2.0, k2);
    k = axpy(k, 2.0, k3);
    k = axpy(k, 1.0, k4);
    return axpy(x, h / 6.0, k);
}

/// S = 1 - 2 seed, E = I = seed, R = 0.
SeirState seeded_seir(double seed = kDefaultSeed);
/// S = 1 - seed, I = seed, R = 0.
SirState seeded_sir(double seed = kDefaultSeed);

template <class State>
struct Trajectory {
    struct Sample {
        double t; ///< days since the start of integration
        State state;
    };
    double step = kDefaultStep;
    std::vector<Sample> samples;
};

using SirTrajectory = Trajectory<SirState>;
using SeirTrajectory = Trajectory<SeirState>;

/// Fixed-step RK4 from t = 0 to the last multiple of `step` not beyond `t_end`.
/// Sample k sits at exactly k * step. Throws InvariantError on invalid
/// arguments or if a non-finite state is produced.
SirTrajectory integrate(const SirState& initial, const SeirParams& params, double t_end, double step = kDefaultStep);
SeirTrajectory integrate(const SeirState& initial, const SeirParams& params, double t_end,
                         double step = kDefaultStep);

/// beta / eta.
double basic_reproduction(const SeirParams& params);

/// Whole-day sampling stride of a step size; throws unless 1/step is an integer.
std::size_t steps_per_day(double step);

/// Observation map: value on day d is scale * (R(d+1) - R(d)).
template <class State>
DailyCountSeries daily_deaths(const Trajectory<State>& traj, double scale, Date start = Date{});

/// Writes `t,S,E,I,R` rows (12 significant digits) every `stride` samples.
template <class State>
void write_trajectory_csv(std::ostream& out, const Trajectory<State>& traj, std::size_t stride = 1);

} // namespace epiwave
