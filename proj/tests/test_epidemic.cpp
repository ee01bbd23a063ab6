#include "epiwave/epidemic.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace epiwave;

namespace {

// Peak of I and R(200) for the seeded SEIR run at beta = 0.231419776,
// eta = 0.073068182, epsilon = 3, seed 1e-5, from an independent
// high-accuracy DOP853 solve (rtol 1e-13) with continuous-output maximisation.
constexpr double kRefPeakTime = 79.09591878515572;
constexpr double kRefPeakI = 0.3125697753215033;
constexpr double kRefR200 = 0.9503033810038043;

const SeirParams kFirstWave2020{0.231419776, 0.073068182, 3.0};

double max_abs_diff(const SeirState& a, const SeirState& b)
{
    return std::max({std::abs(a.S - b.S), std::abs(a.E - b.E), std::abs(a.I - b.I), std::abs(a.R - b.R)});
}

} // namespace

TEST_CASE("SIR vector field")
{
    const SeirParams p{0.232846715, 0.072992701, 3.0};
    const auto d = sir_rhs({0.5, 0.5, 0.0}, p);
    CHECK(d.S == doctest::Approx(-0.05821167875).epsilon(1e-12));
    CHECK(d.I == doctest::Approx(0.05821167875 - 0.0364963505).epsilon(1e-12));
    CHECK(d.R == doctest::Approx(0.0364963505).epsilon(1e-12));

    const auto zero = sir_rhs({0.7, 0.0, 0.3}, p);
    CHECK(zero.S == 0.0);
    CHECK(zero.I == 0.0);
    CHECK(zero.R == 0.0);

    const auto traj = integrate(SirState{1.0, 0.0, 0.0}, p, 50.0);
    CHECK(traj.samples.back().state.S == 1.0);
}

TEST_CASE("SEIR vector field")
{
    const SeirParams p{0.23, 0.142857143, 3.0};
    const auto d = seir_rhs({0.9, 0.05, 0.05, 0.0}, p);
    // beta S I = 0.01035, epsilon E = 0.15, eta I = 0.00714285715
    CHECK(d.S == doctest::Approx(-0.01035).epsilon(1e-12));
    CHECK(d.E == doctest::Approx(0.01035 - 0.15).epsilon(1e-12));
    CHECK(d.I == doctest::Approx(0.15 - 0.00714285715).epsilon(1e-12));
    CHECK(d.R == doctest::Approx(0.00714285715).epsilon(1e-12));

    const auto zero = seir_rhs({0.6, 0.0, 0.0, 0.4}, p);
    CHECK(zero.S == 0.0);
    CHECK(zero.E == 0.0);
    CHECK(zero.I == 0.0);
    CHECK(zero.R == 0.0);
}

TEST_CASE("SEIR derivative components cancel")
{
    oracle::Uniform rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        double s = rng(0.0, 1.0), e = rng(0.0, 1.0 - s), i = rng(0.0, 1.0 - s - e);
        const SeirParams p{rng(0.01, 2.0), rng(0.01, 1.0), rng(0.1, 10.0)};
        const auto d = seir_rhs({s, e, i, 1.0 - s - e - i}, p);
        const double scale = std::abs(d.S) + std::abs(d.E) + std::abs(d.I) + std::abs(d.R);
        CHECK(std::abs(d.S + d.E + d.I + d.R) <= 1e-15 * scale);
    }
}

TEST_CASE("disease-free start stays constant")
{
    const auto traj = integrate(SeirState{1.0, 0.0, 0.0, 0.0}, kFirstWave2020, 100.0);
    for (const auto& s : traj.samples) {
        CHECK(s.state.S == 1.0);
        CHECK(s.state.I == 0.0);
    }
    const auto deaths = daily_deaths(traj, 1e4);
    for (double v : deaths.values()) CHECK(v == 0.0);
}

TEST_CASE("seeded run matches an independent high-accuracy solution")
{
    const auto traj = integrate(seeded_seir(), kFirstWave2020, 200.0, 0.05);
    REQUIRE(traj.samples.size() == 4001);
    CHECK(traj.samples.back().t == 200.0);
    const auto peak = std::max_element(traj.samples.begin(), traj.samples.end(),
                                       [](const auto& a, const auto& b) { return a.state.I < b.state.I; });
    CHECK(std::abs(peak->t - kRefPeakTime) <= 0.05);
    CHECK(std::abs(peak->state.I - kRefPeakI) < 5e-6);
    CHECK(std::abs(traj.samples.back().state.R - kRefR200) < 1e-8);

    // Self-oracle: a 0.001-day run.
    const auto fine = integrate(seeded_seir(), kFirstWave2020, 200.0, 0.001);
    CHECK(std::abs(fine.samples.back().state.R - kRefR200) < 1e-10);
    CHECK(std::abs(fine.samples.back().state.R - traj.samples.back().state.R) < 1e-8);
}

TEST_CASE("halving the step changes every sample by less than 1e-6")
{
    const auto coarse = integrate(seeded_seir(), kFirstWave2020, 200.0, 0.05);
    const auto fine = integrate(seeded_seir(), kFirstWave2020, 200.0, 0.025);
    double worst = 0.0;
    for (std::size_t k = 0; k < coarse.samples.size(); ++k) {
        worst = std::max(worst, max_abs_diff(coarse.samples[k].state, fine.samples[2 * k].state));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("fourth-order convergence")
{
    const SeirParams p{0.23, 0.14, 3.0};
    const double t_end = 150.0;
    auto error = [&](double h) {
        const auto run = integrate(seeded_seir(), p, t_end, h);
        const auto ref = integrate(seeded_seir(), p, t_end, h / 8.0);
        double worst = 0.0;
        for (std::size_t k = 0; k < run.samples.size(); ++k) {
            worst = std::max(worst, max_abs_diff(run.samples[k].state, ref.samples[8 * k].state));
        }
        return worst;
    };
    const double e1 = error(0.2);
    const double e2 = error(0.1);
    const double e3 = error(0.05);
    MESSAGE("errors " << e1 << " " << e2 << " " << e3);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
    CHECK(e2 / e3 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("conservation, positivity and monotonicity over random parameters")
{
    oracle::Uniform rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const SeirParams p{rng(0.1, 0.5), rng(0.03, 0.25), rng(0.5, 5.0)};
        const auto traj = integrate(seeded_seir(rng(1e-7, 1e-3)), p, 200.0);
        const SeirState* prev = nullptr;
        for (const auto& s : traj.samples) {
            const auto& x = s.state;
            CHECK(std::abs(x.S + x.E + x.I + x.R - 1.0) < 1e-9);
            CHECK(std::min({x.S, x.E, x.I, x.R}) >= -1e-12);
            if (prev != nullptr) {
                CHECK(x.S <= prev->S);
                CHECK(x.R >= prev->R);
            }
            prev = &x;
        }
    }
}

TEST_CASE("very fast incubation reduces SEIR to SIR")
{
    const SeirParams p{0.23, 0.1, 1e3};
    const double seed = 1e-5;
    const double step = 0.001;
    const auto seir = daily_deaths(integrate(SeirState{1.0 - seed, 0.0, seed, 0.0}, p, 200.0, step), 1.0);
    const auto sir = daily_deaths(integrate(SirState{1.0 - seed, seed, 0.0}, p, 200.0, step), 1.0);
    REQUIRE(seir.size() == sir.size());
    for (std::size_t d = 0; d < sir.size(); ++d) {
        CHECK(std::abs(seir[d] - sir[d]) <= 0.01 * sir[d]);
    }
}

TEST_CASE("basic reproduction number")
{
    CHECK(basic_reproduction({0.232846715, 0.072992701, 3.0}) == doctest::Approx(3.19).epsilon(0.005 / 3.19));
    CHECK(basic_reproduction({0.231098431, 0.142653352, 3.0}) == doctest::Approx(1.62).epsilon(0.005 / 1.62));
    CHECK(basic_reproduction({0.2, 0.2, 3.0}) == 1.0);
    CHECK_THROWS_AS(basic_reproduction({0.2, 0.0, 3.0}), InvariantError);
}

TEST_CASE("daily deaths observation map")
{
    const auto traj = integrate(seeded_seir(), SeirParams{0.23, 0.14, 3.0}, 300.0);
    SUBCASE("scale zero")
    {
        const auto zero = daily_deaths(traj, 0.0);
        for (double v : zero.values()) CHECK(v == 0.0);
    }
    SUBCASE("telescoping sum")
    {
        const auto d = daily_deaths(traj, 1.0, make_date(2020, 1, 1));
        CHECK(d.size() == 300);
        double sum = 0.0;
        for (double v : d.values()) {
            CHECK(v >= 0.0);
            sum += v;
        }
        const double dr = traj.samples.back().state.R - traj.samples.front().state.R;
        CHECK(std::abs(sum - dr) < 1e-9);
        const auto scaled = daily_deaths(traj, 1e4);
        double scaled_sum = 0.0;
        for (double v : scaled.values()) scaled_sum += v;
        CHECK(scaled_sum == doctest::Approx(1e4 * dr).epsilon(1e-12));
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(daily_deaths(traj, -1.0), InvariantError);
        const auto odd = integrate(seeded_seir(), SeirParams{0.23, 0.14, 3.0}, 10.0, 0.3);
        CHECK_THROWS_AS(daily_deaths(odd, 1.0), InvariantError);
        const auto short_run = integrate(seeded_seir(), SeirParams{0.23, 0.14, 3.0}, 0.5, 0.05);
        CHECK_THROWS_AS(daily_deaths(short_run, 1.0), InvariantError);
    }
}

TEST_CASE("integrate rejects invalid arguments")
{
    const SeirParams p{0.23, 0.14, 3.0};
    CHECK_THROWS_AS(integrate(seeded_seir(), p, 10.0, 0.0), InvariantError);
    CHECK_THROWS_AS(integrate(seeded_seir(), p, 0.01, 0.05), InvariantError);
    CHECK_THROWS_AS(integrate(SeirState{0.5, 0.0, 0.0, 0.0}, p, 10.0), InvariantError);
    CHECK_THROWS_AS(integrate(SeirState{1.2, -0.2, 0.0, 0.0}, p, 10.0), InvariantError);
    CHECK_THROWS_AS(integrate(seeded_seir(), SeirParams{0.23, -1.0, 3.0}, 10.0), InvariantError);
    CHECK_THROWS_AS(integrate(seeded_seir(), SeirParams{0.23, 0.14, 0.0}, 10.0), InvariantError);
}

TEST_CASE("trajectory CSV export")
{
    const auto traj = integrate(seeded_seir(), SeirParams{0.23, 0.14, 3.0}, 2.0);
    std::ostringstream out;
    write_trajectory_csv(out, traj, 20);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,S,E,I,R");
    std::getline(in, line);
    CHECK(line == "0,0.99998,1e-05,1e-05,0");
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);

    std::ostringstream sir;
    write_trajectory_csv(sir, integrate(SirState{0.9, 0.1, 0.0}, SeirParams{0.2, 0.1, 1.0}, 1.0), 100);
    CHECK(sir.str().find("0,0.9,0,0.1,0\n") != std::string::npos);
}
