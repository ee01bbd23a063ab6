#include "cli.hpp"

#include "epiwave/fixtures.hpp"
#include "epiwave/series_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace epiwave;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("epiwave_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }
    std::string str() const { return path_.string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

template <class Tag>
void write(const std::string& path, const DatedSeries<Tag>& s)
{
    save_series(path, s);
}

DailyCountSeries constant_days(Date start, std::size_t days, double value)
{
    return DailyCountSeries(start, std::vector<double>(days, value));
}

} // namespace

TEST_CASE("finalsize prints the rounded final size")
{
    const auto r = run({"finalsize", "--r0", "2.5"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out == "0.893\n");

    const auto several = run({"finalsize", "--r0", "2.5", "--r0", "0.8"});
    CHECK(several.out == "0.893\n0.000\n");

    TempDir dir;
    const auto table = run({"finalsize", "--out", dir.str(), "--table", "first=2.5", "--table", "second=1.6"});
    CHECK(table.code == cli::kOk);
    CHECK(slurp(dir / "herd_immunity.csv") == "wave,r0,r_f_pct\nfirst,2.5,89.3\nsecond,1.6,64.2\n");

    const auto curve = run({"finalsize", "--out", dir.str(), "--curve-min", "1", "--curve-max", "7"});
    CHECK(curve.code == cli::kOk);
    CHECK(fs::exists(dir / "final_size_curve.csv"));

    CHECK(run({"finalsize"}).code == cli::kUsageError);
    CHECK(run({"finalsize", "--r0", "-2"}).code == cli::kInvariantError);
}

TEST_CASE("excess with identical reported and baseline inputs is zero")
{
    TempDir dir;
    write(dir / "reported.csv", constant_days(make_date(2020, 1, 1), 366, 300.0));
    write(dir / "history.csv", DailyCountSeries(make_date(2015, 1, 1),
                                                std::vector<double>(static_cast<std::size_t>(days_between(
                                                                        make_date(2015, 1, 1), make_date(2020, 1, 1))),
                                                                    300.0)));
    const auto r = run({"excess", "--out", dir.str(), "--reported", dir / "reported.csv", "--history",
                        dir / "history.csv"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("total_excess=0 ") == 0);
    std::ifstream in(dir / "excess.csv");
    const auto excess = read_excess_csv(in, "excess.csv");
    CHECK(excess.size() == 366 - 6);
    for (double v : excess.values()) CHECK(v == 0.0);
}

TEST_CASE("excess with per-year history files and explicit weights")
{
    TempDir dir;
    write(dir / "reported.csv", constant_days(make_date(2020, 1, 1), 366, 250.0));
    std::vector<std::string> args{"excess", "--quiet", "--out", dir.str(), "--reported", dir / "reported.csv"};
    for (int k = 1; k <= 5; ++k) {
        const int year = 2020 - k;
        const Date from = make_date(year, 1, 1);
        const auto days = static_cast<std::size_t>(days_between(from, make_date(year + 1, 1, 1)));
        const auto path = dir / ("h" + std::to_string(year) + ".csv");
        write(path, constant_days(from, days, 100.0 * k));
        args.push_back("--history");
        args.push_back(path);
    }
    args.push_back("--weights");
    args.push_back("0.4,0.3,0.2,0.05,0.05");
    const auto r = run(args);
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.empty());
    std::ifstream in(dir / "excess.csv");
    const auto excess = read_excess_csv(in, "excess.csv");
    for (double v : excess.values()) CHECK(v == doctest::Approx(45.0).epsilon(1e-12));

    args.back() = "0.5,0.3,0.1,0.05,0.04";
    CHECK(run(args).code == cli::kInvariantError);
}

TEST_CASE("malformed input is a parse error")
{
    TempDir dir;
    write_text(dir / "bad.csv", "date,value\n2020-01-01,12\n2020-01-02,abc\n");
    const auto r = run({"waves", "--out", dir.str(), "--excess", dir / "bad.csv"});
    CHECK(r.code == cli::kParseError);
    CHECK(r.err.find("bad.csv:3") != std::string::npos);

    CHECK(run({"waves", "--out", dir.str(), "--excess", dir / "missing.csv"}).code == cli::kParseError);
}

TEST_CASE("waves on flat and triangle input")
{
    TempDir dir;
    write(dir / "flat.csv", ExcessSeries(make_date(2020, 1, 1), std::vector<double>(100, 0.0)));
    REQUIRE(run({"waves", "--quiet", "--out", dir.str(), "--excess", dir / "flat.csv"}).code == cli::kOk);
    CHECK(slurp(dir / "waves.json") == "[]\n");

    write(dir / "triangle.csv", triangle_excess(make_date(2020, 1, 1)));
    const auto r = run({"waves", "--out", dir.str(), "--excess", dir / "triangle.csv"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out == "waves=1\n");
    const auto doc = nlohmann::json::parse(slurp(dir / "waves.json"));
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["peak"] == "2020-01-31");
    CHECK(doc[0]["rise_days"] == 17);
    CHECK(doc[0]["fall_days"] == 17);
}

TEST_CASE("excess output feeds waves")
{
    TempDir dir;
    REQUIRE(run({"excess", "--quiet", "--out", dir.str(), "--fixture", "synthetic-istanbul"}).code == cli::kOk);
    CHECK(fs::exists(dir / "fixture_reported.csv"));
    CHECK(fs::exists(dir / "fixture_history_2015.csv"));
    REQUIRE(run({"waves", "--quiet", "--out", dir.str(), "--excess", dir / "excess.csv"}).code == cli::kOk);
    const auto from_file = slurp(dir / "waves.json");
    TempDir direct;
    REQUIRE(run({"waves", "--quiet", "--out", direct.str(), "--fixture", "synthetic-istanbul"}).code == cli::kOk);
    CHECK(from_file == slurp(direct / "waves.json"));
    CHECK(nlohmann::json::parse(from_file).size() == 4);

    // The fixture files round-trip through the file-based excess path.
    TempDir again;
    std::vector<std::string> args{"excess", "--quiet", "--out", again.str(), "--reported", dir / "fixture_reported.csv"};
    for (int year = 2019; year >= 2015; --year) {
        args.push_back("--history");
        args.push_back(dir / ("fixture_history_" + std::to_string(year) + ".csv"));
    }
    REQUIRE(run(args).code == cli::kOk);
    CHECK(slurp(again / "excess.csv") == slurp(dir / "excess.csv"));
}

TEST_CASE("fit writes the report files")
{
    TempDir dir;
    const auto wave = synthetic_wave({0.25, 0.12, 3.0}, 5000.0, make_date(2020, 3, 1));
    write(dir / "wave.csv", wave);
    const auto r = run({"fit", "--out", dir.str(), "--series", dir / "wave.csv", "--beta", "0.2:0.3:11", "--eta",
                        "0.1:0.14:5", "--epsilon", "3", "--threads", "2", "--no-timestamp"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("best r0=2.083 beta=0.250000 eta=0.120000 epsilon=3.000") == 0);

    std::istringstream report(slurp(dir / "fit_report.csv"));
    std::string line;
    int rows = -1;
    while (std::getline(report, line)) ++rows;
    CHECK(rows == 10);
    CHECK(slurp(dir / "error_scan_beta.csv").rfind("param_value,min_error_pct\n", 0) == 0);
    CHECK(fs::exists(dir / "error_scan_eta.csv"));
    CHECK(fs::exists(dir / "error_scan_epsilon.csv"));
    CHECK(slurp(dir / "fit_curve.csv").rfind("date,observed,model\n2020-", 0) == 0);
    const auto meta = nlohmann::json::parse(slurp(dir / "fit_meta.json"));
    CHECK_FALSE(meta.contains("generated_at"));
    CHECK(meta["best"]["incubation_days"].get<double>() == doctest::Approx(1.0 / 3.0));

    const auto top3 = run({"fit", "--quiet", "--out", dir.str(), "--series", dir / "wave.csv", "--beta", "0.2:0.3:3",
                           "--eta", "0.1:0.14:3", "--epsilon", "3", "--top-k", "3"});
    CHECK(top3.code == cli::kOk);
    CHECK(run({"fit", "--out", dir.str(), "--series", dir / "wave.csv", "--beta", "0.3:0.2"}).code ==
          cli::kUsageError);
}

TEST_CASE("fit wave index out of range")
{
    TempDir dir;
    write(dir / "triangle.csv", triangle_excess(make_date(2020, 1, 1)));
    const auto r = run({"fit", "--out", dir.str(), "--excess", dir / "triangle.csv", "--wave", "1"});
    CHECK(r.code == cli::kUsageError);
    CHECK(r.err.find("out of range") != std::string::npos);
}

TEST_CASE("simulate")
{
    TempDir dir;
    const auto flat = run({"simulate", "--quiet", "--out", dir.str(), "--beta", "0.23", "--eta", "0.14", "--seed",
                           "0", "--days", "30"});
    REQUIRE(flat.code == cli::kOk);
    std::ifstream in(dir / "daily_deaths.csv");
    const auto deaths = read_count_csv(in, "daily_deaths.csv");
    CHECK(deaths.size() == 30);
    CHECK(deaths.start() == make_date(2020, 1, 1));
    for (double v : deaths.values()) CHECK(v == 0.0);

    const auto sir = run({"simulate", "--out", dir.str(), "--model", "sir", "--beta", "0.3", "--eta", "0.1",
                          "--days", "10", "--every", "5"});
    REQUIRE(sir.code == cli::kOk);
    CHECK(sir.out.find("r0=2.99999") == 0);
    std::istringstream traj(slurp(dir / "trajectory.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(traj, line)) ++rows;
    CHECK(rows == 4);

    CHECK(run({"simulate", "--eta", "0.1"}).code == cli::kUsageError);
    CHECK(run({"simulate", "--out", dir.str(), "--beta", "0.2", "--eta", "0.1", "--model", "abm"}).code ==
          cli::kUsageError);
    CHECK(run({"simulate", "--out", dir.str(), "--beta", "0.2", "--eta", "-0.1"}).code == cli::kInvariantError);
}

TEST_CASE("forecast")
{
    TempDir dir;
    const auto one = run({"forecast", "--quiet", "--out", dir.str(), "--params", "0.23,0.14,3,20000", "--start",
                          "2021-07-01", "--horizon", "60", "--no-timestamp"});
    REQUIRE(one.code == cli::kOk);
    std::istringstream csv(slurp(dir / "forecast.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "date,lower,central,upper");
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        const auto c = line.find(',', b + 1);
        const auto lower = line.substr(a + 1, b - a - 1);
        CHECK(lower == line.substr(b + 1, c - b - 1));
        CHECK(lower == line.substr(c + 1));
    }
    CHECK(rows == 60);
    const auto doc = nlohmann::json::parse(slurp(dir / "forecast_assumptions.json"));
    CHECK(doc["band_repaired"] == false);

    // Report priors, averaged over their best rows.
    write_text(dir / "a.csv", "r0,beta,eta,epsilon,kappa,error_pct\n2,0.2,0.1,3,100,1\n2.2,0.22,0.1,3,300,2\n");
    write_text(dir / "b.csv", "r0,beta,eta,epsilon,kappa,error_pct\n2,0.24,0.12,3,200,1\n");
    const auto two = run({"forecast", "--out", dir.str(), "--prior", dir / "a.csv", "--prior", dir / "b.csv",
                          "--start", "2021-07-01", "--average-top", "2"});
    REQUIRE(two.code == cli::kOk);
    const auto doc2 = nlohmann::json::parse(slurp(dir / "forecast_assumptions.json"));
    CHECK(doc2["central"]["beta"].get<double>() == doctest::Approx(0.225));
    CHECK(doc2["central"]["kappa"].get<double>() == doctest::Approx(200.0));
    CHECK(doc2.contains("generated_at"));

    CHECK(run({"forecast", "--out", dir.str(), "--params", "0.23,0.14,3,1"}).code == cli::kUsageError);
    CHECK(run({"forecast", "--out", dir.str(), "--start", "2021-07-01"}).code == cli::kUsageError);
    CHECK(run({"forecast", "--out", dir.str(), "--params", "0.23,0.14,3,1", "--start", "2021-13-01"}).code ==
          cli::kParseError);
}

TEST_CASE("config file values yield to flags")
{
    TempDir dir;
    write(dir / "triangle.csv", triangle_excess(make_date(2020, 1, 1)));
    write_text(dir / "run.conf", "# segmentation\nwaves.start-threshold = 150\nend-threshold=10\nquiet=true\n");
    const auto none = run({"waves", "--config", dir / "run.conf", "--out", dir.str(), "--excess", dir / "triangle.csv"});
    REQUIRE(none.code == cli::kOk);
    CHECK(none.out.empty());
    CHECK(slurp(dir / "waves.json") == "[]\n");

    const auto flag_wins = run({"waves", "--config", dir / "run.conf", "--out", dir.str(), "--excess",
                                dir / "triangle.csv", "--start-threshold", "10"});
    REQUIRE(flag_wins.code == cli::kOk);
    CHECK(nlohmann::json::parse(slurp(dir / "waves.json")).size() == 1);

    write_text(dir / "bad.conf", "waves.colour=blue\n");
    CHECK(run({"waves", "--config", dir / "bad.conf", "--excess", dir / "triangle.csv"}).code == cli::kUsageError);
    write_text(dir / "broken.conf", "no equals sign\n");
    CHECK(run({"waves", "--config", dir / "broken.conf", "--excess", dir / "triangle.csv"}).code ==
          cli::kParseError);
}

TEST_CASE("usage errors and help")
{
    CHECK(run({}).code == cli::kUsageError);
    CHECK(run({"bogus"}).code == cli::kUsageError);
    CHECK(run({"waves", "--no-such-flag"}).code == cli::kUsageError);
    const auto help = run({"--help"});
    CHECK(help.code == cli::kOk);
    CHECK(help.out.find("finalsize") != std::string::npos);
}
