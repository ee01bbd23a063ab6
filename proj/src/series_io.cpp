#include "epiwave/series_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace epiwave {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <class Tag>
DatedSeries<Tag> read_csv(std::istream& in, const std::string& source)
{
    auto fail = [&](std::size_t line, const std::string& msg) -> ParseError {
        return ParseError(source + ":" + std::to_string(line) + ": " + msg);
    };

    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::optional<Date> start;
    Date prev{};
    std::vector<double> values;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "date,value") throw fail(line_no, "expected header 'date,value'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw fail(line_no, "expected two fields 'date,value'");
        }
        Date d;
        try {
            d = parse_date(trim(line.substr(0, comma)));
        } catch (const ParseError& e) {
            throw fail(line_no, e.what());
        }
        const auto field = trim(line.substr(comma + 1));
        const auto v = parse_number(field);
        if (!v || !std::isfinite(*v)) throw fail(line_no, "invalid value '" + std::string(field) + "'");
        if (!Tag::allow_negative && *v < 0.0) throw fail(line_no, "negative value " + std::string(field));

        if (start) {
            if (d == prev) throw fail(line_no, "duplicate date " + format_date(d));
            if (d < prev) throw fail(line_no, "date " + format_date(d) + " out of order");
            if (d != prev + std::chrono::days{1}) {
                throw fail(line_no, "interior gap: no data between " + format_date(prev) + " and " + format_date(d));
            }
        } else {
            start = d;
        }
        prev = d;
        values.push_back(*v);
    }
    if (in.bad()) throw ParseError(source + ": read error");
    if (!header_seen) throw ParseError(source + ": empty input (missing 'date,value' header)");
    if (!start) throw ParseError(source + ": no data rows");
    return DatedSeries<Tag>(*start, std::move(values));
}

template <class Tag>
DatedSeries<Tag> load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    return read_csv<Tag>(in, path.string());
}

} // namespace

std::string format_number(double v)
{
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view text)
{
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

DailyCountSeries read_count_csv(std::istream& in, const std::string& source)
{
    return read_csv<CountTag>(in, source);
}

ExcessSeries read_excess_csv(std::istream& in, const std::string& source)
{
    return read_csv<ExcessTag>(in, source);
}

DailyCountSeries load_series(const std::filesystem::path& path, InputFormat /*format*/)
{
    return load<CountTag>(path);
}

ExcessSeries load_excess_series(const std::filesystem::path& path, InputFormat /*format*/)
{
    return load<ExcessTag>(path);
}

template <class Tag>
void write_series_csv(std::ostream& out, const DatedSeries<Tag>& series)
{
    out << "date,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_date(series.date_at(i)) << ',' << format_number(series[i]) << '\n';
    }
}

template <class Tag>
void save_series(const std::filesystem::path& path, const DatedSeries<Tag>& series)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path.string() + ": cannot open for writing");
    write_series_csv(out, series);
}

template void write_series_csv(std::ostream&, const DailyCountSeries&);
template void write_series_csv(std::ostream&, const ExcessSeries&);
template void save_series(const std::filesystem::path&, const DailyCountSeries&);
template void save_series(const std::filesystem::path&, const ExcessSeries&);

} // namespace epiwave
