#pragma once

#include "epiwave/series.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace epiwave {

enum class InputFormat { csv };

/// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double v);

/// Parses a decimal number; the whole text must be consumed.
std::optional<double> parse_number(std::string_view text);

/// Reads `date,value` CSV. Errors carry `source:line:` prefixes and are
/// thrown as ParseError: unreadable input, malformed rows, duplicate or
/// out-of-order dates, interior gaps, and (for count series) negative values.
DailyCountSeries read_count_csv(std::istream& in, const std::string& source = "<stream>");
ExcessSeries read_excess_csv(std::istream& in, const std::string& source = "<stream>");

DailyCountSeries load_series(const std::filesystem::path& path, InputFormat format = InputFormat::csv);
ExcessSeries load_excess_series(const std::filesystem::path& path, InputFormat format = InputFormat::csv);

template <class Tag>
void write_series_csv(std::ostream& out, const DatedSeries<Tag>& series);

template <class Tag>
void save_series(const std::filesystem::path& path, const DatedSeries<Tag>& series);

} // namespace epiwave
