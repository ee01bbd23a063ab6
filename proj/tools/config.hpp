#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace epiwave::cli {

struct ConfigEntry {
    std::string section; ///< subcommand prefix of "fit.top-k", empty when unprefixed
    std::string key;
    std::string value;
    int line = 0;
};

/// Plain `key=value` lines; `#` starts a comment, blank lines are skipped.
/// Keys may carry a `<subcommand>.` prefix. Throws ParseError.
std::vector<ConfigEntry> read_config(const std::filesystem::path& path);

} // namespace epiwave::cli
