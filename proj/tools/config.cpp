#include "config.hpp"

#include "epiwave/errors.hpp"

#include <fstream>

namespace epiwave::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<ConfigEntry> read_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open config file");
    std::vector<ConfigEntry> entries;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        }
        ConfigEntry e;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = line_no;
        if (const auto dot = e.key.find('.'); dot != std::string::npos) {
            e.section = e.key.substr(0, dot);
            e.key = e.key.substr(dot + 1);
        }
        if (e.key.empty()) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": empty key");
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace epiwave::cli
