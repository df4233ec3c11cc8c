#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace holebox {

/// Line-oriented key/value format shared by material files and run configs.
///
///     # comment
///     [section.name]
///     key = value   # trailing comment
///
/// Entries before the first header belong to a section with an empty name.
struct IniEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct IniSection {
    std::string name;
    std::size_t line = 0;
    std::vector<IniEntry> entries;

    const IniEntry* find(std::string_view key) const;
};

struct IniDocument {
    std::string source;
    std::vector<IniSection> sections;

    const IniSection* find(std::string_view name) const;
};

IniDocument parse_ini(std::istream& in, const std::string& source_name);
IniDocument parse_ini_file(const std::filesystem::path& path);

/// Strict number parsing; the whole string must be consumed.
std::optional<double> parse_double(std::string_view text);
std::optional<long> parse_long(std::string_view text);

}  // namespace holebox
