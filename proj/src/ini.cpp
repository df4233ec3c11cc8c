#include "holebox/ini.hpp"

#include <charconv>
#include <fstream>

#include "holebox/errors.hpp"

namespace holebox {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

const IniEntry* IniSection::find(std::string_view key) const {
    for (const auto& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

const IniSection* IniDocument::find(std::string_view name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

IniDocument parse_ini(std::istream& in, const std::string& source_name) {
    IniDocument doc;
    doc.source = source_name;
    doc.sections.push_back(IniSection{"", 0, {}});

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(source_name, line_no, "unterminated section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw ParseError(source_name, line_no, "empty section name");
            for (const auto& s : doc.sections)
                if (s.name == name)
                    throw ParseError(source_name, line_no,
                                     "duplicate section [" + std::string(name) + "] (first at line " +
                                         std::to_string(s.line) + ")");
            doc.sections.push_back(IniSection{std::string(name), line_no, {}});
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source_name, line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(source_name, line_no, "empty key");
        auto& section = doc.sections.back();
        if (section.find(key) != nullptr)
            throw ParseError(source_name, line_no, "duplicate key '" + std::string(key) + "'");
        section.entries.push_back(IniEntry{std::string(key), std::string(value), line_no});
    }
    return doc;
}

IniDocument parse_ini_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    return parse_ini(in, path.string());
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
    return value;
}

std::optional<long> parse_long(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    long value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
    return value;
}

}  // namespace holebox
