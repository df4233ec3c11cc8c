#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "holebox/ini.hpp"
#include "holebox/materials.hpp"
#include "holebox/numeric_qubit.hpp"

/// Parameter sweeps behind the command-line tool. Every sweep returns a CSV
/// table; grid points are independent and are evaluated in parallel, then
/// written in grid order.
namespace holebox {

/// Resolved run configuration: every known key with its default or override.
///
/// Sections: scenario, e0_sweep, lz_sweep, angle_map, strain_sweep, numeric,
/// convergence. Angles are in degrees, strains in percent.
class RunConfig {
 public:
    RunConfig();

    /// Apply every entry of a parsed file; unknown sections/keys and bad values throw ParseError.
    void load(const IniDocument& doc);
    void load_file(const std::filesystem::path& path);

    /// Override "section.key" with a textual value; throws ConfigError.
    void set(std::string_view dotted_key, std::string_view value);

    double number(std::string_view section, std::string_view key) const;
    long integer(std::string_view section, std::string_view key) const;
    const std::string& text(std::string_view section, std::string_view key) const;

    /// Full configuration in the file format accepted by load().
    std::string to_ini() const;
    /// FNV-1a 64-bit hash of to_ini().
    std::uint64_t hash() const;

 private:
    enum class Kind { number, integer, text };
    struct Entry {
        std::string section;
        std::string key;
        Kind kind;
        std::string value;
        std::string doc;
    };
    Entry& entry(std::string_view section, std::string_view key);
    const Entry& entry(std::string_view section, std::string_view key) const;
    static void check_value(const Entry& e, std::string_view value);

    std::vector<Entry> entries_;
};

struct CsvTable {
    std::vector<std::string> metadata;  ///< emitted as "# " lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);

/// Write `out` and the resolved configuration next to it as `<out>.config.ini`.
void write_outputs(const std::filesystem::path& out, const CsvTable& table, const RunConfig& config);

enum class SweepKind { materials_table, e0_sweep, lz_sweep, angle_map, strain_sweep, convergence };

std::string to_string(SweepKind kind);
std::vector<Tier> default_tiers(SweepKind kind);
/// Throws ConfigError if a tier is not supported by the sweep.
void check_tiers(SweepKind kind, const std::vector<Tier>& tiers);
/// Comma-separated list of tier names.
std::vector<Tier> parse_tier_list(std::string_view list);

/// Materials of the run: the built-in table, or scenario.materials_file when set.
std::vector<MaterialParams> run_materials(const RunConfig& config);

CsvTable run_materials_table(const std::vector<MaterialParams>& materials, const RunConfig& config);
CsvTable run_e0_sweep(const RunConfig& config, const std::vector<Tier>& tiers);
CsvTable run_lz_sweep(const RunConfig& config, const std::vector<Tier>& tiers);
CsvTable run_angle_map(const RunConfig& config, const std::vector<Tier>& tiers);
CsvTable run_strain_sweep(const RunConfig& config, const std::vector<Tier>& tiers);
/// f_R and f_L of the scenario for each cutoff in convergence.cutoffs.
CsvTable run_convergence(const RunConfig& config);

/// Parse "NxxNyxNz" triples separated by commas, e.g. "4x4x4,6x6x6".
std::vector<BasisCutoff> parse_cutoff_list(std::string_view list);

}  // namespace holebox
