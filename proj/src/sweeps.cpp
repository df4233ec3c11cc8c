#include "holebox/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "holebox/constants.hpp"
#include "holebox/errors.hpp"
#include "holebox/format.hpp"
#include "holebox/minimal_model.hpp"

namespace holebox {

namespace {

constexpr double kDeg = constants::pi / 180.0;

std::string trimmed(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view list, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto end = std::min(list.find(sep, start), list.size());
        out.push_back(trimmed(list.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

/// Evenly spaced grid including both ends.
std::vector<double> linspace(double lo, double hi, long count, const std::string& what) {
    if (count < 2) throw ConfigError(what + ": grid count must be at least 2");
    if (!(hi > lo)) throw ConfigError(what + ": grid maximum must exceed the minimum");
    std::vector<double> out(static_cast<std::size_t>(count));
    // Rounded to 12 significant digits so that e.g. 0.051 is not written as 0.051000000000000004.
    for (long i = 0; i < count; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", lo + (hi - lo) * double(i) / double(count - 1));
        out[static_cast<std::size_t>(i)] = std::strtod(buf, nullptr);
    }
    return out;
}

/// Evaluate fn(i) for i in [0, n) in parallel; the first exception by index is rethrown.
template <class Fn>
void parallel_points(std::size_t n, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Value of a tier that is undefined at this point (f_L = 0) rather than failed.
template <class Fn>
std::optional<double> absent_on_solver_error(Fn&& fn) {
    try {
        return fn();
    } catch (const PerturbationError&) {
        throw;
    } catch (const SolverError&) {
        return std::nullopt;
    }
}

struct Scenario {
    MaterialParams material;
    BoxGeometry geometry;
    Orientation orientation = Orientation::dot_110;
    FieldConfig fields;
    StrainConfig strain;
};

Orientation parse_orientation(const std::string& text) {
    if (text == "110") return Orientation::dot_110;
    if (text == "100") return Orientation::dot_100;
    throw ConfigError("scenario.orientation must be 110 or 100, got '" + text + "'");
}

Scenario scenario(const RunConfig& c) {
    Scenario s;
    s.material = find_material(run_materials(c), c.text("scenario", "material"));
    s.geometry = {c.number("scenario", "Lx"), c.number("scenario", "Ly"), c.number("scenario", "Lz")};
    validate(s.geometry);
    s.orientation = parse_orientation(c.text("scenario", "orientation"));
    s.fields.B = c.number("scenario", "B");
    s.fields.theta = c.number("scenario", "theta_deg") * kDeg;
    s.fields.phi = c.number("scenario", "phi_deg") * kDeg;
    s.fields.E0 = c.number("scenario", "E0");
    s.fields.E_ac = c.number("scenario", "E_ac");
    s.strain.eps_parallel = c.number("scenario", "eps_parallel_percent") / 100.0;
    return s;
}

ConvergedOptions converged_options(const RunConfig& c, bool paramagnetic) {
    ConvergedOptions o;
    o.cutoff = {static_cast<int>(c.integer("numeric", "Nx")), static_cast<int>(c.integer("numeric", "Ny")),
                static_cast<int>(c.integer("numeric", "Nz"))};
    validate(o.cutoff);
    o.n_excited = static_cast<int>(c.integer("numeric", "n_excited"));
    o.kramers_tolerance = c.number("numeric", "kramers_tolerance");
    o.paramagnetic = paramagnetic;
    return o;
}

bool is_converged(Tier t) { return t == Tier::converged_zeeman || t == Tier::converged_full; }

std::string join_tiers(const std::vector<Tier>& tiers) {
    std::string out;
    for (const auto& t : tiers) out += (out.empty() ? "" : ",") + to_string(t);
    return out.empty() ? "none" : out;
}

std::vector<std::string> metadata(SweepKind kind, const RunConfig& c, const std::vector<Tier>& tiers,
                                  const std::string& units) {
    std::ostringstream hash;
    hash << std::hex << std::setw(16) << std::setfill('0') << c.hash();
    return {"holebox " + to_string(kind), "config_hash: fnv1a64:" + hash.str(), "tiers: " + join_tiers(tiers),
            "units: " + units};
}

std::string fmt(double v) { return format_double(v); }

const char* kFrequencyUnits = "frequencies GHz, fields T and mV/nm, lengths nm, angles deg, strain percent";

}  // namespace

// ---------------------------------------------------------------- RunConfig

RunConfig::RunConfig() {
    auto add = [this](std::string section, std::string key, Kind kind, std::string value, std::string doc) {
        entries_.push_back({std::move(section), std::move(key), kind, std::move(value), std::move(doc)});
    };
    add("scenario", "material", Kind::text, "Si", "material name");
    add("scenario", "materials_file", Kind::text, "", "material file replacing the built-in table (empty: built-in)");
    add("scenario", "orientation", Kind::text, "110", "110 or 100");
    add("scenario", "Lx", Kind::number, "40", "nm");
    add("scenario", "Ly", Kind::number, "30", "nm");
    add("scenario", "Lz", Kind::number, "10", "nm");
    add("scenario", "B", Kind::number, "1", "T");
    add("scenario", "theta_deg", Kind::number, "45", "polar angle of B from z");
    add("scenario", "phi_deg", Kind::number, "0", "azimuth of B from y towards x");
    add("scenario", "E0", Kind::number, "0.1", "static field along y, mV/nm");
    add("scenario", "E_ac", Kind::number, "0.03", "drive amplitude along y, mV/nm");
    add("scenario", "eps_parallel_percent", Kind::number, "0", "biaxial strain, percent");
    add("e0_sweep", "min", Kind::number, "0", "mV/nm");
    add("e0_sweep", "max", Kind::number, "1", "mV/nm");
    add("e0_sweep", "count", Kind::integer, "41", "grid points");
    add("lz_sweep", "min", Kind::number, "1", "nm");
    add("lz_sweep", "max", Kind::number, "10", "nm");
    add("lz_sweep", "count", Kind::integer, "10", "grid points");
    add("angle_map", "theta_min", Kind::number, "0", "deg");
    add("angle_map", "theta_max", Kind::number, "90", "deg");
    add("angle_map", "theta_count", Kind::integer, "46", "grid points");
    add("angle_map", "phi_min", Kind::number, "0", "deg");
    add("angle_map", "phi_max", Kind::number, "180", "deg");
    add("angle_map", "phi_count", Kind::integer, "91", "grid points");
    add("strain_sweep", "min_percent", Kind::number, "-0.2", "percent");
    add("strain_sweep", "max_percent", Kind::number, "0.2", "percent");
    add("strain_sweep", "count", Kind::integer, "81", "grid points (the unstrained point is always added)");
    add("strain_sweep", "coarse_step_deg", Kind::number, "10", "angle grid of the optimal-B search");
    add("strain_sweep", "refine_tolerance_deg", Kind::number, "0.01", "final step of the local refinement");
    add("numeric", "Nx", Kind::integer, "8", "sine functions along x");
    add("numeric", "Ny", Kind::integer, "8", "sine functions along y");
    add("numeric", "Nz", Kind::integer, "5", "sine functions along z");
    add("numeric", "n_excited", Kind::integer, "40", "excited doublets in the sum over states");
    add("numeric", "kramers_tolerance", Kind::number, "1e-8", "meV");
    add("convergence", "cutoffs", Kind::text, "4x4x4,6x6x5,6x6x6,8x8x5,8x8x8", "Nx x Ny x Nz list");
}

RunConfig::Entry& RunConfig::entry(std::string_view section, std::string_view key) {
    for (auto& e : entries_)
        if (e.section == section && e.key == key) return e;
    throw ConfigError("unknown configuration key '" + std::string(section) + "." + std::string(key) + "'");
}

const RunConfig::Entry& RunConfig::entry(std::string_view section, std::string_view key) const {
    return const_cast<RunConfig*>(this)->entry(section, key);
}

void RunConfig::check_value(const Entry& e, std::string_view value) {
    const std::string name = e.section + "." + e.key;
    if (e.kind == Kind::number && !parse_double(value))
        throw ConfigError(name + ": expected a number, got '" + std::string(value) + "'");
    if (e.kind == Kind::integer && !parse_long(value))
        throw ConfigError(name + ": expected an integer, got '" + std::string(value) + "'");
}

void RunConfig::load(const IniDocument& doc) {
    for (const auto& section : doc.sections) {
        const bool known = std::any_of(entries_.begin(), entries_.end(),
                                       [&](const Entry& e) { return e.section == section.name; });
        if (!section.name.empty() && !known)
            throw ParseError(doc.source, section.line, "unknown section [" + section.name + "]");
        for (const auto& item : section.entries) {
            try {
                Entry& e = entry(section.name, item.key);
                check_value(e, item.value);
                e.value = item.value;
            } catch (const ConfigError& err) {
                throw ParseError(doc.source, item.line, err.what());
            }
        }
    }
}

void RunConfig::load_file(const std::filesystem::path& path) { load(parse_ini_file(path)); }

void RunConfig::set(std::string_view dotted_key, std::string_view value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string_view::npos) throw ConfigError("override '" + std::string(dotted_key) + "' needs section.key");
    Entry& e = entry(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
    const std::string v = trimmed(value);
    check_value(e, v);
    e.value = v;
}

double RunConfig::number(std::string_view section, std::string_view key) const {
    return *parse_double(entry(section, key).value);
}

long RunConfig::integer(std::string_view section, std::string_view key) const {
    return *parse_long(entry(section, key).value);
}

const std::string& RunConfig::text(std::string_view section, std::string_view key) const {
    return entry(section, key).value;
}

std::string RunConfig::to_ini() const {
    std::ostringstream out;
    std::string current;
    for (const auto& e : entries_) {
        if (e.section != current) {
            if (!current.empty()) out << '\n';
            out << '[' << e.section << "]\n";
            current = e.section;
        }
        out << e.key << " = " << e.value << "  # " << e.doc << '\n';
    }
    return out.str();
}

std::uint64_t RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : to_ini()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---------------------------------------------------------------- output

void write_csv(std::ostream& out, const CsvTable& table) {
    for (const auto& line : table.metadata) out << "# " << line << '\n';
    auto write_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    };
    write_row(table.header);
    for (const auto& row : table.rows) write_row(row);
}

void write_outputs(const std::filesystem::path& out, const CsvTable& table, const RunConfig& config) {
    std::ofstream csv(out, std::ios::binary);
    if (!csv) throw ConfigError("cannot write '" + out.string() + "'");
    write_csv(csv, table);
    if (!csv) throw ConfigError("error while writing '" + out.string() + "'");

    const auto sidecar = out.string() + ".config.ini";
    std::ofstream ini(sidecar, std::ios::binary);
    if (!ini) throw ConfigError("cannot write '" + sidecar + "'");
    ini << "# resolved configuration of " << out.filename().string() << '\n' << config.to_ini();
}

// ---------------------------------------------------------------- tiers

std::string to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::materials_table: return "materials-table";
        case SweepKind::e0_sweep: return "e0-sweep";
        case SweepKind::lz_sweep: return "lz-sweep";
        case SweepKind::angle_map: return "angle-map";
        case SweepKind::strain_sweep: return "strain-sweep";
        case SweepKind::convergence: return "convergence";
    }
    return "unknown";
}

std::vector<Tier> default_tiers(SweepKind kind) {
    switch (kind) {
        case SweepKind::materials_table: return {};
        case SweepKind::e0_sweep: return {Tier::minimal_exact, Tier::linearized, Tier::renormalized};
        case SweepKind::lz_sweep: return {Tier::analytic2, Tier::analytic4, Tier::linearized};
        case SweepKind::angle_map:
            return {Tier::analytic4, Tier::minimal_exact, Tier::converged_zeeman, Tier::converged_full};
        case SweepKind::strain_sweep: return {Tier::minimal_exact};
        case SweepKind::convergence: return {Tier::converged_full};
    }
    return {};
}

void check_tiers(SweepKind kind, const std::vector<Tier>& tiers) {
    std::vector<Tier> allowed;
    switch (kind) {
        case SweepKind::materials_table: break;
        case SweepKind::e0_sweep: allowed = {Tier::minimal_exact, Tier::linearized, Tier::renormalized}; break;
        case SweepKind::lz_sweep:
            allowed = {Tier::analytic2,     Tier::analytic4,        Tier::linearized,    Tier::renormalized,
                       Tier::minimal_exact, Tier::converged_zeeman, Tier::converged_full};
            break;
        case SweepKind::angle_map:
            allowed = {Tier::analytic2, Tier::analytic4, Tier::minimal_exact, Tier::converged_zeeman,
                       Tier::converged_full};
            break;
        case SweepKind::strain_sweep:
            allowed = {Tier::minimal_exact, Tier::converged_zeeman, Tier::converged_full};
            break;
        case SweepKind::convergence: allowed = {Tier::converged_zeeman, Tier::converged_full}; break;
    }
    for (Tier t : tiers)
        if (std::find(allowed.begin(), allowed.end(), t) == allowed.end())
            throw ConfigError("tier '" + to_string(t) + "' is not available for " + to_string(kind));
    for (std::size_t i = 0; i < tiers.size(); ++i)
        for (std::size_t j = i + 1; j < tiers.size(); ++j)
            if (tiers[i] == tiers[j]) throw ConfigError("tier '" + to_string(tiers[i]) + "' listed twice");
}

std::vector<Tier> parse_tier_list(std::string_view list) {
    std::vector<Tier> out;
    for (const auto& name : split(list, ',')) out.push_back(parse_tier(name));
    return out;
}

std::vector<BasisCutoff> parse_cutoff_list(std::string_view list) {
    std::vector<BasisCutoff> out;
    for (const auto& item : split(list, ',')) {
        const auto parts = split(item, 'x');
        std::optional<long> n[3];
        if (parts.size() == 3)
            for (int i = 0; i < 3; ++i) n[i] = parse_long(parts[static_cast<std::size_t>(i)]);
        if (!n[0] || !n[1] || !n[2]) throw ConfigError("bad cutoff '" + item + "' (expected e.g. 6x6x5)");
        BasisCutoff c{static_cast<int>(*n[0]), static_cast<int>(*n[1]), static_cast<int>(*n[2])};
        validate(c);
        out.push_back(c);
    }
    if (out.empty()) throw ConfigError("empty cutoff list");
    return out;
}

std::vector<MaterialParams> run_materials(const RunConfig& config) {
    const auto& file = config.text("scenario", "materials_file");
    return file.empty() ? builtin_materials() : load_materials(file);
}

// ---------------------------------------------------------------- sweeps

CsvTable run_materials_table(const std::vector<MaterialParams>& materials, const RunConfig& config) {
    CsvTable t;
    t.metadata = metadata(SweepKind::materials_table, config, {}, "E_g and Delta eV, masses m0, zeta values x100");
    t.header = {"material", "E_g", "Delta_SO", "gamma1", "gamma2", "gamma3", "m_z", "m_xy", "kappa",
                "zeta_110_x100", "zeta_100_x100", "zeta_prime_110_x100", "zeta_prime_100_x100"};
    for (const auto& m : materials) {
        const auto f = figures_of_merit(m);
        t.rows.push_back({m.name, fmt(m.E_g), fmt(m.Delta_SO), fmt(m.gamma1), fmt(m.gamma2), fmt(m.gamma3),
                          fmt(f.m_z), fmt(f.m_xy), fmt(m.kappa), fmt(100.0 * f.zeta_110), fmt(100.0 * f.zeta_100),
                          fmt(100.0 * f.zeta_prime_110), fmt(100.0 * f.zeta_prime_100)});
    }
    return t;
}

CsvTable run_e0_sweep(const RunConfig& config, const std::vector<Tier>& tiers) {
    check_tiers(SweepKind::e0_sweep, tiers);
    const Scenario s = scenario(config);
    const auto grid = linspace(config.number("e0_sweep", "min"), config.number("e0_sweep", "max"),
                               config.integer("e0_sweep", "count"), "e0_sweep");
    CsvTable t;
    t.metadata = metadata(SweepKind::e0_sweep, config, tiers, kFrequencyUnits);
    t.metadata.push_back("E_max: " + fmt(e_max(s.material, s.geometry, s.orientation, EmaxModel::general)));
    t.header = {"E0"};
    for (Tier tier : tiers) t.header.push_back("f_R_" + to_string(tier));
    t.rows.resize(grid.size());

    parallel_points(grid.size(), [&](std::size_t i) {
        FieldConfig f = s.fields;
        f.E0 = grid[i];
        std::vector<std::string> row{fmt(grid[i])};
        std::optional<double> linear;
        for (Tier tier : tiers) {
            std::optional<double> v;
            if (tier == Tier::minimal_exact) {
                v = absent_on_solver_error(
                    [&] { return minimal_exact_rabi(s.material, s.geometry, s.orientation, f, s.strain); });
            } else {
                if (!linear) linear = rabi_linearized(s.material, s.geometry, s.orientation, f, s.strain);
                v = tier == Tier::linearized
                        ? *linear
                        : renormalized_rabi(*linear, f.E0, s.geometry, s.material, s.orientation);
            }
            row.push_back(format_optional(v));
        }
        t.rows[i] = std::move(row);
    });
    return t;
}

CsvTable run_lz_sweep(const RunConfig& config, const std::vector<Tier>& tiers) {
    check_tiers(SweepKind::lz_sweep, tiers);
    const Scenario s = scenario(config);
    const auto grid = linspace(config.number("lz_sweep", "min"), config.number("lz_sweep", "max"),
                               config.integer("lz_sweep", "count"), "lz_sweep");
    CsvTable t;
    t.metadata = metadata(SweepKind::lz_sweep, config, tiers, kFrequencyUnits);
    t.header = {"Lz"};
    for (Tier tier : tiers) t.header.push_back("f_R_" + to_string(tier));
    t.rows.resize(grid.size());

    parallel_points(grid.size(), [&](std::size_t i) {
        BoxGeometry g = s.geometry;
        g.Lz = grid[i];
        std::vector<std::string> row{fmt(g.Lz)};
        for (Tier tier : tiers) {
            std::optional<double> v;
            switch (tier) {
                case Tier::analytic2:
                case Tier::analytic4:
                    v = rabi_thin_dot(s.material, g, s.orientation, s.fields, tier == Tier::analytic2 ? 2 : 4,
                                      s.strain);
                    break;
                case Tier::linearized: v = rabi_linearized(s.material, g, s.orientation, s.fields, s.strain); break;
                case Tier::renormalized:
                    v = renormalized_rabi(rabi_linearized(s.material, g, s.orientation, s.fields, s.strain),
                                          s.fields.E0, g, s.material, s.orientation);
                    break;
                case Tier::minimal_exact:
                    v = absent_on_solver_error(
                        [&] { return minimal_exact_rabi(s.material, g, s.orientation, s.fields, s.strain); });
                    break;
                case Tier::converged_zeeman:
                case Tier::converged_full: {
                    const ConvergedQubit q(s.material, g, s.orientation, s.fields.E0, s.strain,
                                           converged_options(config, tier == Tier::converged_full));
                    v = q.evaluate(s.fields.field_vector(), s.fields.E_ac).f_R;
                    break;
                }
            }
            row.push_back(format_optional(v));
        }
        t.rows[i] = std::move(row);
    });
    return t;
}

CsvTable run_angle_map(const RunConfig& config, const std::vector<Tier>& tiers) {
    check_tiers(SweepKind::angle_map, tiers);
    const Scenario s = scenario(config);
    const auto thetas = linspace(config.number("angle_map", "theta_min"), config.number("angle_map", "theta_max"),
                                 config.integer("angle_map", "theta_count"), "angle_map theta");
    const auto phis = linspace(config.number("angle_map", "phi_min"), config.number("angle_map", "phi_max"),
                               config.integer("angle_map", "phi_count"), "angle_map phi");

    // Field-independent work is done once per tier.
    std::optional<MinimalQubit> minimal;
    std::optional<ConvergedQubit> zeeman_only, full;
    for (Tier tier : tiers) {
        if (tier == Tier::minimal_exact) minimal.emplace(s.material, s.geometry, s.orientation, s.fields.E0, s.strain);
        if (tier == Tier::converged_zeeman)
            zeeman_only.emplace(s.material, s.geometry, s.orientation, s.fields.E0, s.strain,
                                converged_options(config, false));
        if (tier == Tier::converged_full)
            full.emplace(s.material, s.geometry, s.orientation, s.fields.E0, s.strain, converged_options(config, true));
    }

    CsvTable t;
    t.metadata = metadata(SweepKind::angle_map, config, tiers, kFrequencyUnits);
    t.header = {"theta_deg", "phi_deg"};
    for (Tier tier : tiers) {
        t.header.push_back("f_R_" + to_string(tier));
        if (tier == Tier::minimal_exact || is_converged(tier)) t.header.push_back("f_L_" + to_string(tier));
    }
    t.rows.resize(thetas.size() * phis.size());

    parallel_points(t.rows.size(), [&](std::size_t idx) {
        FieldConfig f = s.fields;
        f.theta = thetas[idx / phis.size()] * kDeg;
        f.phi = phis[idx % phis.size()] * kDeg;
        const Eigen::Vector3d B = f.field_vector();
        std::vector<std::string> row{fmt(thetas[idx / phis.size()]), fmt(phis[idx % phis.size()])};
        for (Tier tier : tiers) {
            switch (tier) {
                case Tier::analytic2:
                case Tier::analytic4:
                    row.push_back(fmt(rabi_thin_dot(s.material, s.geometry, s.orientation, f,
                                                    tier == Tier::analytic2 ? 2 : 4, s.strain)));
                    break;
                case Tier::minimal_exact:
                    row.push_back(format_optional(absent_on_solver_error([&] { return minimal->rabi(B, f.E_ac); })));
                    row.push_back(fmt(minimal->larmor(B)));
                    break;
                default: {
                    const auto& q = tier == Tier::converged_full ? *full : *zeeman_only;
                    const RabiResult r = q.evaluate(B, f.E_ac);
                    row.push_back(format_optional(r.f_R));
                    row.push_back(fmt(r.f_L));
                }
            }
        }
        t.rows[idx] = std::move(row);
    });
    return t;
}

namespace {

struct Optimum {
    double value = -1.0;  // -1: no defined value found
    double theta = 0.0;
    double phi = 0.0;
};

/// Maximize f(theta, phi) over theta in [0, 90], phi in [0, 180] (degrees): coarse grid, then pattern search.
template <class Fn>
Optimum maximize_over_direction(Fn&& f, double coarse_step, double tolerance) {
    auto eval = [&](double th, double ph) { return f(th, ph).value_or(-1.0); };
    Optimum best;
    const int nt = static_cast<int>(std::ceil(90.0 / coarse_step));
    const int np = static_cast<int>(std::ceil(180.0 / coarse_step));
    for (int i = 0; i <= nt; ++i) {
        for (int j = 0; j <= np; ++j) {
            const double th = std::min(90.0, i * coarse_step), ph = std::min(180.0, j * coarse_step);
            const double v = eval(th, ph);
            if (v > best.value) best = {v, th, ph};
        }
    }
    for (double step = 0.5 * coarse_step; step >= tolerance; step *= 0.5) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (const auto& [dt, dp] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                const double th = std::clamp(best.theta + dt * step, 0.0, 90.0);
                const double ph = std::clamp(best.phi + dp * step, 0.0, 180.0);
                const double v = eval(th, ph);
                if (v > best.value) {
                    best = {v, th, ph};
                    moved = true;
                }
            }
        }
    }
    return best;
}

}  // namespace

CsvTable run_strain_sweep(const RunConfig& config, const std::vector<Tier>& tiers) {
    check_tiers(SweepKind::strain_sweep, tiers);
    const Scenario s = scenario(config);
    require_strain_parameters(s.material);
    auto grid = linspace(config.number("strain_sweep", "min_percent"), config.number("strain_sweep", "max_percent"),
                         config.integer("strain_sweep", "count"), "strain_sweep");
    if (std::find(grid.begin(), grid.end(), 0.0) == grid.end()) {
        grid.push_back(0.0);
        std::sort(grid.begin(), grid.end());
    }
    const double coarse = config.number("strain_sweep", "coarse_step_deg");
    const double tolerance = config.number("strain_sweep", "refine_tolerance_deg");
    if (!(coarse > 0.0) || !(tolerance > 0.0)) throw ConfigError("strain_sweep angle steps must be positive");

    CsvTable t;
    t.metadata = metadata(SweepKind::strain_sweep, config, tiers, kFrequencyUnits);
    t.metadata.push_back("eps_divergence_percent: " + fmt(100.0 * strain_divergence(s.material, s.geometry.Lz)));
    t.header = {"eps_parallel_percent", "reference", "heavy_weight", "Lz2_eff", "Lz_eff"};
    for (Tier tier : tiers) {
        t.header.push_back("f_R_" + to_string(tier));
        t.header.push_back("theta_opt_deg_" + to_string(tier));
        t.header.push_back("phi_opt_deg_" + to_string(tier));
    }
    t.rows.resize(grid.size());

    parallel_points(grid.size(), [&](std::size_t i) {
        const StrainConfig strain{grid[i] / 100.0};
        const MinimalQubit minimal(s.material, s.geometry, s.orientation, s.fields.E0, strain);
        const double lz2 = strain_equivalent_height(s.material, s.geometry.Lz, strain.eps_parallel);
        std::vector<std::string> row{fmt(grid[i]), grid[i] == 0.0 ? "1" : "0", fmt(minimal.ground_heavy_weight()),
                                     std::isfinite(lz2) ? fmt(lz2) : "",
                                     std::isfinite(lz2) ? fmt(std::sqrt(std::abs(lz2))) : ""};
        for (Tier tier : tiers) {
            std::optional<ConvergedQubit> q;
            if (is_converged(tier))
                q.emplace(s.material, s.geometry, s.orientation, s.fields.E0, strain,
                          converged_options(config, tier == Tier::converged_full));
            auto f = [&](double th, double ph) -> std::optional<double> {
                const Eigen::Vector3d B = FieldConfig{s.fields.B, th * kDeg, ph * kDeg}.field_vector();
                if (q) return q->evaluate(B, s.fields.E_ac).f_R;
                return absent_on_solver_error([&] { return minimal.rabi(B, s.fields.E_ac); });
            };
            const Optimum best = maximize_over_direction(f, coarse, tolerance);
            if (best.value < 0.0) {
                row.insert(row.end(), {"", "", ""});
            } else {
                row.insert(row.end(), {fmt(best.value), fmt(best.theta), fmt(best.phi)});
            }
        }
        t.rows[i] = std::move(row);
    });
    return t;
}

CsvTable run_convergence(const RunConfig& config) {
    const Scenario s = scenario(config);
    const auto cutoffs = parse_cutoff_list(config.text("convergence", "cutoffs"));
    const std::vector<Tier> tiers{Tier::converged_zeeman, Tier::converged_full};

    CsvTable t;
    t.metadata = metadata(SweepKind::convergence, config, tiers, kFrequencyUnits);
    t.header = {"Nx", "Ny", "Nz", "dimension", "excited_doublets"};
    for (Tier tier : tiers)
        for (const char* col : {"f_R_", "f_L_", "tail_fraction_", "rel_change_"})
            t.header.push_back(col + to_string(tier));
    t.rows.resize(cutoffs.size());

    std::vector<std::array<std::optional<double>, 2>> fr(cutoffs.size());
    parallel_points(cutoffs.size(), [&](std::size_t i) {
        std::vector<std::string> row{std::to_string(cutoffs[i].Nx), std::to_string(cutoffs[i].Ny),
                                     std::to_string(cutoffs[i].Nz), std::to_string(cutoffs[i].dimension())};
        for (std::size_t k = 0; k < tiers.size(); ++k) {
            ConvergedOptions o = converged_options(config, tiers[k] == Tier::converged_full);
            o.cutoff = cutoffs[i];
            const ConvergedQubit q(s.material, s.geometry, s.orientation, s.fields.E0, s.strain, o);
            if (k == 0) row.push_back(std::to_string(q.excited_count()));
            const RabiResult r = q.evaluate(s.fields.field_vector(), s.fields.E_ac);
            fr[i][k] = r.f_R;
            row.insert(row.end(), {format_optional(r.f_R), fmt(r.f_L), fmt(r.tail_fraction), ""});
        }
        t.rows[i] = std::move(row);
    });
    // Relative change with respect to the previous cutoff of the list.
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        for (std::size_t k = 0; k < tiers.size(); ++k)
            if (fr[i][k] && fr[i - 1][k] && *fr[i][k] != 0.0)
                t.rows[i][5 + 4 * k + 3] = fmt(std::abs(*fr[i][k] - *fr[i - 1][k]) / *fr[i][k]);
    return t;
}

}  // namespace holebox
