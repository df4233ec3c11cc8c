#include "holebox/materials.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "holebox/errors.hpp"
#include "holebox/format.hpp"
#include "holebox/ini.hpp"

namespace holebox {

namespace {

std::string label(const MaterialParams& m) { return "material '" + m.name + "': "; }

constexpr std::string_view kSectionPrefix = "material.";

}  // namespace

void validate(const MaterialParams& m) {
    if (m.name.empty()) throw InvariantError("material with empty name");
    auto fail = [&](const std::string& what) {
        throw InvariantError(label(m) + what + " violated (gamma1=" + format_double(m.gamma1) +
                             ", gamma2=" + format_double(m.gamma2) + ", gamma3=" + format_double(m.gamma3) + ")");
    };
    if (!std::isfinite(m.gamma1) || !std::isfinite(m.gamma2) || !std::isfinite(m.gamma3) || !std::isfinite(m.kappa))
        throw InvariantError(label(m) + "non-finite parameter");
    if (!(m.gamma2 > 0.0)) fail("gamma2 > 0");
    if (!(m.gamma1 > 2.0 * m.gamma2)) fail("gamma1 > 2·gamma2");
    if (!(m.gamma3 > 0.0)) fail("gamma3 > 0");
}

void require_strain_parameters(const MaterialParams& m) {
    if (!m.nu) throw InvariantError(label(m) + "strain requested but nu is not set");
    if (!m.b_v) throw InvariantError(label(m) + "strain requested but b_v is not set");
}

FigureOfMerit figures_of_merit(const MaterialParams& m) {
    if (m.gamma2 == 0.0) throw InvariantError(label(m) + "gamma2 = 0");
    const double g12 = m.gamma1 + m.gamma2;
    const double anisotropy = m.gamma3 / m.gamma2;
    const double abs_kappa = std::abs(m.kappa);

    FigureOfMerit f;
    f.zeta_100 = abs_kappa / (g12 * g12);
    f.zeta_110 = anisotropy * f.zeta_100;
    f.zeta_prime_100 = 1.0 / g12;
    f.zeta_prime_110 = anisotropy / g12;
    f.m_z = 1.0 / (m.gamma1 - 2.0 * m.gamma2);
    f.m_xy = 1.0 / g12;
    return f;
}

std::vector<MaterialParams> builtin_materials() {
    auto row = [](const char* name, double g1, double g2, double g3, double kappa, double E_g, double so) {
        MaterialParams m;
        m.name = name;
        m.gamma1 = g1;
        m.gamma2 = g2;
        m.gamma3 = g3;
        m.kappa = kappa;
        m.E_g = E_g;
        m.Delta_SO = so;
        return m;
    };
    std::vector<MaterialParams> list{
        row("Si", 4.285, 0.339, 1.446, -0.42, 4.34, 0.044),
        row("Ge", 13.38, 4.24, 5.69, 3.41, 0.89, 0.29),
        row("InP", 4.95, 1.65, 2.35, 0.97, 1.42, 0.11),
        row("GaAs", 6.85, 2.10, 2.90, 1.20, 1.52, 0.34),
        row("InAs", 20.40, 8.30, 9.10, 7.60, 0.42, 0.41),
        row("InSb", 37.10, 16.50, 17.70, 15.60, 0.24, 0.80),
    };
    list[0].nu = 0.77;
    list[0].b_v = -2.1;
    return list;
}

const MaterialParams& find_material(const std::vector<MaterialParams>& list, std::string_view name) {
    for (const auto& m : list)
        if (m.name == name) return m;
    throw ConfigError("unknown material '" + std::string(name) + "'");
}

std::vector<MaterialParams> parse_materials(std::istream& in, const std::string& source_name) {
    const auto doc = parse_ini(in, source_name);
    std::vector<MaterialParams> out;

    for (const auto& section : doc.sections) {
        if (section.name.empty()) {
            if (!section.entries.empty())
                throw ParseError(source_name, section.entries.front().line, "key outside of a [material.<name>] block");
            continue;
        }
        if (!section.name.starts_with(kSectionPrefix) || section.name.size() == kSectionPrefix.size())
            throw ParseError(source_name, section.line, "expected [material.<name>], got [" + section.name + "]");

        MaterialParams m;
        m.name = section.name.substr(kSectionPrefix.size());
        for (const auto& other : out)
            if (other.name == m.name)
                throw ParseError(source_name, section.line, "duplicate material '" + m.name + "'");

        bool seen_g1 = false, seen_g2 = false, seen_g3 = false, seen_kappa = false;
        for (const auto& e : section.entries) {
            const auto value = parse_double(e.value);
            if (!value) throw ParseError(source_name, e.line, "'" + e.key + "' is not a number: '" + e.value + "'");
            if (e.key == "gamma1") {
                m.gamma1 = *value;
                seen_g1 = true;
            } else if (e.key == "gamma2") {
                m.gamma2 = *value;
                seen_g2 = true;
            } else if (e.key == "gamma3") {
                m.gamma3 = *value;
                seen_g3 = true;
            } else if (e.key == "kappa") {
                m.kappa = *value;
                seen_kappa = true;
            } else if (e.key == "E_g") {
                m.E_g = *value;
            } else if (e.key == "Delta_SO") {
                m.Delta_SO = *value;
            } else if (e.key == "nu") {
                m.nu = *value;
            } else if (e.key == "b_v") {
                m.b_v = *value;
            } else if (e.key == "a_v") {
                m.a_v = *value;
            } else {
                throw ParseError(source_name, e.line, "unknown field '" + e.key + "'");
            }
        }
        const char* missing = !seen_g1 ? "gamma1" : !seen_g2 ? "gamma2" : !seen_g3 ? "gamma3" : !seen_kappa ? "kappa" : nullptr;
        if (missing != nullptr)
            throw ParseError(source_name, section.line, "material '" + m.name + "' is missing '" + missing + "'");
        validate(m);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<MaterialParams> load_materials(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open material file '" + path.string() + "'");
    return parse_materials(in, path.string());
}

void write_materials(std::ostream& out, const std::vector<MaterialParams>& materials) {
    bool first = true;
    for (const auto& m : materials) {
        if (!first) out << '\n';
        first = false;
        out << "[material." << m.name << "]\n";
        out << "gamma1 = " << format_double(m.gamma1) << '\n';
        out << "gamma2 = " << format_double(m.gamma2) << '\n';
        out << "gamma3 = " << format_double(m.gamma3) << '\n';
        out << "kappa = " << format_double(m.kappa) << '\n';
        out << "E_g = " << format_double(m.E_g) << '\n';
        out << "Delta_SO = " << format_double(m.Delta_SO) << '\n';
        if (m.nu) out << "nu = " << format_double(*m.nu) << '\n';
        if (m.b_v) out << "b_v = " << format_double(*m.b_v) << '\n';
        if (m.a_v != 0.0) out << "a_v = " << format_double(m.a_v) << '\n';
    }
}

}  // namespace holebox
