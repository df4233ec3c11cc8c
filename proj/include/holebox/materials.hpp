#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace holebox {

/// Valence-band parameters of one host material.
///
/// Luttinger parameters and kappa are dimensionless. E_g and Delta_SO are
/// kept for reference only. Deformation potentials are in eV.
struct MaterialParams {
    std::string name;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
    double kappa = 0.0;
    double E_g = 0.0;       ///< eV
    double Delta_SO = 0.0;  ///< eV
    std::optional<double> nu;   ///< biaxial Poisson ratio 2c12/c11
    std::optional<double> b_v;  ///< uniaxial deformation potential, eV
    double a_v = 0.0;           ///< hydrostatic deformation potential, eV

    bool has_strain_parameters() const noexcept { return nu.has_value() && b_v.has_value(); }

    friend bool operator==(const MaterialParams&, const MaterialParams&) = default;
};

/// Throws InvariantError naming the first violated constraint.
void validate(const MaterialParams& m);

/// Throws InvariantError naming the material when nu or b_v is missing.
void require_strain_parameters(const MaterialParams& m);

/// Orientation/material figures of merit for the Rabi frequency.
///
/// zeta sets the Rabi scale at fixed fields, zeta_prime at fixed Larmor
/// frequency and fixed s/p_y mixing. Masses are in units of m0.
struct FigureOfMerit {
    double zeta_110 = 0.0;
    double zeta_100 = 0.0;
    double zeta_prime_110 = 0.0;
    double zeta_prime_100 = 0.0;
    double m_z = 0.0;
    double m_xy = 0.0;
};

FigureOfMerit figures_of_merit(const MaterialParams& m);

/// Si, Ge, InP, GaAs, InAs, InSb in that order.
std::vector<MaterialParams> builtin_materials();

/// Look up a material by name (case-sensitive). Throws ConfigError if absent.
const MaterialParams& find_material(const std::vector<MaterialParams>& list, std::string_view name);

/// Read `[material.<name>]` blocks. Records are validated and names must be unique.
std::vector<MaterialParams> load_materials(const std::filesystem::path& path);
std::vector<MaterialParams> parse_materials(std::istream& in, const std::string& source_name);

/// Emit the file format read by load_materials.
void write_materials(std::ostream& out, const std::vector<MaterialParams>& materials);

}  // namespace holebox
