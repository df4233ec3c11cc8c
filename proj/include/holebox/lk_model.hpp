#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "holebox/box_basis.hpp"
#include "holebox/materials.hpp"

/// Four-band Luttinger-Kohn Hamiltonian of a hole in a hard-wall box.
///
/// Operators are built symbolically as 4x4 arrays (in j_z) of separable
/// envelope operators, then projected onto a sine basis. Energies in meV.
namespace holebox {

using cplx = std::complex<double>;

/// Crystallographic orientation of the box edges; z is always [001].
enum class Orientation {
    dot_110,  ///< x || [110], y || [-110]
    dot_100,  ///< x || [100], y || [010]
};

/// Static fields. B in T with polar/azimuthal angles in radians; E0 and E_ac in mV/nm along +y.
/// theta is measured from z and phi from y towards x: b = (sin t sin p, sin t cos p, cos t).
struct FieldConfig {
    double B = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double E0 = 0.0;
    double E_ac = 0.0;

    Eigen::Vector3d direction() const;
    Eigen::Vector3d field_vector() const { return B * direction(); }
};

/// In-plane biaxial strain; eps_zz = -nu * eps_parallel follows from the material.
struct StrainConfig {
    double eps_parallel = 0.0;
};

/// Which physical terms a matrix contains.
struct TermSet {
    bool lk = false;
    bool electric = false;
    bool zeeman = false;
    bool paramagnetic = false;
    bool strain = false;

    TermSet& operator|=(const TermSet& o);
    friend bool operator==(const TermSet&, const TermSet&) = default;
};

/// Dense Hermitian matrix over the spinor sine basis of `cutoff`.
struct HamiltonianMatrix {
    BasisCutoff cutoff;
    TermSet terms;
    Eigen::MatrixXcd entries;

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(entries.rows()); }

    /// max |H - H^dagger| / max |H| (0 for the zero matrix).
    double hermiticity_residual() const;

    HamiltonianMatrix& operator+=(const HamiltonianMatrix& o);
    friend HamiltonianMatrix operator+(HamiltonianMatrix a, const HamiltonianMatrix& b) { return a += b; }
};

/// One-dimensional factor of a separable envelope operator.
enum class AxisOp : std::uint8_t {
    identity,
    k,   ///< -i d/du
    k2,  ///< -d^2/du^2
    u,   ///< position from the box centre
    ku,  ///< (k u + u k) / 2
};

struct EnvelopeTerm {
    cplx coeff;
    std::array<AxisOp, 3> ops{AxisOp::identity, AxisOp::identity, AxisOp::identity};
};

/// Sum of separable terms acting on the envelope.
using EnvelopeOperator = std::vector<EnvelopeTerm>;

/// 4x4 array of envelope operators in the (+3/2, +1/2, -1/2, -3/2) basis.
struct SpinOperator {
    std::array<std::array<EnvelopeOperator, kSpinComponents>, kSpinComponents> block;

    /// Set block (a, b) and its Hermitian partner (b, a).
    void set_hermitian_pair(int a, int b, EnvelopeOperator op);
};

/// Hermitian conjugate (every AxisOp is Hermitian and acts on its own axis).
EnvelopeOperator adjoint(const EnvelopeOperator& op);

/// Projection of a symbolic operator on the sine basis.
HamiltonianMatrix project(const SpinOperator& op, const BoxGeometry& geometry, const BasisCutoff& cutoff,
                          TermSet terms);

/// Matrix of one AxisOp on the first N sine functions of a box side L.
Eigen::MatrixXcd axis_table(AxisOp op, int N, double L);

inline constexpr std::size_t kDefaultMaxDimension = 8192;

/// Luttinger-Kohn kinetic operator (P, Q, R, S), positive hole dispersion.
SpinOperator lk_operator(const MaterialParams& m, Orientation orientation);

/// Terms of the LK operator linear in the vector potential A = B x r / 2 (gauge origin at the box centre).
SpinOperator paramagnetic_operator(const MaterialParams& m, Orientation orientation, const Eigen::Vector3d& B);

/// 2 kappa mu_B B.J on every envelope.
SpinOperator zeeman_operator(const MaterialParams& m, const Eigen::Vector3d& B);

/// -e E0 y.
SpinOperator electric_operator(double E0);

/// Bir-Pikus biaxial-strain shifts of the heavy- and light-hole components.
SpinOperator strain_operator(const MaterialParams& m, const StrainConfig& strain);

/// Heavy/light-hole band-edge shifts in meV (Bir-Pikus, biaxial strain).
struct StrainShifts {
    double heavy = 0.0;
    double light = 0.0;
};
StrainShifts strain_shifts(const MaterialParams& m, const StrainConfig& strain);

HamiltonianMatrix assemble_lk(const MaterialParams& m, const BoxGeometry& geometry, Orientation orientation,
                              const BasisCutoff& cutoff, std::size_t max_dimension = kDefaultMaxDimension);
HamiltonianMatrix assemble_electric(double E0, const BoxGeometry& geometry, const BasisCutoff& cutoff);
HamiltonianMatrix assemble_zeeman(const MaterialParams& m, double B, double theta, double phi,
                                  const BasisCutoff& cutoff);
HamiltonianMatrix assemble_zeeman(const MaterialParams& m, const Eigen::Vector3d& B, const BasisCutoff& cutoff);
HamiltonianMatrix assemble_paramagnetic(const MaterialParams& m, const BoxGeometry& geometry, Orientation orientation,
                                        double B, double theta, double phi, const BasisCutoff& cutoff);
HamiltonianMatrix assemble_paramagnetic(const MaterialParams& m, const BoxGeometry& geometry, Orientation orientation,
                                        const Eigen::Vector3d& B, const BasisCutoff& cutoff);
HamiltonianMatrix assemble_strain(const MaterialParams& m, const StrainConfig& strain, const BasisCutoff& cutoff);

/// The dipole operator y (nm), diagonal in j_z.
HamiltonianMatrix assemble_position_y(const BoxGeometry& geometry, const BasisCutoff& cutoff);

/// Field-free part: LK + static electric field (+ strain when eps_parallel != 0).
HamiltonianMatrix assemble_static(const MaterialParams& m, const BoxGeometry& geometry, Orientation orientation,
                                  const BasisCutoff& cutoff, double E0, const StrainConfig& strain = {},
                                  std::size_t max_dimension = kDefaultMaxDimension);

}  // namespace holebox
