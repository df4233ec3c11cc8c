#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <utility>

#include "holebox/box_basis.hpp"
#include "holebox/lk_model.hpp"
#include "holebox/materials.hpp"

/// Closed-form hole qubit in the minimal basis {s, p_y} x {HH, LH} x {pseudo-spin}.
///
/// The s (n_y = 1) and p_y (n_y = 2) subbands are labelled 1 and 2. Each
/// subband splits into a mostly heavy-hole |i-> and a mostly light-hole |i+>
/// state, both Kramers-degenerate.
namespace holebox {

/// Diagonal LK elements of the s (1) and p_y (2) subbands, meV.
struct SubbandParams {
    double P1 = 0.0, Q1 = 0.0, R1 = 0.0;
    double P2 = 0.0, Q2 = 0.0, R2 = 0.0;
};

/// Strain enters as P -> P + (nu-2) a_v eps and Q -> Q - (nu+1) b_v eps.
SubbandParams subband_params(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                             const StrainConfig& strain = {});

/// Heavy/light-hole mixed eigenstates of one subband:
/// |i-> = h|HH> + l|LH>, |i+> = -l|HH> + h|LH>.
struct MixedSubband {
    double h = 1.0;
    double l = 0.0;
    double E_minus = 0.0;
    double E_plus = 0.0;
};

MixedSubband mix_subband(double P, double Q, double R);
std::pair<MixedSubband, MixedSubband> mixed_subbands(const SubbandParams& sp);

/// First-order mixing of subbands 1 and 2 by the static field.
///
/// lam_1a_2b is the weight of |2b> in the dressed state |1~a>; the weight of
/// |1a> in |2~b> is its negative.
struct ElectricMixing {
    double Lambda = 0.0;  ///< <2,j|-eE0 y|1,j>, meV
    double lam_1m_2m = 0.0;
    double lam_1m_2p = 0.0;
    double lam_1p_2m = 0.0;
    double lam_1p_2p = 0.0;
    double lambda_thin = 0.0;  ///< thin-dot limit of lam_1m_2m

    double lam_2m_1m() const noexcept { return -lam_1m_2m; }
    double lam_2p_1m() const noexcept { return -lam_1m_2p; }
    double lam_2m_1p() const noexcept { return -lam_1p_2m; }
    double lam_2p_1p() const noexcept { return -lam_1p_2p; }
};

/// Smallest |E_1 - E_2| accepted by the perturbative mixing, meV.
inline constexpr double kCrossingTolerance = 1e-6;

/// Throws PerturbationError when a subband-1/subband-2 pair is closer than kCrossingTolerance.
ElectricMixing electric_mixing(const std::pair<MixedSubband, MixedSubband>& ms, double E0, const BoxGeometry& g,
                               const MaterialParams& m);

/// Principal g-factors, qubit eigenvectors |0> = alpha|up> + beta|down> and Larmor frequency.
struct QubitCoefficients {
    double g_x = 0.0;
    double g_y = 0.0;
    double g_z = 0.0;
    std::complex<double> alpha{1.0, 0.0};
    double beta = 0.0;  ///< real, non-negative
    double f_L = 0.0;   ///< GHz
    bool degenerate = false;  ///< f_L = 0: alpha and beta are arbitrary
};

QubitCoefficients qubit_coefficients(const MixedSubband& ground, double theta, double phi, double B,
                                     const MaterialParams& m);

/// Sum-over-state contributions B E0 Pi of |1~+>, |2~->, |2~+> (nm).
struct PiTerms {
    std::complex<double> pi_1p;
    std::complex<double> pi_2m;
    std::complex<double> pi_2p;

    std::complex<double> total() const { return pi_1p + pi_2m + pi_2p; }
};

PiTerms rabi_pi_terms(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                      const FieldConfig& fields, const StrainConfig& strain = {});

/// Rabi frequency to first order in B, E0 and E_ac, GHz.
double rabi_linearized(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                       const FieldConfig& fields, const StrainConfig& strain = {});

/// Minimal-basis qubit with the static field treated exactly.
///
/// The 8x8 field-free Hamiltonian splits into two identical 4x4 blocks over
/// {|1,+3/2>, |1,-1/2>, |2,+3/2>, |2,-1/2>} and its time-reversed partner.
/// The magnetic field is handled to first order.
class MinimalQubit {
 public:
    MinimalQubit(const MaterialParams& m, const BoxGeometry& g, Orientation orientation, double E0,
                 const StrainConfig& strain = {});

    /// Block eigenvalues, ascending (each one Kramers-degenerate).
    const Eigen::Vector4d& energies() const noexcept { return energies_; }

    /// Heavy-hole weight of the ground doublet.
    double ground_heavy_weight() const;

    /// Larmor frequency at field vector B (T), GHz.
    double larmor(const Eigen::Vector3d& B) const;

    /// Rabi frequency, GHz. Zero at B = 0; throws SolverError if f_L vanishes at finite B.
    double rabi(const Eigen::Vector3d& B, double E_ac) const;

 private:
    using Matrix8cd = Eigen::Matrix<std::complex<double>, 8, 8>;
    Matrix8cd zeeman(const Eigen::Vector3d& B) const;

    MaterialParams material_;
    Eigen::Vector4d energies_;
    Eigen::Matrix4d vectors_;
    Eigen::Matrix<double, 8, 8> states_;  // columns: (level, pseudo-spin) pairs
    Eigen::Matrix<double, 8, 8> dipole_;  // y in the dressed basis, nm
};

double minimal_exact_rabi(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                          const FieldConfig& fields, const StrainConfig& strain = {});

/// The gamma multiplying the diagonal (k_x^2 - k_y^2) part of R: gamma3 for [110], gamma2 for [100].
double lateral_mixing_gamma(const MaterialParams& m, Orientation orientation) noexcept;

/// Light-hole admixtures of |1-> and |2-> to order (L_z/L)^2.
std::pair<double, double> thin_dot_light_mixing(const MaterialParams& m, const BoxGeometry& g,
                                                Orientation orientation);

/// Principal g-factors in the thin-dot limit.
std::array<double, 3> thin_dot_g_factors(const MaterialParams& m, const BoxGeometry& g, Orientation orientation);

/// G(theta) sin(theta) of the heavy-hole pair; the azimuth does not enter.
double heavy_hole_angular_factor(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                                 double theta);

/// H(theta, phi) sin(theta) of the light-hole pair.
double light_hole_angular_factor(double theta, double phi);

/// Thin-dot Rabi frequency to order 2 or 4 in L_z/L, GHz.
/// Under strain the height is replaced by sqrt(|L_z'^2|).
double rabi_thin_dot(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                     const FieldConfig& fields, int order, const StrainConfig& strain = {});

/// Thin-dot Rabi frequency of the light-hole pair |1+>, GHz ([110] box only).
double light_hole_rabi(const MaterialParams& m, const BoxGeometry& g, const FieldConfig& fields);

enum class EmaxModel {
    general,    ///< from the minimal-basis dipole and gap
    thin_dot,   ///< lowest order in L_z/L
};

/// Static field maximizing the renormalized Rabi frequency, mV/nm.
double e_max(const MaterialParams& m, const BoxGeometry& g, Orientation orientation, EmaxModel model);

/// [1 + (E0/E_max)^2 / 2]^(-3/2)
double renormalization_factor(double E0, double E_max) noexcept;

double renormalized_rabi(double fr_linear, double E0, const BoxGeometry& g, const MaterialParams& m,
                         Orientation orientation = Orientation::dot_110, EmaxModel model = EmaxModel::general);

/// Signed L_z'^2 (nm^2) of the unstrained box equivalent to strain eps_parallel.
/// +inf at the divergence point.
double strain_equivalent_height(const MaterialParams& m, double Lz, double eps_parallel);

/// Strain where L_z'^2 diverges.
double strain_divergence(const MaterialParams& m, double Lz);

}  // namespace holebox
