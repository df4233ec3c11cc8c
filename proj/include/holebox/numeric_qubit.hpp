#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holebox/box_basis.hpp"
#include "holebox/lk_model.hpp"
#include "holebox/materials.hpp"

/// Numerical hole qubit: diagonalize the box Hamiltonian in a converged sine
/// basis, pair Kramers doublets and evaluate the Rabi frequency to first
/// order in B by a sum over excited doublets.
namespace holebox {

struct EigenSolverOptions {
    /// Largest dimension handled by the dense LAPACK driver; above it a
    /// Chebyshev-filtered subspace iteration is used.
    std::size_t dense_limit = 4096;
    int max_iterations = 400;
    int filter_degree = 16;
    /// Residual bound relative to the spectral-norm estimate of H.
    double residual_tolerance = 1e-9;
    std::uint64_t seed = 0x5eed'b0c5'1234'5678ULL;
};

/// Lowest eigenpairs of a Hamiltonian, energies ascending.
struct SpinorSpectrum {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;  ///< one column per state, largest component real positive
    BasisCutoff cutoff;
    TermSet included_terms;
};

/// Throws SolverError (with the worst residual) when the iterative path does not converge.
SpinorSpectrum solve_spectrum(const HamiltonianMatrix& H, int n_states, const EigenSolverOptions& options = {});

/// Degeneracy tolerance for Kramers pairing, meV.
inline constexpr double kKramersTolerance = 1e-8;

struct KramersDoublet {
    double E = 0.0;  ///< mean of the two levels, meV
    Eigen::VectorXcd v_up;
    Eigen::VectorXcd v_down;
    int index = 0;
};

struct DoubletPairing {
    std::vector<KramersDoublet> doublets;
    /// Energy of an unpaired top state that was dropped (the spectrum was cut inside a doublet).
    std::optional<double> dropped_energy;
};

/// Greedy adjacent pairing; throws SolverError if a level has no partner within tol
/// or if more than two levels coincide.
DoubletPairing pair_doublets(const SpinorSpectrum& spectrum, double tol = kKramersTolerance);

/// <doublet| H_m' |doublet> in the (v_up, v_down) basis, meV.
Eigen::Matrix2cd qubit_h1(const KramersDoublet& ground, const HamiltonianMatrix& Hm_prime);

/// Approximation level of a Rabi-frequency value.
enum class Tier {
    analytic2,         ///< thin-dot expansion to second order in L_z
    analytic4,         ///< thin-dot expansion to fourth order in L_z
    linearized,        ///< minimal basis, linear in E0 (all orders in L_z)
    renormalized,      ///< linearized times the E_max renormalization factor
    minimal_exact,     ///< minimal basis, E0 treated exactly
    converged_zeeman,  ///< converged basis, Zeeman term only
    converged_full,    ///< converged basis, Zeeman plus orbital (paramagnetic) term
};

std::string to_string(Tier tier);
/// Throws ConfigError on an unknown name.
Tier parse_tier(std::string_view name);

struct RabiResult {
    double f_L = 0.0;           ///< GHz
    std::optional<double> f_R;  ///< GHz; absent when the qubit doublet is not split
    std::optional<std::array<double, 3>> g_principal;
    Tier tier = Tier::converged_full;
    /// |contribution of the top 10% of excited doublets| / |total sum|.
    double tail_fraction = 0.0;
};

/// Per-doublet projections: rows 2n, 2n+1 hold <n, sigma| O |ground, sigma'>.
struct DoubletProjections {
    std::vector<double> energies;  ///< doublet energies, ground first
    Eigen::MatrixXcd dipole;       ///< y, nm
    Eigen::MatrixXcd zeeman;       ///< H_m', meV
};

/// Rabi and Larmor frequencies from projected operators (at least one excited doublet).
RabiResult rabi_from_projections(const DoubletProjections& p, double E_ac, Tier tier);

/// Sum over the first n_excited excited doublets.
RabiResult rabi_sum_over_states(const std::vector<KramersDoublet>& doublets, const HamiltonianMatrix& Hm_prime,
                                const HamiltonianMatrix& dipole_y, double E_ac, int n_excited,
                                Tier tier = Tier::converged_full);

struct ConvergedOptions {
    BasisCutoff cutoff{8, 8, 5};
    /// Excited doublets kept in the sum (capped by the basis size).
    int n_excited = 40;
    /// Include the orbital term H_p in H_m'.
    bool paramagnetic = true;
    double kramers_tolerance = kKramersTolerance;
    std::size_t max_dimension = kDefaultMaxDimension;
    EigenSolverOptions solver{};
};

/// Field-free problem solved once; every B direction is then a cheap linear combination.
class ConvergedQubit {
 public:
    ConvergedQubit(const MaterialParams& m, const BoxGeometry& g, Orientation orientation, double E0,
                   const StrainConfig& strain, const ConvergedOptions& options);

    /// f_L, f_R and principal g-factors for field vector B (T).
    RabiResult evaluate(const Eigen::Vector3d& B, double E_ac) const;

    const std::vector<KramersDoublet>& doublets() const noexcept { return doublets_; }
    int excited_count() const noexcept { return static_cast<int>(doublets_.size()) - 1; }

    /// Heavy-hole (j_z = +-3/2) weight of the ground doublet.
    double ground_heavy_weight() const;

    /// |g| along x, y, z from the splitting at unit field along each axis.
    std::array<double, 3> g_principal() const;

 private:
    DoubletProjections projections(const Eigen::Vector3d& B) const;

    Tier tier_;
    std::vector<KramersDoublet> doublets_;
    std::vector<double> energies_;
    Eigen::MatrixXcd dipole_;
    std::array<Eigen::MatrixXcd, 3> unit_field_;  // H_m' at 1 T along x, y, z
};

}  // namespace holebox
