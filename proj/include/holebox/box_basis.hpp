#pragma once

#include <array>
#include <complex>
#include <cstddef>

/// Particle-in-a-box sine basis.
///
/// Envelopes are products chi_nx(x, Lx) chi_ny(y, Ly) chi_nz(z, Lz) with
/// chi_n(u, L) = sqrt(2/L) sin[n pi (u/L + 1/2)] on |u| <= L/2, so coordinates
/// are measured from the box centre. Each envelope carries the four J = 3/2
/// Bloch components ordered (+3/2, +1/2, -1/2, -3/2).
namespace holebox {

/// Side lengths of the box in nm.
struct BoxGeometry {
    double Lx = 0.0;
    double Ly = 0.0;
    double Lz = 0.0;

    double side(int axis) const noexcept { return axis == 0 ? Lx : axis == 1 ? Ly : Lz; }
};

/// Throws InvariantError unless every side is finite and positive.
void validate(const BoxGeometry& g);

/// Index of a J = 3/2 Bloch component, in matrix order.
enum class Jz : int { plus_3_2 = 0, plus_1_2 = 1, minus_1_2 = 2, minus_3_2 = 3 };

inline constexpr int kSpinComponents = 4;

/// Largest quantum number kept along each axis.
struct BasisCutoff {
    int Nx = 1;
    int Ny = 1;
    int Nz = 1;

    int along(int axis) const noexcept { return axis == 0 ? Nx : axis == 1 ? Ny : Nz; }
    std::size_t envelope_count() const noexcept {
        return static_cast<std::size_t>(Nx) * static_cast<std::size_t>(Ny) * static_cast<std::size_t>(Nz);
    }
    std::size_t dimension() const noexcept { return kSpinComponents * envelope_count(); }

    friend bool operator==(const BasisCutoff&, const BasisCutoff&) = default;
};

/// Throws InvariantError unless every N_i >= 1.
void validate(const BasisCutoff& c);

/// The cutoff spanning the s and p_y envelopes (1,1,1) and (1,2,1).
inline constexpr BasisCutoff kMinimalCutoff{1, 2, 1};

struct BasisIndex {
    int nx = 1;
    int ny = 1;
    int nz = 1;
    Jz jz = Jz::plus_3_2;

    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Flat ordering: j_z fastest, then n_x, n_y, n_z.
std::size_t envelope_index(const BasisCutoff& c, int nx, int ny, int nz) noexcept;
std::size_t flat_index(const BasisCutoff& c, const BasisIndex& idx) noexcept;
BasisIndex basis_index(const BasisCutoff& c, std::size_t flat) noexcept;

/// <chi_n | u | chi_m>, nm. Symmetric; zero for n + m even.
double position_element(int n, int m, double L) noexcept;

/// <chi_n | d/du | chi_m>, 1/nm. Antisymmetric; zero for n + m even.
double derivative_element(int n, int m, double L) noexcept;

/// <chi_n | k^2 | chi_m> with k = -i d/du, 1/nm^2.
double ksquared_element(int n, int m, double L) noexcept;

/// <chi_n | k | chi_m> with k = -i d/du, 1/nm.
std::complex<double> momentum_element(int n, int m, double L) noexcept;

/// <chi_n | (k u + u k)/2 | chi_m>, dimensionless. Zero unless n + m is even and n != m.
std::complex<double> momentum_position_element(int n, int m) noexcept;

}  // namespace holebox
