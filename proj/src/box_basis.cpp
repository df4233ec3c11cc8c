#include "holebox/box_basis.hpp"

#include <cmath>
#include <string>

#include "holebox/constants.hpp"
#include "holebox/errors.hpp"

namespace holebox {

using constants::pi;

void validate(const BoxGeometry& g) {
    for (int axis = 0; axis < 3; ++axis) {
        const double L = g.side(axis);
        if (!std::isfinite(L) || !(L > 0.0))
            throw InvariantError(std::string("box side L") + "xyz"[axis] + " must be positive");
    }
}

void validate(const BasisCutoff& c) {
    if (c.Nx < 1 || c.Ny < 1 || c.Nz < 1) throw InvariantError("basis cutoff must be >= 1 along every axis");
}

std::size_t envelope_index(const BasisCutoff& c, int nx, int ny, int nz) noexcept {
    return static_cast<std::size_t>(nx - 1) +
           static_cast<std::size_t>(c.Nx) *
               (static_cast<std::size_t>(ny - 1) + static_cast<std::size_t>(c.Ny) * static_cast<std::size_t>(nz - 1));
}

std::size_t flat_index(const BasisCutoff& c, const BasisIndex& idx) noexcept {
    return static_cast<std::size_t>(idx.jz) + kSpinComponents * envelope_index(c, idx.nx, idx.ny, idx.nz);
}

BasisIndex basis_index(const BasisCutoff& c, std::size_t flat) noexcept {
    BasisIndex idx;
    idx.jz = static_cast<Jz>(flat % kSpinComponents);
    std::size_t env = flat / kSpinComponents;
    idx.nx = static_cast<int>(env % static_cast<std::size_t>(c.Nx)) + 1;
    env /= static_cast<std::size_t>(c.Nx);
    idx.ny = static_cast<int>(env % static_cast<std::size_t>(c.Ny)) + 1;
    idx.nz = static_cast<int>(env / static_cast<std::size_t>(c.Ny)) + 1;
    return idx;
}

double position_element(int n, int m, double L) noexcept {
    if ((n + m) % 2 == 0) return 0.0;
    const double nn = n, mm = m;
    const double d = nn * nn - mm * mm;
    return -8.0 * nn * mm * L / (pi * pi * d * d);
}

double derivative_element(int n, int m, double L) noexcept {
    if ((n + m) % 2 == 0) return 0.0;
    const double nn = n, mm = m;
    return 4.0 * nn * mm / (L * (nn * nn - mm * mm));
}

double ksquared_element(int n, int m, double L) noexcept {
    if (n != m) return 0.0;
    const double k = n * pi / L;
    return k * k;
}

std::complex<double> momentum_element(int n, int m, double L) noexcept {
    return {0.0, -derivative_element(n, m, L)};
}

std::complex<double> momentum_position_element(int n, int m) noexcept {
    if (n == m || (n + m) % 2 != 0) return {};
    const double nn = n, mm = m;
    return {0.0, 2.0 * nn * mm / (nn * nn - mm * mm)};
}

}  // namespace holebox
