#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "holebox/box_basis.hpp"
#include "holebox/errors.hpp"

using namespace holebox;

namespace {

/// Composite 8-point Gauss-Legendre quadrature on [-L/2, L/2].
double integrate(const std::function<double(double)>& f, double L, int panels = 64) {
    static const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    const double h = L / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = -L / 2 + (p + 0.5) * h;
        for (int i = 0; i < 8; ++i) sum += w[i] * f(mid + 0.5 * h * x[i]);
    }
    return 0.5 * h * sum;
}

const double kPi = std::acos(-1.0);

double chi(int n, double u, double L) { return std::sqrt(2.0 / L) * std::sin(n * kPi * (u / L + 0.5)); }
double dchi(int n, double u, double L) {
    return std::sqrt(2.0 / L) * (n * kPi / L) * std::cos(n * kPi * (u / L + 0.5));
}
double d2chi(int n, double u, double L) { return -(n * kPi / L) * (n * kPi / L) * chi(n, u, L); }

}  // namespace

TEST_CASE("one-dimensional matrix elements match quadrature") {
    for (double L : {1.0, 7.5, 30.0}) {
        for (int n = 1; n <= 12; ++n) {
            for (int m = 1; m <= 12; ++m) {
                const double overlap = integrate([&](double u) { return chi(n, u, L) * chi(m, u, L); }, L);
                const double pos = integrate([&](double u) { return chi(n, u, L) * u * chi(m, u, L); }, L);
                const double der = integrate([&](double u) { return chi(n, u, L) * dchi(m, u, L); }, L);
                const double k2 = integrate([&](double u) { return -chi(n, u, L) * d2chi(m, u, L); }, L);
                const double u_der = integrate([&](double u) { return chi(n, u, L) * u * dchi(m, u, L); }, L);

                CHECK(overlap == doctest::Approx(n == m ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
                CHECK(position_element(n, m, L) == doctest::Approx(pos).epsilon(1e-12).scale(L));
                CHECK(derivative_element(n, m, L) == doctest::Approx(der).epsilon(1e-12).scale(1.0 / L));
                CHECK(ksquared_element(n, m, L) == doctest::Approx(k2).epsilon(1e-12).scale(kPi * kPi * n * m / (L * L)));
                const auto p = momentum_element(n, m, L);
                CHECK(p.real() == doctest::Approx(0.0).scale(1.0 / L));
                CHECK(p.imag() == doctest::Approx(-der).epsilon(1e-12).scale(1.0 / L));
                // (k u + u k)/2 = -i (u d/du + 1/2)
                const auto ku = momentum_position_element(n, m);
                CHECK(ku.real() == doctest::Approx(0.0).scale(1.0));
                CHECK(ku.imag() == doctest::Approx(-(u_der + 0.5 * overlap)).epsilon(1e-12).scale(1.0));
            }
        }
    }
}

TEST_CASE("matrix element symmetries") {
    for (int n = 1; n <= 9; ++n) {
        for (int m = 1; m <= 9; ++m) {
            CHECK(position_element(n, m, 3.0) == position_element(m, n, 3.0));
            CHECK(derivative_element(n, m, 3.0) == -derivative_element(m, n, 3.0));
            if ((n + m) % 2 == 0) {
                CHECK(position_element(n, m, 3.0) == 0.0);
                CHECK(derivative_element(n, m, 3.0) == 0.0);
            }
            // (k u + u k)/2 is Hermitian.
            CHECK(momentum_position_element(n, m) == std::conj(momentum_position_element(m, n)));
        }
    }
}

TEST_CASE("flat index is a bijection with j_z fastest") {
    const BasisCutoff c{3, 4, 2};
    std::set<std::size_t> seen;
    for (int nz = 1; nz <= c.Nz; ++nz)
        for (int ny = 1; ny <= c.Ny; ++ny)
            for (int nx = 1; nx <= c.Nx; ++nx)
                for (int j = 0; j < kSpinComponents; ++j) {
                    const BasisIndex idx{nx, ny, nz, static_cast<Jz>(j)};
                    const auto flat = flat_index(c, idx);
                    CHECK(flat < c.dimension());
                    CHECK(basis_index(c, flat) == idx);
                    seen.insert(flat);
                }
    CHECK(seen.size() == c.dimension());
    CHECK(flat_index(c, {1, 1, 1, Jz::plus_1_2}) == 1);
    CHECK(flat_index(c, {2, 1, 1, Jz::plus_3_2}) == 4);
    CHECK(flat_index(c, {1, 2, 1, Jz::plus_3_2}) == 12);
    CHECK(kMinimalCutoff.dimension() == 8);
}

TEST_CASE("invalid geometry and cutoff are rejected") {
    CHECK_THROWS_AS(validate(BoxGeometry{0.0, 1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(BoxGeometry{1.0, -2.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(BasisCutoff{0, 1, 1}), ConfigError);
    CHECK_NOTHROW(validate(BoxGeometry{40, 30, 10}));
}
