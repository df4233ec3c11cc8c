#include <doctest.h>

#include <cmath>
#include <random>

#include "holebox/constants.hpp"
#include "holebox/errors.hpp"
#include "holebox/minimal_model.hpp"
#include "holebox/numeric_qubit.hpp"

using namespace holebox;

namespace {

const double kPi = std::acos(-1.0);

const MaterialParams& silicon() {
    static const auto m = builtin_materials()[0];
    return m;
}

SpinorSpectrum fake_spectrum(std::vector<double> energies) {
    SpinorSpectrum s;
    const auto n = static_cast<Eigen::Index>(energies.size());
    s.energies = Eigen::Map<Eigen::VectorXd>(energies.data(), n);
    s.vectors = Eigen::MatrixXcd::Identity(n, n);
    return s;
}

ConvergedOptions options(BasisCutoff cutoff, int n_excited, bool paramagnetic = true) {
    ConvergedOptions o;
    o.cutoff = cutoff;
    o.n_excited = n_excited;
    o.paramagnetic = paramagnetic;
    return o;
}

}  // namespace

TEST_CASE("eigensolver on trivial and dense inputs") {
    HamiltonianMatrix one;
    one.cutoff = BasisCutoff{1, 1, 1};
    one.entries = Eigen::MatrixXcd::Constant(1, 1, cplx(2.5, 0.0));
    const auto s = solve_spectrum(one, 1);
    CHECK(s.energies(0) == doctest::Approx(2.5));
    CHECK(std::abs(s.vectors(0, 0) - cplx(1.0, 0.0)) < 1e-15);
    CHECK_THROWS_AS(solve_spectrum(one, 2), ConfigError);
}

TEST_CASE("iterative and dense eigensolvers agree") {
    const BoxGeometry g{40, 30, 10};
    const auto H = assemble_static(silicon(), g, Orientation::dot_110, BasisCutoff{5, 5, 4}, 0.1);
    const auto dense = solve_spectrum(H, 24);
    EigenSolverOptions iterative;
    iterative.dense_limit = 0;
    const auto chebyshev = solve_spectrum(H, 24, iterative);
    for (int i = 0; i < 24; ++i) CHECK(chebyshev.energies(i) == doctest::Approx(dense.energies(i)).epsilon(1e-10));
    // Eigenvector check through the residual ||H v - E v|| relative to a bound on ||H||.
    const double bound = H.entries.cwiseAbs().rowwise().sum().maxCoeff();
    for (int i = 0; i < 24; ++i) {
        const Eigen::VectorXcd v = chebyshev.vectors.col(i);
        CHECK((H.entries * v - chebyshev.energies(i) * v).norm() < 1e-8 * bound);
        Eigen::Index largest;
        v.cwiseAbs().maxCoeff(&largest);
        CHECK(std::abs(v(largest).imag()) < 1e-14);
        CHECK(v(largest).real() > 0.0);
    }

    iterative.max_iterations = 1;
    iterative.residual_tolerance = 1e-15;
    CHECK_THROWS_AS(solve_spectrum(H, 24, iterative), SolverError);
}

TEST_CASE("Kramers pairing") {
    const auto ok = pair_doublets(fake_spectrum({0.0, 1e-10, 1.0, 1.0, 2.0}));
    REQUIRE(ok.doublets.size() == 2);
    CHECK(ok.doublets[0].E == doctest::Approx(0.5e-10));
    CHECK(ok.doublets[1].index == 1);
    REQUIRE(ok.dropped_energy);
    CHECK(*ok.dropped_energy == 2.0);
    CHECK_FALSE(pair_doublets(fake_spectrum({0.0, 0.0})).dropped_energy);

    CHECK_THROWS_AS(pair_doublets(fake_spectrum({0.0, 0.5, 1.0, 1.0})), SolverError);
    CHECK_THROWS_AS(pair_doublets(fake_spectrum({0.0, 0.0, 0.0, 1.0, 1.0, 1.0})), SolverError);
    CHECK_THROWS_AS(pair_doublets(fake_spectrum({0.0, 1e-6})), SolverError);
    CHECK_NOTHROW(pair_doublets(fake_spectrum({0.0, 1e-6}), 1e-5));
}

TEST_CASE("converged spectrum is Kramers degenerate") {
    const auto H = assemble_static(silicon(), BoxGeometry{40, 30, 10}, Orientation::dot_110, BasisCutoff{6, 6, 6}, 0.1);
    const auto s = solve_spectrum(H, 40);
    const auto p = pair_doublets(s);
    CHECK(p.doublets.size() == 20);
    for (int i = 0; i < 40; i += 2) CHECK(std::abs(s.energies(i + 1) - s.energies(i)) < 1e-8);
}

TEST_CASE("qubit block of the magnetic term") {
    const BoxGeometry g{40, 30, 10};
    const BasisCutoff c{4, 4, 3};
    const auto H = assemble_static(silicon(), g, Orientation::dot_110, c, 0.1);
    const auto p = pair_doublets(solve_spectrum(H, 4));
    const auto zero = assemble_zeeman(silicon(), Eigen::Vector3d::Zero(), c) +
                      assemble_paramagnetic(silicon(), g, Orientation::dot_110, Eigen::Vector3d::Zero(), c);
    CHECK(qubit_h1(p.doublets[0], zero).cwiseAbs().maxCoeff() == 0.0);

    // Splitting is invariant under a pseudo-spin rotation of the doublet.
    const Eigen::Vector3d B(0.2, 0.6, 0.4);
    const auto Hm = assemble_zeeman(silicon(), B, c) + assemble_paramagnetic(silicon(), g, Orientation::dot_110, B, c);
    const Eigen::Matrix2cd h1 = qubit_h1(p.doublets[0], Hm);
    CHECK((h1 - h1.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    KramersDoublet rotated = p.doublets[0];
    const cplx a(0.6, 0.48), b(0.0, 0.64);  // |a|^2 + |b|^2 = 1
    rotated.v_up = a * p.doublets[0].v_up + b * p.doublets[0].v_down;
    rotated.v_down = -std::conj(b) * p.doublets[0].v_up + std::conj(a) * p.doublets[0].v_down;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> e1(h1), e2(qubit_h1(rotated, Hm));
    CHECK(e1.eigenvalues()(1) - e1.eigenvalues()(0) ==
          doctest::Approx(e2.eigenvalues()(1) - e2.eigenvalues()(0)).epsilon(1e-12));
}

TEST_CASE("Rabi sum is invariant under pseudo-spin rotations of every doublet") {
    const BoxGeometry g{40, 30, 10};
    const BasisCutoff c{4, 4, 3};
    const auto H = assemble_static(silicon(), g, Orientation::dot_110, c, 0.1);
    const auto doublets = pair_doublets(solve_spectrum(H, 20)).doublets;
    const Eigen::Vector3d B = 1.0 * Eigen::Vector3d(std::sin(0.7), 0.3, std::cos(0.7)).normalized();
    const auto Hm = assemble_zeeman(silicon(), B, c) + assemble_paramagnetic(silicon(), g, Orientation::dot_110, B, c);
    const auto Y = assemble_position_y(g, c);
    const auto ref = rabi_sum_over_states(doublets, Hm, Y, 0.03, 9);
    REQUIRE(ref.f_R);

    std::mt19937_64 rng(4);
    std::normal_distribution<double> n01;
    auto rotated = doublets;
    for (auto& d : rotated) {
        Eigen::Vector4d q(n01(rng), n01(rng), n01(rng), n01(rng));
        q.normalize();
        const cplx a(q(0), q(1)), b(q(2), q(3));
        const Eigen::VectorXcd up = d.v_up, down = d.v_down;
        d.v_up = a * up + b * down;
        d.v_down = -std::conj(b) * up + std::conj(a) * down;
        d.v_up *= std::polar(1.0, n01(rng));  // an extra global phase
        d.v_down *= std::polar(1.0, n01(rng));
    }
    const auto rot = rabi_sum_over_states(rotated, Hm, Y, 0.03, 9);
    CHECK(rot.f_L == doctest::Approx(ref.f_L).epsilon(1e-12));
    REQUIRE(rot.f_R);
    CHECK(*rot.f_R == doctest::Approx(*ref.f_R).epsilon(1e-10));
    CHECK(ref.tail_fraction >= 0.0);
    CHECK(ref.tail_fraction <= 1.0 + 1e-12);
}

TEST_CASE("no static field, no Rabi oscillation") {
    const ConvergedQubit q(silicon(), BoxGeometry{40, 30, 10}, Orientation::dot_110, 0.0, {},
                           options(BasisCutoff{4, 4, 3}, 12));
    const auto r = q.evaluate(Eigen::Vector3d(0.5, 0.5, 0.7), 0.03);
    REQUIRE(r.f_R);
    CHECK(*r.f_R < 1e-12);
    CHECK(r.f_L > 0.0);
}

TEST_CASE("zero magnetic field leaves f_R absent") {
    const ConvergedQubit q(silicon(), BoxGeometry{40, 30, 10}, Orientation::dot_110, 0.1, {},
                           options(BasisCutoff{3, 3, 2}, 6));
    const auto r = q.evaluate(Eigen::Vector3d::Zero(), 0.03);
    CHECK(r.f_L == 0.0);
    CHECK_FALSE(r.f_R);
}

TEST_CASE("minimal cutoff reproduces the exact minimal qubit") {
    const BoxGeometry g{40, 30, 10};
    for (const auto& m : {builtin_materials()[0], builtin_materials()[1]}) {
        const ConvergedQubit q(m, g, Orientation::dot_110, 0.2, {}, options(kMinimalCutoff, 3, false));
        CHECK(q.excited_count() == 3);
        const MinimalQubit exact(m, g, Orientation::dot_110, 0.2);
        for (double theta : {0.3, 0.9, 1.4}) {
            const FieldConfig f{1.0, theta, 0.4, 0.2, 0.03};
            const auto r = q.evaluate(f.field_vector(), 0.03);
            REQUIRE(r.f_R);
            CHECK(*r.f_R == doctest::Approx(exact.rabi(f.field_vector(), 0.03)).epsilon(1e-9));
            CHECK(r.f_L == doctest::Approx(exact.larmor(f.field_vector())).epsilon(1e-9));
        }
        CHECK(q.ground_heavy_weight() == doctest::Approx(exact.ground_heavy_weight()).epsilon(1e-12));
    }
}

TEST_CASE("ground doublet is heavy-hole s-like, the first excited ones p-like") {
    const ConvergedQubit q(silicon(), BoxGeometry{40, 30, 10}, Orientation::dot_110, 0.0, {},
                           options(BasisCutoff{6, 6, 5}, 10));
    CHECK(q.ground_heavy_weight() > 0.9);
    const BasisCutoff c{6, 6, 5};
    auto weight = [&](const Eigen::VectorXcd& v, int nx, int ny) {
        double w = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const auto idx = basis_index(c, static_cast<std::size_t>(i));
            if (idx.nx == nx && idx.ny == ny) w += std::norm(v(i));
        }
        return w;
    };
    CHECK(weight(q.doublets()[0].v_up, 1, 1) > 0.8);
    // Lx > Ly: the p_x doublet lies below the p_y doublet.
    CHECK(weight(q.doublets()[1].v_up, 2, 1) > 0.6);
    CHECK(weight(q.doublets()[2].v_up, 1, 2) > 0.6);
    const auto gp = q.g_principal();
    CHECK(std::abs(gp[2]) > std::abs(gp[0]));
    CHECK(std::abs(gp[2]) > std::abs(gp[1]));
}

TEST_CASE("tier names round-trip") {
    for (Tier t : {Tier::analytic2, Tier::analytic4, Tier::linearized, Tier::renormalized, Tier::minimal_exact,
                   Tier::converged_zeeman, Tier::converged_full})
        CHECK(parse_tier(to_string(t)) == t);
    CHECK_THROWS_AS(parse_tier("converged"), ConfigError);
}
