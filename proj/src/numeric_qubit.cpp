#include "holebox/numeric_qubit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "holebox/constants.hpp"
#include "holebox/errors.hpp"

namespace holebox {

namespace {

using constants::to_ghz;

/// Make the largest-magnitude component of every column real and positive.
void fix_phases(Eigen::MatrixXcd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index imax = 0;
        vectors.col(j).cwiseAbs2().maxCoeff(&imax);
        const cplx pivot = vectors(imax, j);
        if (std::abs(pivot) > 0.0) vectors.col(j) *= std::conj(pivot) / std::abs(pivot);
    }
}

SpinorSpectrum solve_dense(const Eigen::MatrixXcd& H, int n_states) {
    const auto n = static_cast<lapack_int>(H.rows());
    Eigen::MatrixXcd a = H;  // destroyed by the driver
    Eigen::VectorXd w(n);
    Eigen::MatrixXcd z(n, n_states);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(1, n)));
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, n_states,
                                           abstol, &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != n_states)
        throw SolverError("dense eigensolver failed (info = " + std::to_string(info) + ", found " +
                          std::to_string(found) + " of " + std::to_string(n_states) + " states)");
    SpinorSpectrum s;
    s.energies = w.head(n_states);
    s.vectors = std::move(z);
    return s;
}

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& X) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(X);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(X.rows(), X.cols());
}

/// Chebyshev filter damping [a, b] and amplifying below a; a0 estimates the lowest eigenvalue.
Eigen::MatrixXcd chebyshev_filter(const Eigen::MatrixXcd& H, Eigen::MatrixXcd X, int degree, double a, double b,
                                  double a0) {
    const double e = 0.5 * (b - a);
    const double c = 0.5 * (b + a);
    double sigma = e / (a0 - c);
    const double tau = 2.0 / sigma;
    Eigen::MatrixXcd Y = (H * X - c * X) * (sigma / e);
    for (int i = 2; i <= degree; ++i) {
        const double sigma_next = 1.0 / (tau - sigma);
        Eigen::MatrixXcd Ynext = (H * Y - c * Y) * (2.0 * sigma_next / e) - (sigma * sigma_next) * X;
        X = std::move(Y);
        Y = std::move(Ynext);
        sigma = sigma_next;
    }
    return Y;
}

SpinorSpectrum solve_iterative(const Eigen::MatrixXcd& H, int n_states, const EigenSolverOptions& options) {
    const Eigen::Index n = H.rows();
    const Eigen::Index block = std::min<Eigen::Index>(n, n_states + std::max(8, n_states / 2));

    // Gershgorin bound on the spectrum.
    double upper = -std::numeric_limits<double>::infinity();
    double lower = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double radius = H.col(i).cwiseAbs().sum() - std::abs(H(i, i));
        upper = std::max(upper, H(i, i).real() + radius);
        lower = std::min(lower, H(i, i).real() - radius);
    }
    const double norm = std::max(std::abs(upper), std::abs(lower));
    const double tolerance = options.residual_tolerance * norm;

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd X(n, block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < n; ++i) X(i, j) = cplx(gauss(rng), gauss(rng));
    X = orthonormalize(X);

    double worst = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const Eigen::MatrixXcd HX = H * X;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ritz(X.adjoint() * HX);
        X = X * ritz.eigenvectors();
        const Eigen::VectorXd theta = ritz.eigenvalues();
        const Eigen::MatrixXcd R = HX * ritz.eigenvectors() - X * theta.asDiagonal();
        worst = R.leftCols(n_states).colwise().norm().maxCoeff();
        if (worst <= tolerance) {
            SpinorSpectrum s;
            s.energies = theta.head(n_states);
            s.vectors = X.leftCols(n_states);
            return s;
        }
        X = orthonormalize(chebyshev_filter(H, X, options.filter_degree, theta(block - 1), upper, theta(0)));
    }
    std::ostringstream msg;
    msg << "iterative eigensolver did not converge after " << options.max_iterations
        << " iterations (worst residual " << worst << " meV, tolerance " << tolerance << " meV)";
    throw SolverError(msg.str());
}

/// Rows 2n, 2n+1 of the result: <doublet n, sigma| O |ground, sigma'>.
Eigen::MatrixXcd project_on_doublets(const std::vector<KramersDoublet>& doublets, const Eigen::MatrixXcd& op,
                                     std::size_t count) {
    const Eigen::Index dim = op.rows();
    Eigen::MatrixXcd ground(dim, 2);
    ground << doublets.front().v_up, doublets.front().v_down;
    const Eigen::MatrixXcd applied = op * ground;
    Eigen::MatrixXcd out(2 * static_cast<Eigen::Index>(count), 2);
    for (std::size_t n = 0; n < count; ++n) {
        const auto row = 2 * static_cast<Eigen::Index>(n);
        out.row(row) = doublets[n].v_up.adjoint() * applied;
        out.row(row + 1) = doublets[n].v_down.adjoint() * applied;
    }
    return out;
}

}  // namespace

SpinorSpectrum solve_spectrum(const HamiltonianMatrix& H, int n_states, const EigenSolverOptions& options) {
    const auto dim = static_cast<int>(H.dimension());
    if (n_states < 1 || n_states > dim)
        throw ConfigError("requested " + std::to_string(n_states) + " states from a dimension-" + std::to_string(dim) +
                          " Hamiltonian");
    SpinorSpectrum s = H.dimension() <= options.dense_limit ? solve_dense(H.entries, n_states)
                                                             : solve_iterative(H.entries, n_states, options);
    fix_phases(s.vectors);
    s.cutoff = H.cutoff;
    s.included_terms = H.terms;
    return s;
}

DoubletPairing pair_doublets(const SpinorSpectrum& spectrum, double tol) {
    DoubletPairing out;
    const auto n = static_cast<Eigen::Index>(spectrum.energies.size());
    const auto& E = spectrum.energies;
    Eigen::Index i = 0;
    while (i < n) {
        if (i + 1 == n) {
            out.dropped_energy = E(i);
            break;
        }
        if (E(i + 1) - E(i) > tol) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "level " << E(i) << " meV has no Kramers partner (next level " << E(i + 1) << " meV, tolerance "
                << tol << " meV)";
            throw SolverError(msg.str());
        }
        if (i + 2 < n && E(i + 2) - E(i + 1) <= tol) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "ambiguous pairing: levels " << E(i) << ", " << E(i + 1) << ", " << E(i + 2)
                << " meV coincide within " << tol << " meV";
            throw SolverError(msg.str());
        }
        KramersDoublet d;
        d.E = 0.5 * (E(i) + E(i + 1));
        d.v_up = spectrum.vectors.col(i);
        d.v_down = spectrum.vectors.col(i + 1);
        d.index = static_cast<int>(out.doublets.size());
        out.doublets.push_back(std::move(d));
        i += 2;
    }
    return out;
}

Eigen::Matrix2cd qubit_h1(const KramersDoublet& ground, const HamiltonianMatrix& Hm_prime) {
    Eigen::MatrixXcd v(ground.v_up.size(), 2);
    v << ground.v_up, ground.v_down;
    return v.adjoint() * Hm_prime.entries * v;
}

std::string to_string(Tier tier) {
    switch (tier) {
        case Tier::analytic2: return "analytic2";
        case Tier::analytic4: return "analytic4";
        case Tier::linearized: return "linearized";
        case Tier::renormalized: return "renormalized";
        case Tier::minimal_exact: return "minimal_exact";
        case Tier::converged_zeeman: return "converged_zeeman";
        case Tier::converged_full: return "converged_full";
    }
    return "unknown";
}

Tier parse_tier(std::string_view name) {
    for (Tier t : {Tier::analytic2, Tier::analytic4, Tier::linearized, Tier::renormalized, Tier::minimal_exact,
                   Tier::converged_zeeman, Tier::converged_full})
        if (to_string(t) == name) return t;
    throw ConfigError("unknown tier '" + std::string(name) + "'");
}

RabiResult rabi_from_projections(const DoubletProjections& p, double E_ac, Tier tier) {
    const auto count = static_cast<Eigen::Index>(p.energies.size());
    if (count < 2) throw SolverError("Rabi sum needs at least one excited doublet");

    RabiResult result;
    result.tier = tier;
    const Eigen::Matrix2cd h1 = p.zeeman.topRows<2>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(h1);
    const double splitting = eig.eigenvalues()(1) - eig.eigenvalues()(0);
    result.f_L = to_ghz(std::max(splitting, 0.0));
    const double scale = p.zeeman.cwiseAbs().maxCoeff();
    if (scale == 0.0 || splitting <= 1e-12 * scale) return result;  // f_R undefined

    const Eigen::Vector2cd c0 = eig.eigenvectors().col(0);
    const Eigen::Vector2cd c1 = eig.eigenvectors().col(1);
    const Eigen::Index excited = count - 1;
    const Eigen::Index tail_start = count - std::max<Eigen::Index>(1, (excited + 9) / 10);
    cplx total = 0.0, tail = 0.0;
    for (Eigen::Index n = 1; n < count; ++n) {
        const double gap = p.energies[0] - p.energies[static_cast<std::size_t>(n)];
        if (std::abs(gap) < kKramersTolerance)
            throw PerturbationError("excited doublet " + std::to_string(n) + " is degenerate with the ground doublet");
        const Eigen::Matrix2cd Y = p.dipole.middleRows<2>(2 * n);
        const Eigen::Matrix2cd M = p.zeeman.middleRows<2>(2 * n);
        const cplx term = ((Y * c1).dot(M * c0) + (M * c1).dot(Y * c0)) / gap;
        total += term;
        if (n >= tail_start) tail += term;
    }
    result.f_R = to_ghz(constants::e_scale * E_ac * std::abs(total));
    result.tail_fraction = std::abs(total) > 0.0 ? std::abs(tail) / std::abs(total) : 0.0;
    return result;
}

RabiResult rabi_sum_over_states(const std::vector<KramersDoublet>& doublets, const HamiltonianMatrix& Hm_prime,
                                const HamiltonianMatrix& dipole_y, double E_ac, int n_excited, Tier tier) {
    if (n_excited < 1) throw ConfigError("n_excited must be at least 1");
    if (doublets.size() < static_cast<std::size_t>(n_excited) + 1)
        throw ConfigError("requested " + std::to_string(n_excited) + " excited doublets, only " +
                          std::to_string(doublets.size() - 1) + " available");
    const auto count = static_cast<std::size_t>(n_excited) + 1;
    DoubletProjections p;
    for (std::size_t n = 0; n < count; ++n) p.energies.push_back(doublets[n].E);
    p.dipole = project_on_doublets(doublets, dipole_y.entries, count);
    p.zeeman = project_on_doublets(doublets, Hm_prime.entries, count);
    return rabi_from_projections(p, E_ac, tier);
}

ConvergedQubit::ConvergedQubit(const MaterialParams& m, const BoxGeometry& g, Orientation orientation, double E0,
                               const StrainConfig& strain, const ConvergedOptions& options)
    : tier_(options.paramagnetic ? Tier::converged_full : Tier::converged_zeeman) {
    if (options.n_excited < 1) throw ConfigError("n_excited must be at least 1");
    const HamiltonianMatrix H = assemble_static(m, g, orientation, options.cutoff, E0, strain, options.max_dimension);
    const int dim = static_cast<int>(H.dimension());
    // Two spare states so that the last kept doublet is complete.
    const int wanted = std::min(dim, 2 * (options.n_excited + 1) + 2);
    const SpinorSpectrum spectrum = solve_spectrum(H, wanted, options.solver);
    doublets_ = pair_doublets(spectrum, options.kramers_tolerance).doublets;
    if (doublets_.size() > static_cast<std::size_t>(options.n_excited) + 1)
        doublets_.resize(static_cast<std::size_t>(options.n_excited) + 1);
    if (doublets_.size() < 2) throw SolverError("basis too small for a sum over excited doublets");

    for (const auto& d : doublets_) energies_.push_back(d.E);
    dipole_ = project_on_doublets(doublets_, assemble_position_y(g, options.cutoff).entries, doublets_.size());
    for (int axis = 0; axis < 3; ++axis) {
        const Eigen::Vector3d unit = Eigen::Vector3d::Unit(axis);
        HamiltonianMatrix Hm = assemble_zeeman(m, unit, options.cutoff);
        if (options.paramagnetic) Hm += assemble_paramagnetic(m, g, orientation, unit, options.cutoff);
        unit_field_[static_cast<std::size_t>(axis)] = project_on_doublets(doublets_, Hm.entries, doublets_.size());
    }
}

DoubletProjections ConvergedQubit::projections(const Eigen::Vector3d& B) const {
    DoubletProjections p;
    p.energies = energies_;
    p.dipole = dipole_;
    p.zeeman = B.x() * unit_field_[0] + B.y() * unit_field_[1] + B.z() * unit_field_[2];
    return p;
}

RabiResult ConvergedQubit::evaluate(const Eigen::Vector3d& B, double E_ac) const {
    RabiResult r = rabi_from_projections(projections(B), E_ac, tier_);
    r.g_principal = g_principal();
    return r;
}

std::array<double, 3> ConvergedQubit::g_principal() const {
    std::array<double, 3> g{};
    for (int axis = 0; axis < 3; ++axis) {
        const Eigen::Matrix2cd h1 = unit_field_[static_cast<std::size_t>(axis)].topRows<2>();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(h1);
        g[static_cast<std::size_t>(axis)] = (eig.eigenvalues()(1) - eig.eigenvalues()(0)) / constants::mu_B;
    }
    return g;
}

double ConvergedQubit::ground_heavy_weight() const {
    const auto& d = doublets_.front();
    double heavy = 0.0;
    for (Eigen::Index i = 0; i < d.v_up.size(); ++i) {
        const auto jz = i % kSpinComponents;
        if (jz == 0 || jz == 3) heavy += std::norm(d.v_up(i)) + std::norm(d.v_down(i));
    }
    return 0.5 * heavy;
}

}  // namespace holebox
