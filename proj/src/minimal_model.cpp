#include "holebox/minimal_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "holebox/constants.hpp"
#include "holebox/errors.hpp"

namespace holebox {

namespace {

using constants::hbar2_over_2m0;
using constants::mu_B;
using constants::pi;
using cplx = std::complex<double>;

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt2 = std::sqrt(2.0);

/// |<chi_2|u|chi_1>| / L.
const double kDipoleScale = 16.0 / (9.0 * pi * pi);

/// Pseudo-spin-resolved Zeeman elements between mixed states of one subband.
struct ZeemanElements {
    cplx z1, z2, z3, z4, z5, z6;
};

ZeemanElements zeeman_elements(const MixedSubband& s, double K, const Eigen::Vector3d& b) {
    const cplx b_plus{b.x(), b.y()};
    const cplx b_minus{b.x(), -b.y()};
    const double h = s.h, l = s.l;
    return {
        K * (3.0 * h * h - l * l) * b.z(),
        2.0 * K * (kSqrt3 * h * l * b_minus + l * l * b_plus),
        -4.0 * K * h * l * b.z(),
        2.0 * K * (0.5 * kSqrt3 * (h * h - l * l) * b_minus + l * h * b_plus),
        K * (3.0 * l * l - h * h) * b.z(),
        2.0 * K * (-kSqrt3 * h * l * b_minus + h * h * b_plus),
    };
}

/// Prefactor common to the thin-dot formulas: f_R = C * B |E0| E_ac L_y^4 L_z^2 * (material factor) * (angle).
double thin_dot_prefactor(double B, double E0, double E_ac) {
    const double c2 = hbar2_over_2m0 * hbar2_over_2m0;
    const double energy = 256.0 / (81.0 * std::pow(pi, 8)) * mu_B * B * std::abs(E0) * E_ac / c2;
    return constants::to_ghz(energy);
}

double effective_lz2(const MaterialParams& m, double Lz, const StrainConfig& strain) {
    if (strain.eps_parallel == 0.0) return Lz * Lz;
    const double lz2 = strain_equivalent_height(m, Lz, strain.eps_parallel);
    if (!std::isfinite(lz2)) throw ConfigError("strain sits on the divergence of the equivalent height");
    return std::abs(lz2);
}

}  // namespace

SubbandParams subband_params(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                             const StrainConfig& strain) {
    validate(g);
    const double c = hbar2_over_2m0 * pi * pi;
    const double ix = 1.0 / (g.Lx * g.Lx), iy = 1.0 / (g.Ly * g.Ly), iz = 1.0 / (g.Lz * g.Lz);
    const double gR = lateral_mixing_gamma(m, orientation);

    SubbandParams sp;
    sp.P1 = c * m.gamma1 * (ix + iy + iz);
    sp.Q1 = c * m.gamma2 * (ix + iy - 2.0 * iz);
    sp.R1 = -c * kSqrt3 * gR * (ix - iy);
    sp.P2 = c * m.gamma1 * (ix + 4.0 * iy + iz);
    sp.Q2 = c * m.gamma2 * (ix + 4.0 * iy - 2.0 * iz);
    sp.R2 = -c * kSqrt3 * gR * (ix - 4.0 * iy);

    const auto shifts = strain_shifts(m, strain);
    const double dP = 0.5 * (shifts.heavy + shifts.light);
    const double dQ = 0.5 * (shifts.heavy - shifts.light);
    sp.P1 += dP;
    sp.P2 += dP;
    sp.Q1 += dQ;
    sp.Q2 += dQ;
    return sp;
}

MixedSubband mix_subband(double P, double Q, double R) {
    const double s = std::hypot(Q, R);
    MixedSubband out;
    out.E_minus = P - s;
    out.E_plus = P + s;
    if (Q >= 0.0) {
        const double W = std::hypot(R, Q + s);
        if (W == 0.0) {
            out.h = 0.0;
            out.l = 1.0;
        } else {
            out.h = -R / W;
            out.l = (Q + s) / W;
        }
    } else {
        // Same vector as (-R, Q + s)/W, rescaled by (s - Q)/|R| to avoid cancellation.
        const double sign = R < 0.0 ? -1.0 : 1.0;
        const double W = std::hypot(s - Q, R);
        out.h = -sign * (s - Q) / W;
        out.l = std::abs(R) / W;
    }
    return out;
}

std::pair<MixedSubband, MixedSubband> mixed_subbands(const SubbandParams& sp) {
    return {mix_subband(sp.P1, sp.Q1, sp.R1), mix_subband(sp.P2, sp.Q2, sp.R2)};
}

ElectricMixing electric_mixing(const std::pair<MixedSubband, MixedSubband>& ms, double E0, const BoxGeometry& g,
                               const MaterialParams& m) {
    const auto& [s1, s2] = ms;
    ElectricMixing mix;
    mix.Lambda = constants::e_scale * E0 * g.Ly * kDipoleScale;
    mix.lambda_thin = -32.0 * constants::e_scale * E0 * std::pow(g.Ly, 3) /
                      (27.0 * std::pow(pi, 4) * 2.0 * hbar2_over_2m0 * (m.gamma1 + m.gamma2));
    if (E0 == 0.0) return mix;

    const double d_mm = s1.E_minus - s2.E_minus;
    const double d_mp = s1.E_minus - s2.E_plus;
    const double d_pm = s1.E_plus - s2.E_minus;
    const double d_pp = s1.E_plus - s2.E_plus;
    for (double d : {d_mm, d_mp, d_pm, d_pp})
        if (std::abs(d) < kCrossingTolerance)
            throw PerturbationError("perturbation theory invalid near crossing (|E1 - E2| = " + std::to_string(std::abs(d)) +
                                    " meV)");

    const double same = s1.h * s2.h + s1.l * s2.l;
    const double cross = s1.h * s2.l - s2.h * s1.l;
    mix.lam_1m_2m = mix.Lambda * same / d_mm;
    mix.lam_1p_2p = mix.Lambda * same / d_pp;
    mix.lam_1p_2m = mix.Lambda * cross / d_pm;
    mix.lam_1m_2p = -mix.Lambda * cross / d_mp;
    return mix;
}

QubitCoefficients qubit_coefficients(const MixedSubband& ground, double theta, double phi, double B,
                                     const MaterialParams& m) {
    const double h = ground.h, l = ground.l;
    QubitCoefficients q;
    q.g_x = 4.0 * m.kappa * (kSqrt3 * h * l + l * l);
    q.g_y = 4.0 * m.kappa * (kSqrt3 * h * l - l * l);
    q.g_z = 2.0 * m.kappa * (3.0 * h * h - l * l);

    const Eigen::Vector3d b = FieldConfig{B, theta, phi}.direction();
    const double a = q.g_z * b.z();
    const cplx c{q.g_x * b.x(), q.g_y * b.y()};
    const double N = std::sqrt(std::norm(c) + a * a);
    q.f_L = constants::to_ghz(mu_B * B * N);

    const double g_scale = std::abs(q.g_x) + std::abs(q.g_y) + std::abs(q.g_z);
    if (B == 0.0 || N <= 1e-14 * g_scale) {
        q.degenerate = true;
        return q;
    }
    // Lower eigenvector of [[a, conj(c)], [c, -a]]; beta is kept real and non-negative.
    if (a >= 0.0) {
        const double norm = std::sqrt(std::norm(c) + (a + N) * (a + N));
        q.alpha = -std::conj(c) / norm;
        q.beta = (a + N) / norm;
    } else if (std::abs(c) > 0.0) {
        const double norm = std::sqrt((N - a) * (N - a) + std::norm(c));
        q.alpha = -(N - a) * std::conj(c) / (std::abs(c) * norm);
        q.beta = std::abs(c) / norm;
    } else {
        q.alpha = 1.0;
        q.beta = 0.0;
    }
    return q;
}

PiTerms rabi_pi_terms(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                      const FieldConfig& fields, const StrainConfig& strain) {
    const auto ms = mixed_subbands(subband_params(m, g, orientation, strain));
    const auto& [s1, s2] = ms;
    const auto mix = electric_mixing(ms, fields.E0, g, m);
    const auto q = qubit_coefficients(s1, fields.theta, fields.phi, fields.B, m);
    if (q.degenerate) return {};

    const Eigen::Vector3d b = fields.direction();
    const double K = m.kappa * mu_B * fields.B;
    const auto z1 = zeeman_elements(s1, K, b);
    const auto z2 = zeeman_elements(s2, K, b);

    const cplx alpha = q.alpha;
    const double beta = q.beta;
    // Combination picked out by the qubit states for a Zeeman block with diagonal d and off-diagonal o.
    auto weigh = [&](cplx d, cplx o) {
        return -4.0 * alpha * beta * d - 2.0 * beta * beta * o + 2.0 * alpha * alpha * std::conj(o);
    };

    const double D1 = -kDipoleScale * g.Ly * (s1.h * s2.h + s1.l * s2.l);
    const double D2 = -kDipoleScale * g.Ly * (s2.h * s1.l - s1.h * s2.l);

    PiTerms pi;
    pi.pi_2m = D1 / (s1.E_minus - s2.E_minus) *
               (mix.lam_1m_2m * weigh(z2.z1 - z1.z1, z2.z2 - z1.z2) + mix.lam_1m_2p * weigh(z2.z3, z2.z4) +
                mix.lam_2m_1p() * weigh(z1.z3, z1.z4));
    pi.pi_2p = D2 / (s1.E_minus - s2.E_plus) *
               (mix.lam_1m_2m * weigh(z2.z3, z2.z4) + mix.lam_2p_1p() * weigh(z1.z3, z1.z4) +
                mix.lam_1m_2p * weigh(z2.z5 - z1.z1, z2.z6 - z1.z2));
    pi.pi_1p = weigh(z1.z3, z1.z4) / (s1.E_minus - s1.E_plus) *
               (D1 * (mix.lam_1p_2m + mix.lam_1m_2p) + D2 * (mix.lam_1p_2p - mix.lam_1m_2m));
    return pi;
}

double rabi_linearized(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                       const FieldConfig& fields, const StrainConfig& strain) {
    const auto pi = rabi_pi_terms(m, g, orientation, fields, strain);
    return constants::to_ghz(constants::e_scale * fields.E_ac * std::abs(pi.total()));
}

MinimalQubit::MinimalQubit(const MaterialParams& m, const BoxGeometry& g, Orientation orientation, double E0,
                           const StrainConfig& strain)
    : material_(m) {
    const auto sp = subband_params(m, g, orientation, strain);
    const double Lambda = constants::e_scale * E0 * g.Ly * kDipoleScale;

    // Basis {|1,+3/2>, |1,-1/2>, |2,+3/2>, |2,-1/2>}; the time-reversed block is identical.
    Eigen::Matrix4d H;
    H << sp.P1 + sp.Q1, sp.R1, Lambda, 0.0,  //
        sp.R1, sp.P1 - sp.Q1, 0.0, Lambda,   //
        Lambda, 0.0, sp.P2 + sp.Q2, sp.R2,   //
        0.0, Lambda, sp.R2, sp.P2 - sp.Q2;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(H);
    energies_ = eig.eigenvalues();
    vectors_ = eig.eigenvectors();

    // Primitive 8-state basis: 0..3 as above, 4..7 = {|1,-3/2>, |1,+1/2>, |2,-3/2>, |2,+1/2>}.
    states_.setZero();
    for (int k = 0; k < 4; ++k) {
        states_.block<4, 1>(0, 2 * k) = vectors_.col(k);
        states_.block<4, 1>(4, 2 * k + 1) = vectors_.col(k);
    }
    Eigen::Matrix<double, 8, 8> y_primitive = Eigen::Matrix<double, 8, 8>::Zero();
    const double y21 = position_element(2, 1, g.Ly);
    for (int block = 0; block < 8; block += 4) {
        for (int j = 0; j < 2; ++j) {
            y_primitive(block + 2 + j, block + j) = y21;
            y_primitive(block + j, block + 2 + j) = y21;
        }
    }
    dipole_ = states_.transpose() * y_primitive * states_;
}

double MinimalQubit::ground_heavy_weight() const {
    return vectors_(0, 0) * vectors_(0, 0) + vectors_(2, 0) * vectors_(2, 0);
}

MinimalQubit::Matrix8cd MinimalQubit::zeeman(const Eigen::Vector3d& B) const {
    const SpinOperator op = zeeman_operator(material_, B);
    // j_z component of each primitive state (+3/2 = 0 ... -3/2 = 3); envelopes alternate in pairs.
    static constexpr std::array<int, 8> jz{0, 2, 0, 2, 3, 1, 3, 1};
    static constexpr std::array<int, 8> envelope{1, 1, 2, 2, 1, 1, 2, 2};
    Matrix8cd Hz = Matrix8cd::Zero();
    for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
            if (envelope[a] != envelope[b]) continue;
            for (const auto& term : op.block[jz[a]][jz[b]]) Hz(a, b) += term.coeff;
        }
    }
    return states_.transpose().cast<cplx>() * Hz * states_.cast<cplx>();
}

double MinimalQubit::larmor(const Eigen::Vector3d& B) const {
    const Matrix8cd M = zeeman(B);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> h1(M.block<2, 2>(0, 0));
    return constants::to_ghz(h1.eigenvalues()(1) - h1.eigenvalues()(0));
}

double MinimalQubit::rabi(const Eigen::Vector3d& B, double E_ac) const {
    if (B.norm() == 0.0) return 0.0;
    const Matrix8cd M = zeeman(B);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> h1(M.block<2, 2>(0, 0));
    const double splitting = h1.eigenvalues()(1) - h1.eigenvalues()(0);
    if (splitting <= 1e-12 * M.cwiseAbs().maxCoeff())
        throw SolverError("qubit doublet is not split by the magnetic field (f_L = 0)");
    const Eigen::Vector2cd c0 = h1.eigenvectors().col(0);
    const Eigen::Vector2cd c1 = h1.eigenvectors().col(1);

    cplx sum = 0.0;
    for (int n = 1; n < 4; ++n) {
        const Eigen::Matrix2cd Y = dipole_.block<2, 2>(2 * n, 0).cast<cplx>();
        const Eigen::Matrix2cd Z = M.block<2, 2>(2 * n, 0);
        const cplx numerator = (Y * c1).dot(Z * c0) + (Z * c1).dot(Y * c0);
        sum += numerator / (energies_(0) - energies_(n));
    }
    return constants::to_ghz(constants::e_scale * E_ac * std::abs(sum));
}

double minimal_exact_rabi(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                          const FieldConfig& fields, const StrainConfig& strain) {
    return MinimalQubit(m, g, orientation, fields.E0, strain).rabi(fields.field_vector(), fields.E_ac);
}

double lateral_mixing_gamma(const MaterialParams& m, Orientation orientation) noexcept {
    return orientation == Orientation::dot_110 ? m.gamma3 : m.gamma2;
}

std::pair<double, double> thin_dot_light_mixing(const MaterialParams& m, const BoxGeometry& g,
                                                Orientation orientation) {
    const double r = -kSqrt3 / 4.0 * lateral_mixing_gamma(m, orientation) / m.gamma2;
    const double zy = g.Lz * g.Lz / (g.Ly * g.Ly), zx = g.Lz * g.Lz / (g.Lx * g.Lx);
    return {r * (zy - zx), r * (4.0 * zy - zx)};
}

std::array<double, 3> thin_dot_g_factors(const MaterialParams& m, const BoxGeometry& g, Orientation orientation) {
    const double dl1 = thin_dot_light_mixing(m, g, orientation).first;
    const double gxy = 4.0 * kSqrt3 * m.kappa * dl1;
    return {gxy, gxy, 6.0 * m.kappa};
}

double heavy_hole_angular_factor(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                                 double theta) {
    const double k = lateral_mixing_gamma(m, orientation) / (2.0 * m.gamma2) *
                     (g.Lz * g.Lz / (g.Ly * g.Ly) - g.Lz * g.Lz / (g.Lx * g.Lx));
    const double s = std::sin(theta), c = std::cos(theta);
    if (k == 0.0) return std::abs(s);
    // sin(theta) / sqrt(1 + k^2 tan^2(theta)), finite at theta = pi/2.
    return std::abs(s * c) / std::sqrt(c * c + k * k * s * s);
}

double light_hole_angular_factor(double theta, double phi) {
    const double s = std::sin(theta), c = std::cos(theta), s2p = std::sin(2.0 * phi);
    return std::abs(s) * std::sqrt((c * c + 4.0 * s * s * s2p * s2p) / (c * c + 4.0 * s * s));
}

double rabi_thin_dot(const MaterialParams& m, const BoxGeometry& g, Orientation orientation,
                     const FieldConfig& fields, int order, const StrainConfig& strain) {
    if (order != 2 && order != 4) throw ConfigError("thin-dot expansion order must be 2 or 4");
    BoxGeometry eff = g;
    eff.Lz = std::sqrt(effective_lz2(m, g.Lz, strain));

    const double gR = lateral_mixing_gamma(m, orientation);
    const double g12 = m.gamma1 + m.gamma2;
    const double material = gR * std::abs(m.kappa) / (m.gamma2 * g12 * g12);
    const double lengths = std::pow(eff.Ly, 4) * eff.Lz * eff.Lz;
    const double f2 = thin_dot_prefactor(fields.B, fields.E0, fields.E_ac) * material * lengths *
                      heavy_hole_angular_factor(m, eff, orientation, fields.theta);
    if (order == 2) return f2;

    const double zy = eff.Lz * eff.Lz / (eff.Ly * eff.Ly), zx = eff.Lz * eff.Lz / (eff.Lx * eff.Lx);
    const double A1 = 10.0 * (m.gamma1 * m.gamma2 + m.gamma2 * m.gamma2 + 3.0 * gR * gR);
    const double A2 = 12.0 * gR * gR;
    const double A3 = gR * g12;
    const double bracket = A1 * zy - A2 * zx + A3 * (5.0 * zy - 2.0 * zx) * std::cos(2.0 * fields.phi);
    return f2 * (1.0 + bracket / (4.0 * m.gamma2 * g12));
}

double light_hole_rabi(const MaterialParams& m, const BoxGeometry& g, const FieldConfig& fields) {
    const double g1m2 = m.gamma1 - m.gamma2;
    const double material = m.gamma3 * std::abs(m.kappa) / (m.gamma2 * g1m2 * g1m2);
    return thin_dot_prefactor(fields.B, fields.E0, fields.E_ac) * material * std::pow(g.Ly, 4) * g.Lz * g.Lz *
           light_hole_angular_factor(fields.theta, fields.phi);
}

double e_max(const MaterialParams& m, const BoxGeometry& g, Orientation orientation, EmaxModel model) {
    if (model == EmaxModel::thin_dot)
        return 27.0 * std::pow(pi, 4) * 2.0 * hbar2_over_2m0 * (m.gamma1 + m.gamma2) /
               (64.0 * kSqrt2 * constants::e_scale * std::pow(g.Ly, 3));
    const auto [s1, s2] = mixed_subbands(subband_params(m, g, orientation));
    const double dipole = kDipoleScale * g.Ly * std::abs(s1.h * s2.h + s1.l * s2.l);
    return (s2.E_minus - s1.E_minus) / (2.0 * kSqrt2 * constants::e_scale * dipole);
}

double renormalization_factor(double E0, double E_max) noexcept {
    const double x = E0 / E_max;
    return std::pow(1.0 + 0.5 * x * x, -1.5);
}

double renormalized_rabi(double fr_linear, double E0, const BoxGeometry& g, const MaterialParams& m,
                         Orientation orientation, EmaxModel model) {
    return fr_linear * renormalization_factor(E0, e_max(m, g, orientation, model));
}

double strain_equivalent_height(const MaterialParams& m, double Lz, double eps_parallel) {
    if (eps_parallel == 0.0) return Lz * Lz;
    require_strain_parameters(m);
    const double inv = 1.0 / (Lz * Lz) +
                       (*m.nu + 1.0) * (*m.b_v) * 1e3 * eps_parallel / (2.0 * hbar2_over_2m0 * pi * pi * m.gamma2);
    if (inv == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / inv;
}

double strain_divergence(const MaterialParams& m, double Lz) {
    require_strain_parameters(m);
    return -2.0 * hbar2_over_2m0 * pi * pi * m.gamma2 / (Lz * Lz * (*m.nu + 1.0) * (*m.b_v) * 1e3);
}

}  // namespace holebox
