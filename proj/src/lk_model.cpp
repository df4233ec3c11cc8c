#include "holebox/lk_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "holebox/constants.hpp"
#include "holebox/errors.hpp"

namespace holebox {

namespace {

using constants::hbar2_over_2m0;

const double kSqrt3 = std::sqrt(3.0);
constexpr cplx kI{0.0, 1.0};

EnvelopeOperator scaled(EnvelopeOperator op, cplx factor) {
    for (auto& t : op) t.coeff *= factor;
    return op;
}

EnvelopeOperator& append(EnvelopeOperator& dst, const EnvelopeOperator& src, cplx factor = 1.0) {
    for (const auto& t : src) dst.push_back({t.coeff * factor, t.ops});
    return dst;
}

EnvelopeOperator identity_operator(cplx coeff) { return {EnvelopeTerm{coeff, {}}}; }

EnvelopeTerm single(cplx coeff, int axis, AxisOp op) {
    EnvelopeTerm t{coeff, {}};
    t.ops[static_cast<std::size_t>(axis)] = op;
    return t;
}

EnvelopeTerm pair(cplx coeff, int axis_a, AxisOp op_a, int axis_b, AxisOp op_b) {
    EnvelopeTerm t = single(coeff, axis_a, op_a);
    t.ops[static_cast<std::size_t>(axis_b)] = op_b;
    return t;
}

/// Symmetrized bilinear (k_i k_j + k_j k_i)/2, or a substitute with the same symmetry.
using Bilinear = std::function<EnvelopeOperator(int, int)>;

/// P, Q, R, S assembled from an arbitrary bilinear in the wave vector.
SpinOperator lk_from_bilinear(const MaterialParams& m, Orientation orientation, const Bilinear& kk) {
    const double c = hbar2_over_2m0;
    const auto kxx = kk(0, 0), kyy = kk(1, 1), kzz = kk(2, 2);
    const auto kxy = kk(0, 1), kxz = kk(0, 2), kyz = kk(1, 2);

    EnvelopeOperator P;
    append(P, kxx, c * m.gamma1);
    append(P, kyy, c * m.gamma1);
    append(P, kzz, c * m.gamma1);

    EnvelopeOperator Q;
    append(Q, kxx, c * m.gamma2);
    append(Q, kyy, c * m.gamma2);
    append(Q, kzz, -2.0 * c * m.gamma2);

    // The [100] box swaps gamma2 and gamma3 inside R only.
    const double g_diag = orientation == Orientation::dot_110 ? m.gamma3 : m.gamma2;
    const double g_offd = orientation == Orientation::dot_110 ? m.gamma2 : m.gamma3;
    EnvelopeOperator R;
    append(R, kxx, -c * kSqrt3 * g_diag);
    append(R, kyy, c * kSqrt3 * g_diag);
    append(R, kxy, 2.0 * kI * c * kSqrt3 * g_offd);

    EnvelopeOperator S;
    append(S, kxz, 2.0 * c * kSqrt3 * m.gamma3);
    append(S, kyz, -2.0 * kI * c * kSqrt3 * m.gamma3);

    EnvelopeOperator PplusQ = P, PminusQ = P;
    append(PplusQ, Q);
    append(PminusQ, Q, -1.0);

    SpinOperator H;
    H.block[0][0] = PplusQ;
    H.block[1][1] = PminusQ;
    H.block[2][2] = PminusQ;
    H.block[3][3] = PplusQ;
    H.set_hermitian_pair(0, 1, scaled(S, -1.0));
    H.set_hermitian_pair(0, 2, R);
    H.set_hermitian_pair(1, 3, R);
    H.set_hermitian_pair(2, 3, S);
    return H;
}

/// Angular momentum 3/2 matrices in the (+3/2, +1/2, -1/2, -3/2) basis.
std::array<Eigen::Matrix4cd, 3> spin_three_halves() {
    Eigen::Matrix4cd Jp = Eigen::Matrix4cd::Zero();
    Jp(0, 1) = kSqrt3;
    Jp(1, 2) = 2.0;
    Jp(2, 3) = kSqrt3;
    const Eigen::Matrix4cd Jm = Jp.adjoint();
    Eigen::Matrix4cd Jz = Eigen::Matrix4cd::Zero();
    Jz.diagonal() << 1.5, 0.5, -0.5, -1.5;
    return {(Jp + Jm) / 2.0, (Jp - Jm) / (2.0 * kI), Jz};
}

TermSet only_lk() {
    TermSet t;
    t.lk = true;
    return t;
}

void check_dimension(const BasisCutoff& cutoff, std::size_t max_dimension) {
    validate(cutoff);
    if (cutoff.dimension() > max_dimension)
        throw ConfigError("basis dimension " + std::to_string(cutoff.dimension()) + " exceeds the limit " +
                          std::to_string(max_dimension));
}

}  // namespace

Eigen::Vector3d FieldConfig::direction() const {
    return {std::sin(theta) * std::sin(phi), std::sin(theta) * std::cos(phi), std::cos(theta)};
}

TermSet& TermSet::operator|=(const TermSet& o) {
    lk |= o.lk;
    electric |= o.electric;
    zeeman |= o.zeeman;
    paramagnetic |= o.paramagnetic;
    strain |= o.strain;
    return *this;
}

double HamiltonianMatrix::hermiticity_residual() const {
    const double scale = entries.cwiseAbs().maxCoeff();
    if (entries.size() == 0 || scale == 0.0) return 0.0;
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() / scale;
}

HamiltonianMatrix& HamiltonianMatrix::operator+=(const HamiltonianMatrix& o) {
    if (!(cutoff == o.cutoff)) throw ConfigError("cannot add Hamiltonians over different bases");
    entries += o.entries;
    terms |= o.terms;
    return *this;
}

void SpinOperator::set_hermitian_pair(int a, int b, EnvelopeOperator op) {
    block[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = adjoint(op);
    block[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = std::move(op);
}

EnvelopeOperator adjoint(const EnvelopeOperator& op) {
    EnvelopeOperator out = op;
    for (auto& t : out) t.coeff = std::conj(t.coeff);
    return out;
}

Eigen::MatrixXcd axis_table(AxisOp op, int N, double L) {
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const int n = i + 1, m = j + 1;
            switch (op) {
                case AxisOp::identity: T(i, j) = n == m ? 1.0 : 0.0; break;
                case AxisOp::k: T(i, j) = momentum_element(n, m, L); break;
                case AxisOp::k2: T(i, j) = ksquared_element(n, m, L); break;
                case AxisOp::u: T(i, j) = position_element(n, m, L); break;
                case AxisOp::ku: T(i, j) = momentum_position_element(n, m); break;
            }
        }
    }
    return T;
}

HamiltonianMatrix project(const SpinOperator& op, const BoxGeometry& geometry, const BasisCutoff& cutoff,
                          TermSet terms) {
    validate(cutoff);
    validate(geometry);

    struct Entry {
        int i, j;
        cplx v;
    };
    // Sparse 1D tables, indexed [axis][op].
    std::array<std::array<std::vector<Entry>, 5>, 3> tables;
    for (int axis = 0; axis < 3; ++axis) {
        for (int o = 0; o < 5; ++o) {
            const auto T = axis_table(static_cast<AxisOp>(o), cutoff.along(axis), geometry.side(axis));
            for (int i = 0; i < T.rows(); ++i)
                for (int j = 0; j < T.cols(); ++j)
                    if (T(i, j) != 0.0) tables[axis][o].push_back({i, j, T(i, j)});
        }
    }

    const auto dim = static_cast<Eigen::Index>(cutoff.dimension());
    HamiltonianMatrix H{cutoff, terms, Eigen::MatrixXcd::Zero(dim, dim)};
    const auto stride_y = static_cast<Eigen::Index>(cutoff.Nx);
    const auto stride_z = static_cast<Eigen::Index>(cutoff.Nx) * cutoff.Ny;

    for (int a = 0; a < kSpinComponents; ++a) {
        for (int b = 0; b < kSpinComponents; ++b) {
            for (const auto& term : op.block[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) {
                const auto& tx = tables[0][static_cast<int>(term.ops[0])];
                const auto& ty = tables[1][static_cast<int>(term.ops[1])];
                const auto& tz = tables[2][static_cast<int>(term.ops[2])];
                for (const auto& ez : tz) {
                    const cplx cz = term.coeff * ez.v;
                    for (const auto& ey : ty) {
                        const cplx cyz = cz * ey.v;
                        const Eigen::Index row_yz = ey.i * stride_y + ez.i * stride_z;
                        const Eigen::Index col_yz = ey.j * stride_y + ez.j * stride_z;
                        for (const auto& ex : tx) {
                            const Eigen::Index row = kSpinComponents * (ex.i + row_yz) + a;
                            const Eigen::Index col = kSpinComponents * (ex.j + col_yz) + b;
                            H.entries(row, col) += cyz * ex.v;
                        }
                    }
                }
            }
        }
    }
    return H;
}

SpinOperator lk_operator(const MaterialParams& m, Orientation orientation) {
    return lk_from_bilinear(m, orientation, [](int i, int j) -> EnvelopeOperator {
        if (i == j) return {single(1.0, i, AxisOp::k2)};
        return {pair(1.0, i, AxisOp::k, j, AxisOp::k)};
    });
}

SpinOperator paramagnetic_operator(const MaterialParams& m, Orientation orientation, const Eigen::Vector3d& B) {
    // k -> k + e A / hbar with A = B x r / 2, so (eA/hbar)_j = sum_l C(j, l) r_l.
    const double s = 0.5 / constants::hbar_over_e;
    Eigen::Matrix3d C;
    C << 0.0, -B.z(), B.y(),  //
        B.z(), 0.0, -B.x(),   //
        -B.y(), B.x(), 0.0;
    C *= s;

    // {k_i, r_l}/2: a product over two axes, or the symmetrized (k u + u k)/2 on one axis.
    auto half_anticommutator = [](cplx coeff, int i, int l) {
        return i == l ? single(coeff, i, AxisOp::ku) : pair(coeff, i, AxisOp::k, l, AxisOp::u);
    };
    // Linear part of (k_i k_j + k_j k_i)/2 is ({k_i, a_j} + {k_j, a_i})/2.
    return lk_from_bilinear(m, orientation, [&](int i, int j) {
        EnvelopeOperator op;
        for (int l = 0; l < 3; ++l) {
            if (C(j, l) != 0.0) op.push_back(half_anticommutator(C(j, l), i, l));
            if (C(i, l) != 0.0) op.push_back(half_anticommutator(C(i, l), j, l));
        }
        return op;
    });
}

SpinOperator zeeman_operator(const MaterialParams& m, const Eigen::Vector3d& B) {
    const auto J = spin_three_halves();
    const Eigen::Matrix4cd Hz = 2.0 * m.kappa * constants::mu_B * (B.x() * J[0] + B.y() * J[1] + B.z() * J[2]);
    SpinOperator op;
    for (int a = 0; a < kSpinComponents; ++a)
        for (int b = 0; b < kSpinComponents; ++b)
            if (Hz(a, b) != 0.0) op.block[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = identity_operator(Hz(a, b));
    return op;
}

SpinOperator electric_operator(double E0) {
    SpinOperator op;
    if (E0 == 0.0) return op;
    for (std::size_t a = 0; a < kSpinComponents; ++a)
        op.block[a][a] = {single(-constants::e_scale * E0, 1, AxisOp::u)};
    return op;
}

StrainShifts strain_shifts(const MaterialParams& m, const StrainConfig& strain) {
    if (strain.eps_parallel == 0.0) return {};
    require_strain_parameters(m);
    const double nu = *m.nu;
    const double hydro = (nu - 2.0) * m.a_v * 1e3 * strain.eps_parallel;
    const double shear = (nu + 1.0) * (*m.b_v) * 1e3 * strain.eps_parallel;
    return {hydro - shear, hydro + shear};
}

SpinOperator strain_operator(const MaterialParams& m, const StrainConfig& strain) {
    const auto shifts = strain_shifts(m, strain);
    SpinOperator op;
    if (shifts.heavy != 0.0) {
        op.block[0][0] = identity_operator(shifts.heavy);
        op.block[3][3] = identity_operator(shifts.heavy);
    }
    if (shifts.light != 0.0) {
        op.block[1][1] = identity_operator(shifts.light);
        op.block[2][2] = identity_operator(shifts.light);
    }
    return op;
}

HamiltonianMatrix assemble_lk(const MaterialParams& m, const BoxGeometry& geometry, Orientation orientation,
                              const BasisCutoff& cutoff, std::size_t max_dimension) {
    check_dimension(cutoff, max_dimension);
    return project(lk_operator(m, orientation), geometry, cutoff, only_lk());
}

HamiltonianMatrix assemble_electric(double E0, const BoxGeometry& geometry, const BasisCutoff& cutoff) {
    TermSet t;
    t.electric = true;
    return project(electric_operator(E0), geometry, cutoff, t);
}

HamiltonianMatrix assemble_zeeman(const MaterialParams& m, const Eigen::Vector3d& B, const BasisCutoff& cutoff) {
    TermSet t;
    t.zeeman = true;
    // The Zeeman term does not touch the envelope; any geometry works.
    return project(zeeman_operator(m, B), BoxGeometry{1.0, 1.0, 1.0}, cutoff, t);
}

HamiltonianMatrix assemble_zeeman(const MaterialParams& m, double B, double theta, double phi,
                                  const BasisCutoff& cutoff) {
    return assemble_zeeman(m, FieldConfig{B, theta, phi}.field_vector(), cutoff);
}

HamiltonianMatrix assemble_paramagnetic(const MaterialParams& m, const BoxGeometry& geometry, Orientation orientation,
                                        const Eigen::Vector3d& B, const BasisCutoff& cutoff) {
    TermSet t;
    t.paramagnetic = true;
    return project(paramagnetic_operator(m, orientation, B), geometry, cutoff, t);
}

HamiltonianMatrix assemble_paramagnetic(const MaterialParams& m, const BoxGeometry& geometry, Orientation orientation,
                                        double B, double theta, double phi, const BasisCutoff& cutoff) {
    return assemble_paramagnetic(m, geometry, orientation, FieldConfig{B, theta, phi}.field_vector(), cutoff);
}

HamiltonianMatrix assemble_strain(const MaterialParams& m, const StrainConfig& strain, const BasisCutoff& cutoff) {
    TermSet t;
    t.strain = true;
    return project(strain_operator(m, strain), BoxGeometry{1.0, 1.0, 1.0}, cutoff, t);
}

HamiltonianMatrix assemble_position_y(const BoxGeometry& geometry, const BasisCutoff& cutoff) {
    SpinOperator op;
    for (std::size_t a = 0; a < kSpinComponents; ++a) op.block[a][a] = {single(1.0, 1, AxisOp::u)};
    return project(op, geometry, cutoff, TermSet{});
}

HamiltonianMatrix assemble_static(const MaterialParams& m, const BoxGeometry& geometry, Orientation orientation,
                                  const BasisCutoff& cutoff, double E0, const StrainConfig& strain,
                                  std::size_t max_dimension) {
    check_dimension(cutoff, max_dimension);
    SpinOperator op = lk_operator(m, orientation);
    TermSet terms = only_lk();
    if (E0 != 0.0) {
        const auto e = electric_operator(E0);
        for (std::size_t a = 0; a < kSpinComponents; ++a) append(op.block[a][a], e.block[a][a]);
        terms.electric = true;
    }
    if (strain.eps_parallel != 0.0) {
        const auto s = strain_operator(m, strain);
        for (std::size_t a = 0; a < kSpinComponents; ++a) append(op.block[a][a], s.block[a][a]);
        terms.strain = true;
    }
    return project(op, geometry, cutoff, terms);
}

}  // namespace holebox
