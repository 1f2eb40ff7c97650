#pragma once

// Special-relativistic kinematics: pure boosts, velocity addition, Wigner
// rotations, and the SU(2) <-> SO(3) dictionary.

#include "twr/core.hpp"

#include <array>

namespace twr {

//---------------------------------------------------------------------------//
// Matrix groups
//---------------------------------------------------------------------------//

/// 4x4 Lorentz matrix acting on contravariant components.
class LorentzMap {
public:
    LorentzMap() = default;
    explicit LorentzMap(const Mat4& m) : m_(m) {}

    const Mat4& matrix() const { return m_; }

    LorentzMap operator*(const LorentzMap& o) const { return LorentzMap(m_ * o.m_); }
    FourVector operator*(const FourVector& p) const { return FourVector(m_ * p.components()); }

    /// eta L^T eta, exact for any element of O(1,3).
    LorentzMap inverse() const { return LorentzMap(minkowski() * m_.transpose() * minkowski()); }

    /// max |L^T eta L - eta|
    double metric_residual() const
    {
        return (m_.transpose() * minkowski() * m_ - minkowski()).cwiseAbs().maxCoeff();
    }

    bool is_proper_orthochronous(double tol = kInvariantTol) const
    {
        return metric_residual() <= tol && std::abs(m_.determinant() - 1.0) <= tol
               && m_(0, 0) >= 1.0 - tol;
    }

    static LorentzMap rotation(const Mat3& r)
    {
        Mat4 m = Mat4::Identity();
        m.bottomRightCorner<3, 3>() = r;
        return LorentzMap(m);
    }

private:
    Mat4 m_ = Mat4::Identity();
};

class Rotation3 {
public:
    Rotation3() = default;
    explicit Rotation3(const Mat3& m) : m_(m) {}

    const Mat3& matrix() const { return m_; }
    Rotation3 operator*(const Rotation3& o) const { return Rotation3(m_ * o.m_); }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }
    Rotation3 inverse() const { return Rotation3(m_.transpose()); }

    bool is_valid(double tol = kInvariantTol) const
    {
        return (m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol
               && std::abs(m_.determinant() - 1.0) <= tol;
    }

private:
    Mat3 m_ = Mat3::Identity();
};

class SU2Element {
public:
    SU2Element() = default;
    explicit SU2Element(const Mat2c& m) : m_(m) {}

    const Mat2c& matrix() const { return m_; }
    SU2Element operator*(const SU2Element& o) const { return SU2Element(m_ * o.m_); }
    Vec2c operator*(const Vec2c& psi) const { return m_ * psi; }
    SU2Element operator-() const { return SU2Element(-m_); }
    SU2Element inverse() const { return SU2Element(m_.adjoint()); }

    bool is_valid(double tol = kInvariantTol) const
    {
        return (m_.adjoint() * m_ - Mat2c::Identity()).cwiseAbs().maxCoeff() <= tol
               && std::abs(m_.determinant() - 1.0) <= tol;
    }

private:
    Mat2c m_ = Mat2c::Identity();
};

//---------------------------------------------------------------------------//
// Pauli matrices and the su(2) basis J_a = -(i/2) sigma_a
//---------------------------------------------------------------------------//

inline const std::array<Mat2c, 3>& pauli()
{
    static const std::array<Mat2c, 3> s = [] {
        const cplx i(0.0, 1.0);
        std::array<Mat2c, 3> out;
        out[0] << 0, 1, 1, 0;
        out[1] << 0, -i, i, 0;
        out[2] << 1, 0, 0, -1;
        return out;
    }();
    return s;
}

inline const std::array<Mat2c, 3>& su2_generators()
{
    static const std::array<Mat2c, 3> j = [] {
        const cplx half_i(0.0, -0.5);
        std::array<Mat2c, 3> out;
        for (int a = 0; a < 3; ++a) {
            out[a] = half_i * pauli()[a];
        }
        return out;
    }();
    return j;
}

/// x^a J_a
inline Mat2c su2_algebra_from_vector(const Vec3& x)
{
    const auto& j = su2_generators();
    return x[0] * j[0] + x[1] * j[1] + x[2] * j[2];
}

/// Components x^a of X = x^a J_a via the trace product h(X, Y) = -2 Tr(XY).
inline Vec3 su2_algebra_to_vector(const Mat2c& x)
{
    const auto& j = su2_generators();
    Vec3 out;
    for (int a = 0; a < 3; ++a) {
        out[a] = -2.0 * (j[a] * x).trace().real();
    }
    return out;
}

/// exp(x^a J_a) = cos(|x|/2) I - i sin(|x|/2) x_hat . sigma, exactly unitary.
inline SU2Element su2_exp(const Vec3& x)
{
    const double t = x.norm();
    if (t == 0.0) {
        return SU2Element();
    }
    const Vec3 n = x / t;
    const auto& s = pauli();
    const Mat2c ns = n[0] * s[0] + n[1] * s[1] + n[2] * s[2];
    return SU2Element(std::cos(0.5 * t) * Mat2c::Identity() - cplx(0.0, std::sin(0.5 * t)) * ns);
}

/// Nearest element of the form [[a, -conj(b)], [b, conj(a)]], |a|^2 + |b|^2 = 1.
/// Removes rounding drift from long products.
inline Mat2c su2_reproject(const Mat2c& u)
{
    const cplx a = 0.5 * (u(0, 0) + std::conj(u(1, 1)));
    const cplx b = 0.5 * (u(1, 0) - std::conj(u(0, 1)));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    Mat2c out;
    out << a / n, -std::conj(b) / n, b / n, std::conj(a) / n;
    return out;
}

//---------------------------------------------------------------------------//
// Boosts and velocity addition
//---------------------------------------------------------------------------//

/// Symmetric rotation-free boost: L^0_0 = gamma, L^0_i = L^i_0 = gamma v_i,
/// L^i_j = delta_ij + (gamma - 1) v_i v_j / v^2. Maps (m,0,0,0) to (gamma m, gamma m v).
inline LorentzMap pure_boost(const Velocity3& vel)
{
    const Vec3& v = vel.vec();
    const double v2 = v.squaredNorm();
    Mat4 m = Mat4::Identity();
    if (v2 == 0.0) {
        return LorentzMap(m);
    }
    const double g = vel.gamma();
    m(0, 0) = g;
    m.block<1, 3>(0, 1) = g * v.transpose();
    m.block<3, 1>(1, 0) = g * v;
    m.bottomRightCorner<3, 3>() += (g - 1.0) / v2 * (v * v.transpose());
    return LorentzMap(m);
}

/// The boost L(p) taking the rest momentum of mass m to p.
inline LorentzMap boost_from_momentum(const FourVector& p, double m, double tol = kInvariantTol)
{
    if (!(m > 0.0)) {
        throw DomainError("mass must be positive");
    }
    if (!p.on_shell(m, tol)) {
        throw DomainError("momentum is off the mass shell");
    }
    return pure_boost(Velocity3(p.spatial() / p.energy()));
}

inline double velocity_add_collinear(double v1, double v2)
{
    if (!(std::abs(v1) < 1.0 && std::abs(v2) < 1.0)) {
        throw DomainError("superluminal speed");
    }
    return (v1 + v2) / (1.0 + v1 * v2);
}

/// Velocity of a body that moves with v2 relative to a frame that itself moves
/// with v1 relative to the lab:
///
///   v12 = [ (1 + gamma1/(1+gamma1) v1.v2) v1 + v2/gamma1 ] / (1 + v1.v2)
///
/// In lab matrices this is the velocity of L(v1) L(v2) (m,0,0,0).
inline Velocity3 velocity_add_general(const Velocity3& v1, const Velocity3& v2)
{
    const double g1 = v1.gamma();
    const double dot = v1.vec().dot(v2.vec());
    const Vec3 num = (1.0 + g1 / (1.0 + g1) * dot) * v1.vec() + v2.vec() / g1;
    const Vec3 v12 = num / (1.0 + dot);
    // Rounding can push |v12| to 1 for speeds within ~1e-8 of light.
    if (v12.squaredNorm() >= 1.0) {
        throw DomainError("composite speed is not representable below c");
    }
    return Velocity3(v12);
}

/// Lab-frame matrix of the pure boost v2 defined in the frame moving with v1:
/// L(v1) L(v2) L(v1)^-1. Applying it after L(v1) gives the composite L(v1) L(v2).
inline LorentzMap relative_boost(const Velocity3& v1, const Velocity3& v2)
{
    const LorentzMap l1 = pure_boost(v1);
    return l1 * pure_boost(v2) * l1.inverse();
}

//---------------------------------------------------------------------------//
// Rotations
//---------------------------------------------------------------------------//

namespace detail {

inline Rotation3 spatial_block_checked(const LorentzMap& w, double tol)
{
    const Mat4& m = w.matrix();
    const double residue = std::max({std::abs(m(0, 0) - 1.0), m.block<1, 3>(0, 1).cwiseAbs().maxCoeff(),
                                     m.block<3, 1>(1, 0).cwiseAbs().maxCoeff()});
    if (!(residue <= tol)) {
        throw ConsistencyError("Wigner rotation has a boost residue of " + format_double(residue));
    }
    return Rotation3(m.bottomRightCorner<3, 3>());
}

inline Mat3 skew(const Vec3& n)
{
    Mat3 k;
    k << 0, -n[2], n[1], n[2], 0, -n[0], -n[1], n[0], 0;
    return k;
}

} // namespace detail

/// W(L, p) = L^-1(L p) L L(p): the rotation a system of momentum p picks up
/// under L. The time row and column must be trivial within tol.
inline Rotation3 wigner_rotation(const LorentzMap& lambda, const FourVector& p, double m,
                                 double tol = kInvariantTol)
{
    if (!lambda.is_proper_orthochronous(tol)) {
        throw DomainError("transformation is not a proper orthochronous Lorentz map");
    }
    const LorentzMap lp = boost_from_momentum(p, m, tol);
    const FourVector q = lambda * p;
    const LorentzMap lq = pure_boost(Velocity3(q.spatial() / q.energy()));
    return detail::spatial_block_checked(lq.inverse() * lambda * lp, tol);
}

/// Thomas-Wigner rotation of a boost by v1 followed by a boost by v2 defined in
/// the v1 frame: R = L(v12)^-1 L(v1) L(v2), with v12 from velocity_add_general.
inline Rotation3 twr_of_two_boosts(const Velocity3& v1, const Velocity3& v2, double tol = kInvariantTol)
{
    const Velocity3 v12 = velocity_add_general(v1, v2);
    // relative_boost(v1, v2) * L(v1) == L(v1) * L(v2)
    const LorentzMap r = pure_boost(v12).inverse() * pure_boost(v1) * pure_boost(v2);
    return detail::spatial_block_checked(r, tol);
}

/// R = cos a I + sin a [n]x + (1 - cos a) n n^T
inline Rotation3 rodrigues(const AngleAxis& aa)
{
    const double c = std::cos(aa.angle);
    const double s = std::sin(aa.angle);
    const Vec3& n = aa.axis;
    return Rotation3(c * Mat3::Identity() + s * detail::skew(n) + (1.0 - c) * (n * n.transpose()));
}

/// Angle in [0, pi] and unit axis. Identity reports axis +z. Near pi the axis
/// comes from the symmetric part: the column of (R+R^T)/2 - cos(a) I with the
/// largest diagonal entry, oriented along the antisymmetric part when that is
/// resolvable and otherwise so that its first nonzero component is positive.
inline AngleAxis rotation_to_angle_axis(const Rotation3& rot)
{
    const Mat3& r = rot.matrix();
    const Vec3 axial(0.5 * (r(2, 1) - r(1, 2)), 0.5 * (r(0, 2) - r(2, 0)), 0.5 * (r(1, 0) - r(0, 1)));
    const double s = axial.norm();
    const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
    AngleAxis out;
    out.angle = std::atan2(s, c);
    if (s == 0.0 && c > 0.0) {
        out.angle = 0.0;
        return out;
    }
    if (c > -0.5) {
        out.axis = axial / s;
        return out;
    }
    const Mat3 nn = (0.5 * (r + r.transpose()) - c * Mat3::Identity()) / (1.0 - c);
    int k = 0;
    nn.diagonal().maxCoeff(&k);
    Vec3 n = nn.col(k) / std::sqrt(std::max(nn(k, k), 0.0));
    n.normalize();
    if (s > 1e-12) {
        if (n.dot(axial) < 0.0) {
            n = -n;
        }
    } else {
        for (int i = 0; i < 3; ++i) {
            if (std::abs(n[i]) > 1e-12) {
                if (n[i] < 0.0) {
                    n = -n;
                }
                break;
            }
        }
    }
    out.axis = n;
    return out;
}

/// D(a) = exp(-i a n.sigma / 2) = cos(a/2) I - i sin(a/2) n.sigma
inline SU2Element su2_from_angle_axis(const AngleAxis& aa)
{
    const auto& s = pauli();
    const Vec3& n = aa.axis;
    const Mat2c ns = n[0] * s[0] + n[1] * s[1] + n[2] * s[2];
    const double h = 0.5 * aa.angle;
    return SU2Element(std::cos(h) * Mat2c::Identity() - cplx(0.0, std::sin(h)) * ns);
}

/// Adjoint action on su(2): U J_b U^-1 = R_ab J_a with R_ab = -2 Tr(J_a U J_b U^-1).
/// U and -U give the same rotation.
inline Rotation3 su2_to_so3(const SU2Element& u)
{
    const auto& j = su2_generators();
    const Mat2c& um = u.matrix();
    const Mat2c uinv = um.adjoint();
    Mat3 r;
    for (int b = 0; b < 3; ++b) {
        const Mat2c conj = um * j[b] * uinv;
        for (int a = 0; a < 3; ++a) {
            r(a, b) = -2.0 * (j[a] * conj).trace().real();
        }
    }
    return Rotation3(r);
}

/// The lift with angle in [0, pi] (non-negative real trace).
inline SU2Element so3_to_su2(const Rotation3& r)
{
    return su2_from_angle_axis(rotation_to_angle_axis(r));
}

} // namespace twr
