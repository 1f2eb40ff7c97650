#pragma once

// Intrinsic geometry of the forward mass hyperboloid eta(p,p) = m^2, p^0 > 0,
// in the spherical chart z = (rho, theta, phi):
//
//   p(rho, theta, phi) = (E, rho sin(theta) cos(phi), rho sin(theta) sin(phi), rho cos(theta)),
//   E = sqrt(m^2 + rho^2).
//
// The induced metric is negative definite. Coordinate index order everywhere is
// 0 = rho, 1 = theta, 2 = phi; frame indices A, B run over 0..2 for e_1..e_3.

#include "twr/core.hpp"

#include <array>

namespace twr {

enum ChartAxis : int { kRho = 0, kTheta = 1, kPhi = 2 };

/// A point of the shell in chart coordinates. Angles are reduced on construction
/// to theta in [0, pi] and phi in [0, 2 pi).
class ShellPoint {
public:
    ShellPoint() = default;
    ShellPoint(double rho, double theta, double phi)
    {
        if (!(rho >= 0.0) || !std::isfinite(rho)) {
            throw DomainError("rho must be a finite non-negative number");
        }
        if (!std::isfinite(theta) || !std::isfinite(phi)) {
            throw DomainError("chart angles must be finite");
        }
        theta = std::fmod(theta, kTwoPi);
        if (theta < 0.0) {
            theta += kTwoPi;
        }
        if (theta > kPi) {
            theta = kTwoPi - theta;
            phi += kPi;
        }
        phi = std::fmod(phi, kTwoPi);
        if (phi < 0.0) {
            phi += kTwoPi;
        }
        if (phi >= kTwoPi) {
            phi = 0.0;
        }
        rho_ = rho;
        theta_ = theta;
        phi_ = phi;
    }
    explicit ShellPoint(const Vec3& z) : ShellPoint(z[0], z[1], z[2]) {}

    double rho() const { return rho_; }
    double theta() const { return theta_; }
    double phi() const { return phi_; }
    Vec3 coords() const { return {rho_, theta_, phi_}; }

    /// rho > 0 and theta away from the poles.
    bool chart_regular(double m) const { return rho_ > 1e-12 * m && std::sin(theta_) > 1e-12; }

private:
    double rho_ = 0.0;
    double theta_ = kPi / 2;
    double phi_ = 0.0;
};

namespace detail {

inline void require_mass(double m)
{
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw DomainError("mass must be positive");
    }
}

inline void require_regular(const ShellPoint& z, double m)
{
    require_mass(m);
    if (!z.chart_regular(m)) {
        throw SingularChartError("chart-singular point (rho = 0 or theta at a pole)");
    }
}

} // namespace detail

//---------------------------------------------------------------------------//
// Kinematic relations
//---------------------------------------------------------------------------//

inline double energy(double rho, double m)
{
    detail::require_mass(m);
    return std::hypot(m, rho);
}

inline double gamma_of_speed(double v)
{
    if (!(v >= 0.0 && v < 1.0)) {
        throw DomainError(v >= 1.0 ? "superluminal speed" : "speed must be non-negative");
    }
    return 1.0 / std::sqrt(1.0 - v * v);
}

/// rho = m V / sqrt(1 - V^2)
inline double rho_of_speed(double v, double m)
{
    detail::require_mass(m);
    return m * v * gamma_of_speed(v);
}

//---------------------------------------------------------------------------//
// Embedding and chart
//---------------------------------------------------------------------------//

inline FourVector embed(const ShellPoint& z, double m)
{
    detail::require_mass(m);
    const double r = z.rho();
    const double st = std::sin(z.theta());
    return {std::hypot(m, r), r * st * std::cos(z.phi()), r * st * std::sin(z.phi()), r * std::cos(z.theta())};
}

/// d p / d z as a 4x3 matrix; columns are the coordinate vectors d_rho, d_theta, d_phi.
inline Eigen::Matrix<double, 4, 3> embedding_jacobian(const ShellPoint& z, double m)
{
    detail::require_mass(m);
    const double r = z.rho();
    const double e = std::hypot(m, r);
    const double st = std::sin(z.theta()), ct = std::cos(z.theta());
    const double sp = std::sin(z.phi()), cp = std::cos(z.phi());
    Eigen::Matrix<double, 4, 3> j;
    j << r / e, 0.0, 0.0,                       //
        st * cp, r * ct * cp, -r * st * sp,     //
        st * sp, r * ct * sp, r * st * cp,      //
        ct, -r * st, 0.0;
    return j;
}

struct ChartCoordinates {
    ShellPoint point;
    /// rho == 0: the angles carry the convention values theta = pi/2, phi = 0.
    bool degenerate = false;
};

/// Inverse of embed: rho = |p|, tan(theta) = sqrt(p1^2 + p2^2) / p3, tan(phi) = p2 / p1.
inline ChartCoordinates chart_from_momentum(const FourVector& p, double m, double tol = kInvariantTol)
{
    detail::require_mass(m);
    if (!p.on_shell(m, tol)) {
        throw DomainError("momentum is off the mass shell");
    }
    const Vec3 s = p.spatial();
    const double rho = s.norm();
    if (rho == 0.0) {
        return {ShellPoint(0.0, kPi / 2, 0.0), true};
    }
    const double theta = std::atan2(std::hypot(s[0], s[1]), s[2]);
    const double phi = std::atan2(s[1], s[0]);
    return {ShellPoint(rho, theta, phi), false};
}

//---------------------------------------------------------------------------//
// Metric, Levi-Civita connection, curvature
//---------------------------------------------------------------------------//

struct MetricAtPoint {
    Mat3 g = Mat3::Zero();
    double m = 1.0;
};

/// g = -( m^2/E^2 drho^2 + rho^2 dtheta^2 + rho^2 sin^2(theta) dphi^2 )
inline MetricAtPoint metric_at(const ShellPoint& z, double m)
{
    detail::require_mass(m);
    const double r = z.rho();
    const double st = std::sin(z.theta());
    MetricAtPoint out;
    out.m = m;
    out.g.diagonal() << -(m * m) / (m * m + r * r), -r * r, -r * r * st * st;
    return out;
}

/// Gamma^i_{jk} in the coordinate basis, stored as gamma[i](j, k).
struct Christoffels {
    std::array<Mat3, 3> gamma{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};

    double operator()(int i, int j, int k) const { return gamma[i](j, k); }
};

inline Christoffels christoffels_at(const ShellPoint& z, double m)
{
    detail::require_regular(z, m);
    const double r = z.rho();
    const double m2 = m * m;
    const double st = std::sin(z.theta()), ct = std::cos(z.theta());
    Christoffels c;
    c.gamma[kRho](kRho, kRho) = -r / (m2 + r * r);
    c.gamma[kRho](kTheta, kTheta) = -r / m2 * (m2 + r * r);
    c.gamma[kRho](kPhi, kPhi) = -r / m2 * (m2 + r * r) * st * st;
    c.gamma[kTheta](kRho, kTheta) = c.gamma[kTheta](kTheta, kRho) = 1.0 / r;
    c.gamma[kTheta](kPhi, kPhi) = -ct * st;
    c.gamma[kPhi](kRho, kPhi) = c.gamma[kPhi](kPhi, kRho) = 1.0 / r;
    c.gamma[kPhi](kTheta, kPhi) = c.gamma[kPhi](kPhi, kTheta) = ct / st;
    return c;
}

/// d_l Gamma^i_{jk}, exact, as out[l].
inline std::array<Christoffels, 3> christoffel_derivatives_at(const ShellPoint& z, double m)
{
    detail::require_regular(z, m);
    const double r = z.rho();
    const double m2 = m * m;
    const double e2 = m2 + r * r;
    const double st = std::sin(z.theta()), ct = std::cos(z.theta());
    std::array<Christoffels, 3> d;
    auto& dr = d[kRho].gamma;
    auto& dt = d[kTheta].gamma;
    dr[kRho](kRho, kRho) = -(m2 - r * r) / (e2 * e2);
    dr[kRho](kTheta, kTheta) = -(m2 + 3.0 * r * r) / m2;
    dr[kRho](kPhi, kPhi) = -(m2 + 3.0 * r * r) / m2 * st * st;
    dt[kRho](kPhi, kPhi) = -r * e2 / m2 * 2.0 * st * ct;
    dr[kTheta](kRho, kTheta) = dr[kTheta](kTheta, kRho) = -1.0 / (r * r);
    dt[kTheta](kPhi, kPhi) = -(ct * ct - st * st);
    dr[kPhi](kRho, kPhi) = dr[kPhi](kPhi, kRho) = -1.0 / (r * r);
    dt[kPhi](kTheta, kPhi) = dt[kPhi](kPhi, kTheta) = -1.0 / (st * st);
    return d;
}

/// R^p_{qij} stored as r[p][q](i, j).
struct RiemannTensor {
    std::array<std::array<Mat3, 3>, 3> r;

    double operator()(int p, int q, int i, int j) const { return r[p][q](i, j); }
};

/// R^p_{qij} = d_i Gamma^p_{qj} - d_j Gamma^p_{qi} + Gamma^p_{si} Gamma^s_{qj} - Gamma^p_{sj} Gamma^s_{qi}
inline RiemannTensor riemann_at(const ShellPoint& z, double m)
{
    const Christoffels c = christoffels_at(z, m);
    const auto d = christoffel_derivatives_at(z, m);
    RiemannTensor out;
    for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    double v = d[i](p, q, j) - d[j](p, q, i);
                    for (int s = 0; s < 3; ++s) {
                        v += c(p, s, i) * c(s, q, j) - c(p, s, j) * c(s, q, i);
                    }
                    out.r[p][q](i, j) = v;
                }
            }
        }
    }
    return out;
}

/// R = g^{qj} R^p_{qpj}; equals 6/m^2 for this shell.
inline double ricci_scalar_at(const ShellPoint& z, double m)
{
    const RiemannTensor riem = riemann_at(z, m);
    const Mat3 ginv = metric_at(z, m).g.inverse();
    double scalar = 0.0;
    for (int q = 0; q < 3; ++q) {
        for (int j = 0; j < 3; ++j) {
            double ricci = 0.0;
            for (int p = 0; p < 3; ++p) {
                ricci += riem(p, q, p, j);
            }
            scalar += ginv(q, j) * ricci;
        }
    }
    return scalar;
}

//---------------------------------------------------------------------------//
// Orthonormal frame, connection and curvature forms
//---------------------------------------------------------------------------//

/// e_1 = (E/m) d_rho, e_2 = (1/rho) d_theta, e_3 = 1/(rho sin(theta)) d_phi and the
/// dual coframe. frame(i, A) = e_A^i (columns are frame vectors),
/// coframe(A, i) = e^A_i, so coframe * frame = I and g(e_A, e_B) = -delta_AB.
struct FrameAtPoint {
    Mat3 frame = Mat3::Zero();
    Mat3 coframe = Mat3::Zero();
};

inline FrameAtPoint frame_at(const ShellPoint& z, double m)
{
    detail::require_regular(z, m);
    const double r = z.rho();
    const double e = std::hypot(m, r);
    const double st = std::sin(z.theta());
    FrameAtPoint f;
    f.frame.diagonal() << e / m, 1.0 / r, 1.0 / (r * st);
    f.coframe.diagonal() << m / e, r, r * st;
    return f;
}

/// so(3)-valued connection 1-form: coeff[i](A, B) = omega^A_{B i}, the coefficient
/// of dz^i. Each coefficient is antisymmetric.
struct So3ConnectionForm {
    std::array<Mat3, 3> coeff{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};

    /// omega(zdot) = sum_i coeff[i] zdot^i
    Mat3 contract(const Vec3& zdot) const
    {
        return coeff[0] * zdot[0] + coeff[1] * zdot[1] + coeff[2] * zdot[2];
    }
};

/// omega^1_2 = (E/m) dtheta, omega^1_3 = sin(theta) (E/m) dphi, omega^2_3 = cos(theta) dphi,
/// laid out as the matrix with entry (A, B) = -omega^A_B for A < B.
inline So3ConnectionForm so3_connection_at(const ShellPoint& z, double m)
{
    detail::require_regular(z, m);
    const double g = std::hypot(m, z.rho()) / m;
    const double st = std::sin(z.theta()), ct = std::cos(z.theta());
    So3ConnectionForm w;
    w.coeff[kTheta](0, 1) = -g;
    w.coeff[kTheta](1, 0) = g;
    w.coeff[kPhi](0, 2) = -st * g;
    w.coeff[kPhi](2, 0) = st * g;
    w.coeff[kPhi](1, 2) = -ct;
    w.coeff[kPhi](2, 1) = ct;
    return w;
}

/// Position of the coordinate pair (i < j) in curvature storage:
/// (rho,theta) -> 0, (rho,phi) -> 1, (theta,phi) -> 2.
inline constexpr int coordinate_pair_index(int i, int j)
{
    return i + j - 1;
}

/// Lie-algebra-valued 2-form stored per coordinate pair (i < j); the coefficient
/// of dz^i ^ dz^j. Matrix type is Mat3 for so(3) and Mat2c for su(2).
template <class Matrix>
struct CurvatureForm {
    std::array<Matrix, 3> coeff{Matrix::Zero(), Matrix::Zero(), Matrix::Zero()};

    /// Coefficient for any (i, j), antisymmetric in the pair.
    Matrix component(int i, int j) const
    {
        if (i == j) {
            return Matrix::Zero();
        }
        return i < j ? coeff[coordinate_pair_index(i, j)] : Matrix(-coeff[coordinate_pair_index(j, i)]);
    }
};

using So3CurvatureForm = CurvatureForm<Mat3>;

inline So3CurvatureForm so3_curvature_at(const ShellPoint& z, double m)
{
    detail::require_regular(z, m);
    const double r = z.rho();
    const double e = std::hypot(m, r);
    const double st = std::sin(z.theta());
    // sqrt(E^2 - m^2) = rho
    const double a = r / (e * m);
    const double b = r * r / (m * m) * st;
    So3CurvatureForm o;
    Mat3& rt = o.coeff[coordinate_pair_index(kRho, kTheta)];
    Mat3& rp = o.coeff[coordinate_pair_index(kRho, kPhi)];
    Mat3& tp = o.coeff[coordinate_pair_index(kTheta, kPhi)];
    rt(0, 1) = -a;
    rt(1, 0) = a;
    rp(0, 2) = -a * st;
    rp(2, 0) = a * st;
    tp(1, 2) = -b;
    tp(2, 1) = b;
    return o;
}

} // namespace twr
