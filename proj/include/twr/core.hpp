#pragma once

// Shared value types, matrix aliases and error types for the twr library.
//
// Conventions used throughout:
//  * natural units (c = 1), Minkowski signature (+,-,-,-);
//  * four-vectors are stored with contravariant components (p^0, p^1, p^2, p^3).
//    A covariant index flips the sign of the spatial part; every comparison in
//    the library is between like-typed objects.

#include <Eigen/Core>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twr {

using Vec2c = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2c = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default absolute tolerance for invariant assertions (Lorentz, rotation,
/// unitarity checks). Individual operations take it as a parameter.
inline constexpr double kInvariantTol = 1e-9;

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// The spherical chart (rho, theta, phi) is singular at rho = 0 and at the poles.
class SingularChartError : public DomainError {
public:
    explicit SingularChartError(const std::string& what) : DomainError(what) {}
};

/// A result that should hold by construction did not (e.g. a Wigner rotation
/// with a boost residue). Signals a broken implementation, not bad input.
class ConsistencyError : public std::logic_error {
public:
    explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

inline const Mat4& minkowski()
{
    static const Mat4 eta = Vec4(1.0, -1.0, -1.0, -1.0).asDiagonal();
    return eta;
}

inline double minkowski_dot(const Vec4& a, const Vec4& b)
{
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

class FourVector {
public:
    FourVector() = default;
    FourVector(double p0, double p1, double p2, double p3) : c_(p0, p1, p2, p3) {}
    explicit FourVector(const Vec4& c) : c_(c) {}

    static FourVector rest(double m) { return {m, 0.0, 0.0, 0.0}; }

    const Vec4& components() const { return c_; }
    double operator[](int i) const { return c_[i]; }
    double energy() const { return c_[0]; }
    Vec3 spatial() const { return c_.tail<3>(); }

    /// eta(p, p)
    double norm2() const { return minkowski_dot(c_, c_); }

    /// |eta(p,p) - m^2| <= tol * max(1, m^2, (p^0)^2) and p^0 > 0.
    bool on_shell(double m, double tol = kInvariantTol) const
    {
        return c_[0] > 0.0 && std::abs(norm2() - m * m) <= tol * std::max({1.0, m * m, c_[0] * c_[0]});
    }

private:
    Vec4 c_ = Vec4::Zero();
};

/// Three-velocity in units of c; |v| < 1 is enforced on construction.
class Velocity3 {
public:
    Velocity3() = default;
    explicit Velocity3(const Vec3& v) : v_(v)
    {
        if (!(v.allFinite() && v.squaredNorm() < 1.0)) {
            throw DomainError("superluminal speed");
        }
    }
    Velocity3(double x, double y, double z) : Velocity3(Vec3(x, y, z)) {}

    const Vec3& vec() const { return v_; }
    double speed() const { return v_.norm(); }
    double gamma() const { return 1.0 / std::sqrt(1.0 - v_.squaredNorm()); }

private:
    Vec3 v_ = Vec3::Zero();
};

/// Rotation angle in [0, pi] about a unit axis. For angle 0 the axis is +z.
struct AngleAxis {
    double angle = 0.0;
    Vec3 axis = Vec3::UnitZ();
};

// 17 significant digits round-trips any double.
inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    return buf;
}

} // namespace twr
