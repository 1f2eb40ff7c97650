#pragma once

// The su(2) side of the shell geometry: the basis J_a = -(i/2) sigma_a, the
// Lie algebra isomorphism so(3) -> su(2), and the spinor connection and
// curvature forms it induces from the Levi-Civita data.

#include "twr/lorentz.hpp"
#include "twr/shell_geometry.hpp"

#include <array>

namespace twr {

/// (J_1, J_2, J_3) with [J_i, J_k] = eps_ikj J_j.
inline std::array<Mat2c, 3> su2_basis()
{
    return su2_generators();
}

/// E_i^j -> eps_i^{jk} J_k, i.e. E_1^2 -> J_3, E_1^3 -> -J_2, E_2^3 -> J_1, extended
/// linearly. E_i^j has -1 at (i, j) and +1 at (j, i).
inline Mat2c phi_iso(const Mat3& a, double tol = kInvariantTol)
{
    if (!((a + a.transpose()).cwiseAbs().maxCoeff() <= tol)) {
        throw DomainError("so(3) element must be antisymmetric");
    }
    return su2_algebra_from_vector(Vec3(a(2, 1), a(0, 2), a(1, 0)));
}

/// Anti-Hermitian and traceless within tol.
inline bool is_su2_algebra(const Mat2c& x, double tol = kInvariantTol)
{
    return (x + x.adjoint()).cwiseAbs().maxCoeff() <= tol && std::abs(x.trace()) <= tol;
}

struct SpinorConnectionForm {
    std::array<Mat2c, 3> coeff{Mat2c::Zero(), Mat2c::Zero(), Mat2c::Zero()};

    Mat2c contract(const Vec3& zdot) const
    {
        return coeff[0] * zdot[0] + coeff[1] * zdot[1] + coeff[2] * zdot[2];
    }
};

using SpinorCurvatureForm = CurvatureForm<Mat2c>;

inline SpinorConnectionForm phi_iso(const So3ConnectionForm& w)
{
    SpinorConnectionForm out;
    for (int i = 0; i < 3; ++i) {
        out.coeff[i] = phi_iso(w.coeff[i]);
    }
    return out;
}

inline SpinorCurvatureForm phi_iso(const So3CurvatureForm& o)
{
    SpinorCurvatureForm out;
    for (int k = 0; k < 3; ++k) {
        out.coeff[k] = phi_iso(o.coeff[k]);
    }
    return out;
}

/// omega_s = -(i/2) [ (E/m) dtheta sigma_3 - (E/m) sin(theta) dphi sigma_2 + cos(theta) dphi sigma_1 ]
inline SpinorConnectionForm spinor_connection_at(const ShellPoint& z, double m)
{
    detail::require_regular(z, m);
    const double g = std::hypot(m, z.rho()) / m;
    const double st = std::sin(z.theta()), ct = std::cos(z.theta());
    const auto& s = pauli();
    const cplx mi(0.0, -0.5);
    SpinorConnectionForm w;
    w.coeff[kTheta] = mi * g * s[2];
    w.coeff[kPhi] = mi * (-g * st * s[1] + ct * s[0]);
    return w;
}

/// Omega_s = (i/2) [ -a drho^dtheta sigma_3 + a sin(theta) drho^dphi sigma_2
///                   - (E^2 - m^2)/m^2 sin(theta) dtheta^dphi sigma_1 ],
/// a = sqrt(E^2 - m^2) / (E m).
inline SpinorCurvatureForm spinor_curvature_at(const ShellPoint& z, double m)
{
    detail::require_regular(z, m);
    const double r = z.rho();
    const double e = std::hypot(m, r);
    const double st = std::sin(z.theta());
    const double a = r / (e * m);
    const double b = r * r / (m * m) * st;
    const auto& s = pauli();
    const cplx pi(0.0, 0.5);
    SpinorCurvatureForm o;
    o.coeff[coordinate_pair_index(kRho, kTheta)] = pi * (-a) * s[2];
    o.coeff[coordinate_pair_index(kRho, kPhi)] = pi * (a * st) * s[1];
    o.coeff[coordinate_pair_index(kTheta, kPhi)] = pi * (-b) * s[0];
    return o;
}

} // namespace twr
