#pragma once

// Parallel transport on the mass shell and the holonomy of closed loops.
//
// Three engines:
//  * ambient   - tangent vectors as 4-vectors in Minkowski space, transported by
//                dX/dt = -eta(X, pdot) p / m^2 (the tangential projection of the
//                flat derivative). Chart-free, so it handles the rest point.
//  * intrinsic - chart components solving dX^i/dt + Gamma^i_jk zdot^j X^k = 0.
//  * spinor    - ordered product of exact exponentials exp(-h omega_s(zdot)) at
//                step midpoints; unitary by construction, second order.
//
// Paths are lists of segments, each parameterized over t in [0, 1].
//
// Spinor components live in the spin frame lifted from the chart frame
// (e_rho, e_theta, e_phi). That frame winds once around the z axis per turn in
// phi, so its lift is only single-valued with phi in [0, 2 pi): spinor
// components change sign whenever a path crosses phi = 0.

#include "twr/lorentz.hpp"
#include "twr/shell_geometry.hpp"
#include "twr/spin_connection.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace twr {

//---------------------------------------------------------------------------//
// Path description
//---------------------------------------------------------------------------//

/// rho = const, theta = const, phi running from phi_start to phi_end.
struct CircleArc {
    double rho = 0.0;
    double theta = kPi / 2;
    double phi_start = 0.0;
    double phi_end = kTwoPi;
};

/// Shortest geodesic between two on-shell momenta.
struct GeodesicSegment {
    FourVector from;
    FourVector to;
};

/// On-shell samples joined by geodesic chords.
struct SampledCurve {
    std::vector<FourVector> points;
};

/// Arbitrary smooth chart curve z(t), t in [0, 1], with its derivative.
/// Library-only (not part of the path-spec file format).
struct ChartCurve {
    std::function<Vec3(double)> z;
    std::function<Vec3(double)> zdot;
};

using SegmentShape = std::variant<CircleArc, GeodesicSegment, SampledCurve, ChartCurve>;

struct Segment {
    SegmentShape shape;
    /// 0 selects PathSpec::steps_per_segment.
    int steps = 0;
};

struct PathSpec {
    double mass = 1.0;
    bool closed = false;
    int steps_per_segment = 1000;
    std::vector<Segment> segments;
};

/// Closed-form geodesic between on-shell a and b:
///   p(t) = m [sinh((1-t) d) u_a + sinh(t d) u_b] / sinh(d),  u = p/m,  d = arccosh(eta(u_a, u_b)).
class GeodesicCurve {
public:
    GeodesicCurve(const FourVector& a, const FourVector& b, double m, double tol = kInvariantTol) : m_(m)
    {
        detail::require_mass(m);
        if (!a.on_shell(m, tol) || !b.on_shell(m, tol)) {
            throw DomainError("geodesic endpoints must be on the mass shell");
        }
        ua_ = a.components() / m;
        ub_ = b.components() / m;
        // eta(ua - ub, ua - ub) = 2 - 2 cosh d = -4 sinh^2(d/2); stable for small d.
        const Vec4 diff = ua_ - ub_;
        d_ = 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, -minkowski_dot(diff, diff))));
    }

    double mass() const { return m_; }
    /// Hyperbolic distance in units of m (rapidity of the relative boost).
    double rapidity() const { return d_; }
    double length() const { return m_ * d_; }

    Vec4 position(double t) const
    {
        if (d_ == 0.0) {
            return m_ * ua_;
        }
        return m_ * (ratio_sinh((1.0 - t) * d_) * ua_ + ratio_sinh(t * d_) * ub_);
    }

    Vec4 velocity(double t) const
    {
        if (d_ == 0.0) {
            return Vec4::Zero();
        }
        return m_ * d_ * (-ratio_cosh((1.0 - t) * d_) * ua_ + ratio_cosh(t * d_) * ub_);
    }

private:
    // sinh(x)/sinh(d) and cosh(x)/sinh(d) for 0 <= x <= d without overflow.
    double ratio_sinh(double x) const
    {
        if (d_ < 20.0) {
            return std::sinh(x) / std::sinh(d_);
        }
        return std::exp(x - d_) * (1.0 - std::exp(-2.0 * x)) / (1.0 - std::exp(-2.0 * d_));
    }
    double ratio_cosh(double x) const
    {
        if (d_ < 20.0) {
            return std::cosh(x) / std::sinh(d_);
        }
        return std::exp(x - d_) * (1.0 + std::exp(-2.0 * x)) / (1.0 - std::exp(-2.0 * d_));
    }

    double m_;
    Vec4 ua_;
    Vec4 ub_;
    double d_ = 0.0;
};

/// steps + 1 samples of the geodesic from a to b, endpoints included.
inline std::vector<FourVector> geodesic_between(const FourVector& a, const FourVector& b, double m, int steps)
{
    if (steps < 1) {
        throw DomainError("steps must be positive");
    }
    const GeodesicCurve g(a, b, m);
    std::vector<FourVector> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        out.emplace_back(g.position(static_cast<double>(k) / steps));
    }
    out.front() = a;
    out.back() = b;
    return out;
}

namespace detail {

/// One smooth piece of a path, t in [0, 1].
class Piece {
public:
    static Piece arc(const CircleArc& c, double m, int steps)
    {
        Piece p(m, steps);
        p.arc_ = c;
        p.zero_ = c.rho == 0.0 || c.phi_start == c.phi_end;
        return p;
    }
    static Piece geodesic(const FourVector& a, const FourVector& b, double m, int steps)
    {
        Piece p(m, steps);
        p.geo_.emplace(a, b, m);
        p.zero_ = p.geo_->rapidity() == 0.0;
        return p;
    }
    static Piece chart_curve(const ChartCurve& c, double m, int steps)
    {
        Piece p(m, steps);
        p.curve_ = c;
        return p;
    }

    int steps() const { return steps_; }
    bool zero_length() const { return zero_; }

    Vec4 position(double t) const
    {
        if (geo_) {
            return geo_->position(t);
        }
        return embed(ShellPoint(raw_chart(t)), m_).components();
    }

    Vec4 velocity(double t) const
    {
        if (geo_) {
            return geo_->velocity(t);
        }
        return embedding_jacobian(ShellPoint(raw_chart(t)), m_) * chart_rate(t);
    }

    /// Chart coordinates, phi not necessarily in its principal range.
    Vec3 raw_chart(double t) const
    {
        if (geo_) {
            return chart_from_momentum(FourVector(geo_->position(t)), m_, 1e-6).point.coords();
        }
        if (curve_) {
            return curve_->z(t);
        }
        return {arc_.rho, arc_.theta, arc_.phi_start + t * (arc_.phi_end - arc_.phi_start)};
    }

    /// dz/dt. Requires a chart-regular point for geodesic pieces.
    Vec3 chart_rate(double t) const
    {
        if (geo_) {
            const ShellPoint z(raw_chart(t));
            require_regular(z, m_);
            const auto j = embedding_jacobian(z, m_);
            const Vec3 rhs = j.transpose() * minkowski() * geo_->velocity(t);
            return metric_at(z, m_).g.diagonal().cwiseInverse().cwiseProduct(rhs);
        }
        if (curve_) {
            return curve_->zdot(t);
        }
        return {0.0, 0.0, arc_.phi_end - arc_.phi_start};
    }

private:
    Piece(double m, int steps) : m_(m), steps_(steps) {}

    double m_;
    int steps_;
    bool zero_ = false;
    CircleArc arc_{};
    std::optional<GeodesicCurve> geo_;
    std::optional<ChartCurve> curve_;
};

inline double principal_phi(double phi)
{
    return ShellPoint(0.0, kPi / 2, phi).phi();
}

/// Keeps phi continuous along a path so that crossings of phi = 0 are counted.
class PhiUnwrapper {
public:
    Vec3 operator()(Vec3 z)
    {
        const double principal = principal_phi(z[2]);
        if (!started_) {
            started_ = true;
            ref_ = principal;
        }
        z[2] = principal + kTwoPi * std::round((ref_ - principal) / kTwoPi);
        ref_ = z[2];
        return z;
    }

    /// Signed number of phi = 0 crossings since the first point.
    long windings() const { return std::lround((ref_ - principal_phi(ref_)) / kTwoPi); }

private:
    bool started_ = false;
    double ref_ = 0.0;
};

inline int segment_steps(const Segment& s, const PathSpec& path)
{
    return s.steps > 0 ? s.steps : path.steps_per_segment;
}

inline double endpoint_gap(const Vec4& a, const Vec4& b)
{
    return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, std::max(a[0], b[0]));
}

inline constexpr double kJoinTol = 1e-9;

} // namespace detail

/// Decompose a path into smooth pieces. step_divisor > 1 coarsens every piece
/// (used for step-doubling error estimates).
inline std::vector<detail::Piece> path_pieces(const PathSpec& path, int step_divisor = 1)
{
    std::vector<detail::Piece> out;
    const double m = path.mass;
    for (const Segment& seg : path.segments) {
        const int steps = std::max(1, detail::segment_steps(seg, path) / step_divisor);
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, CircleArc>) {
                    out.push_back(detail::Piece::arc(s, m, steps));
                } else if constexpr (std::is_same_v<T, GeodesicSegment>) {
                    out.push_back(detail::Piece::geodesic(s.from, s.to, m, steps));
                } else if constexpr (std::is_same_v<T, SampledCurve>) {
                    const int chords = static_cast<int>(s.points.size()) - 1;
                    const int per = std::max(1, (steps + chords - 1) / chords);
                    for (int k = 0; k < chords; ++k) {
                        out.push_back(detail::Piece::geodesic(s.points[k], s.points[k + 1], m, per));
                    }
                } else {
                    out.push_back(detail::Piece::chart_curve(s, m, steps));
                }
            },
            seg.shape);
    }
    return out;
}

/// Checks mass, step counts, on-shell data, segment joins and closure.
inline void validate_path(const PathSpec& path, double tol = kInvariantTol)
{
    detail::require_mass(path.mass);
    if (path.segments.empty()) {
        throw DomainError("path has no segments");
    }
    if (path.steps_per_segment < 1) {
        throw DomainError("steps per segment must be positive");
    }
    for (std::size_t i = 0; i < path.segments.size(); ++i) {
        const Segment& seg = path.segments[i];
        const std::string where = "segment " + std::to_string(i) + ": ";
        if (seg.steps < 0) {
            throw DomainError(where + "steps must be positive");
        }
        if (const auto* c = std::get_if<CircleArc>(&seg.shape)) {
            if (!(c->rho >= 0.0) || !std::isfinite(c->rho) || !std::isfinite(c->theta)
                || !std::isfinite(c->phi_start) || !std::isfinite(c->phi_end)) {
                throw DomainError(where + "circle needs finite rho >= 0 and finite angles");
            }
        } else if (const auto* g = std::get_if<GeodesicSegment>(&seg.shape)) {
            if (!g->from.on_shell(path.mass, tol) || !g->to.on_shell(path.mass, tol)) {
                throw DomainError(where + "geodesic endpoints must be on the mass shell");
            }
        } else if (const auto* s = std::get_if<SampledCurve>(&seg.shape)) {
            if (s->points.size() < 2) {
                throw DomainError(where + "sampled curve needs at least two points");
            }
            for (const auto& p : s->points) {
                if (!p.on_shell(path.mass, tol)) {
                    throw DomainError(where + "sampled point off the mass shell");
                }
            }
        } else if (const auto* cc = std::get_if<ChartCurve>(&seg.shape)) {
            if (!cc->z || !cc->zdot) {
                throw DomainError(where + "chart curve needs z and zdot");
            }
        }
    }
    const auto pieces = path_pieces(path);
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        if (detail::endpoint_gap(pieces[i - 1].position(1.0), pieces[i].position(0.0)) > detail::kJoinTol) {
            throw DomainError("consecutive path segments do not join");
        }
    }
    if (path.closed && detail::endpoint_gap(pieces.back().position(1.0), pieces.front().position(0.0)) > detail::kJoinTol) {
        throw DomainError("path is flagged closed but its endpoints differ");
    }
}

inline FourVector path_start(const PathSpec& path)
{
    return FourVector(path_pieces(path).front().position(0.0));
}

inline FourVector path_end(const PathSpec& path)
{
    return FourVector(path_pieces(path).back().position(1.0));
}

inline bool path_has_zero_length(const PathSpec& path)
{
    for (const auto& piece : path_pieces(path)) {
        if (!piece.zero_length()) {
            return false;
        }
    }
    return true;
}

//---------------------------------------------------------------------------//
// Vector transport
//---------------------------------------------------------------------------//

namespace detail {

template <class State, class Rhs>
State rk4_step(const State& x, double t, double h, const Rhs& f)
{
    const State k1 = f(t, x);
    const State k2 = f(t + 0.5 * h, State(x + 0.5 * h * k1));
    const State k3 = f(t + 0.5 * h, State(x + 0.5 * h * k2));
    const State k4 = f(t + h, State(x + h * k3));
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Transport through one piece with classical RK4. on_step(x) after every step.
template <int Cols, class OnStep>
Eigen::Matrix<double, 4, Cols> ambient_piece(const Piece& piece, double m, Eigen::Matrix<double, 4, Cols> x,
                                             const OnStep& on_step)
{
    using State = Eigen::Matrix<double, 4, Cols>;
    if (piece.zero_length()) {
        return x;
    }
    const double inv_m2 = 1.0 / (m * m);
    auto f = [&](double t, const State& s) -> State {
        const Vec4 p = piece.position(t);
        const Vec4 pdot = piece.velocity(t);
        // -p eta(pdot, X) / m^2, column-wise
        const Eigen::Matrix<double, 1, Cols> proj = (minkowski() * pdot).transpose() * s;
        return -inv_m2 * p * proj;
    };
    const int n = piece.steps();
    const double h = 1.0 / n;
    for (int k = 0; k < n; ++k) {
        x = rk4_step<State>(x, k * h, h, f);
        on_step(piece.position((k + 1) * h), x);
    }
    return x;
}

} // namespace detail

/// Ambient transport of one or more tangent 4-vectors (columns) along the path.
template <int Cols>
Eigen::Matrix<double, 4, Cols> transport_ambient(const PathSpec& path, const Eigen::Matrix<double, 4, Cols>& x0,
                                                 double tol = kInvariantTol, int step_divisor = 1)
{
    validate_path(path);
    const auto pieces = path_pieces(path, step_divisor);
    const Vec4 p0 = pieces.front().position(0.0);
    for (int c = 0; c < x0.cols(); ++c) {
        const double scale = std::max(1.0, x0.col(c).cwiseAbs().maxCoeff()) * std::max(1.0, p0[0]);
        if (std::abs(minkowski_dot(x0.col(c), p0)) > tol * scale) {
            throw DomainError("initial vector is not tangent to the mass shell");
        }
    }
    Eigen::Matrix<double, 4, Cols> x = x0;
    for (const auto& piece : pieces) {
        x = detail::ambient_piece<Cols>(piece, path.mass, x, [](const Vec4&, const auto&) {});
    }
    return x;
}

inline Vec4 transport_vector_ambient(const PathSpec& path, const Vec4& x0, double tol = kInvariantTol)
{
    return transport_ambient<1>(path, x0, tol);
}

/// Intrinsic (chart) transport of one or more vectors given by chart components.
template <int Cols>
Eigen::Matrix<double, 3, Cols> transport_intrinsic(const PathSpec& path, const Eigen::Matrix<double, 3, Cols>& x0,
                                                   int step_divisor = 1)
{
    using State = Eigen::Matrix<double, 3, Cols>;
    validate_path(path);
    const double m = path.mass;
    State x = x0;
    for (const auto& piece : path_pieces(path, step_divisor)) {
        if (piece.zero_length()) {
            continue;
        }
        auto f = [&](double t, const State& s) -> State {
            const ShellPoint z(piece.raw_chart(t));
            if (!z.chart_regular(m)) {
                throw SingularChartError("path meets a chart singularity; use the ambient transport engine");
            }
            const Christoffels c = christoffels_at(z, m);
            const Vec3 zdot = piece.chart_rate(t);
            Mat3 a = Mat3::Zero();
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    a.row(i) += zdot[j] * c.gamma[i].row(j);
                }
            }
            return -a * s;
        };
        const int n = piece.steps();
        const double h = 1.0 / n;
        for (int k = 0; k < n; ++k) {
            x = detail::rk4_step<State>(x, k * h, h, f);
        }
    }
    return x;
}

inline Vec3 transport_vector_intrinsic(const PathSpec& path, const Vec3& x0)
{
    return transport_intrinsic<1>(path, x0);
}

//---------------------------------------------------------------------------//
// Spinor transport and holonomy
//---------------------------------------------------------------------------//

/// Ordered product of exp(-h omega_s(zdot)) at step midpoints, later steps on
/// the left, including the phi = 0 crossing sign. Maps spinor components at the
/// start to components at the end.
inline SU2Element path_ordered_exponential(const PathSpec& path, int step_divisor = 1)
{
    validate_path(path);
    const double m = path.mass;
    Mat2c prod = Mat2c::Identity();
    detail::PhiUnwrapper unwrap;
    bool any = false;
    for (const auto& piece : path_pieces(path, step_divisor)) {
        if (piece.zero_length()) {
            continue;
        }
        if (!any) {
            unwrap(piece.raw_chart(0.0));
            any = true;
        }
        const int n = piece.steps();
        const double h = 1.0 / n;
        for (int k = 0; k < n; ++k) {
            const double t = (k + 0.5) * h;
            const ShellPoint z(unwrap(piece.raw_chart(t)));
            if (!z.chart_regular(m)) {
                throw SingularChartError("path meets a chart singularity; use the ambient transport engine");
            }
            const Mat2c gen = -h * spinor_connection_at(z, m).contract(piece.chart_rate(t));
            prod = su2_reproject(su2_exp(su2_algebra_to_vector(gen)).matrix() * prod);
        }
        unwrap(piece.raw_chart(1.0));
    }
    if (any && unwrap.windings() % 2 != 0) {
        prod = -prod;
    }
    return SU2Element(prod);
}

inline Vec2c transport_spinor(const PathSpec& path, const Vec2c& psi0)
{
    return path_ordered_exponential(path) * psi0;
}

/// Which orthonormal frame a holonomy matrix is expressed in at the base point:
/// the chart frame (e_1, e_2, e_3), or the boost-carried Cartesian frame
/// L(p)(0, e_i), which is the Cartesian momentum frame at the rest point.
enum class HolonomyFrame { chart, cartesian };

inline const char* to_string(HolonomyFrame f)
{
    return f == HolonomyFrame::chart ? "chart" : "cartesian";
}

struct HolonomyResult {
    SU2Element su2;
    Rotation3 so3;
    AngleAxis angle_axis;
    /// Step-doubling estimate of the discretization error (max-abs matrix entry).
    double convergence = 0.0;
    HolonomyFrame frame = HolonomyFrame::chart;
};

inline HolonomyResult make_holonomy(const SU2Element& u, double convergence, HolonomyFrame frame)
{
    HolonomyResult r;
    r.su2 = u;
    r.so3 = su2_to_so3(u);
    r.angle_axis = rotation_to_angle_axis(r.so3);
    r.convergence = convergence;
    r.frame = frame;
    return r;
}

namespace detail {

inline void require_closed(const PathSpec& loop)
{
    if (!loop.closed) {
        throw DomainError("holonomy requires a closed path");
    }
    validate_path(loop);
}

} // namespace detail

/// Hol = P exp(-int omega_s) in the chart spin frame at the base point.
/// Second order; the estimate assumes that order: |P_n - P_{n/2}| / 3.
inline HolonomyResult holonomy_path_ordered(const PathSpec& loop)
{
    detail::require_closed(loop);
    if (path_has_zero_length(loop)) {
        return make_holonomy(SU2Element(), 0.0, HolonomyFrame::chart);
    }
    const SU2Element fine = path_ordered_exponential(loop);
    const SU2Element coarse = path_ordered_exponential(loop, 2);
    const double est = (fine.matrix() - coarse.matrix()).cwiseAbs().maxCoeff() / 3.0;
    return make_holonomy(fine, est, HolonomyFrame::chart);
}

/// SO(3) holonomy of the transported chart frame, in frame components
/// H_AB = e^A(transported e_B), from the intrinsic engine.
inline Rotation3 so3_holonomy_intrinsic(const PathSpec& loop)
{
    detail::require_closed(loop);
    if (path_has_zero_length(loop)) {
        return Rotation3();
    }
    const ShellPoint z0(path_pieces(loop).front().raw_chart(0.0));
    const FrameAtPoint f = frame_at(z0, loop.mass);
    const Mat3 end = transport_intrinsic<3>(loop, f.frame);
    return Rotation3(f.coframe * end);
}

/// Columns L(p)(0, e_i): an orthonormal tangent frame, smooth over the whole shell.
inline Eigen::Matrix<double, 4, 3> boost_frame(const FourVector& p, double m)
{
    return boost_from_momentum(p, m, 1e-6).matrix().rightCols<3>();
}

namespace detail {

struct AmbientHolonomy {
    Mat3 so3;
    SU2Element lift;
};

inline AmbientHolonomy ambient_holonomy_run(const PathSpec& loop, int step_divisor)
{
    const double m = loop.mass;
    const auto pieces = path_pieces(loop, step_divisor);
    const FourVector p0(pieces.front().position(0.0));
    Eigen::Matrix<double, 4, 3> x = boost_frame(p0, m);
    // Frame components F_ab = -eta(b_a, X_b) against the smooth boost frame;
    // the SU(2) lift follows F continuously from the identity.
    Mat3 f_prev = Mat3::Identity();
    Mat2c lift = Mat2c::Identity();
    auto on_step = [&](const Vec4& p, const Eigen::Matrix<double, 4, 3>& xs) {
        const Eigen::Matrix<double, 4, 3> b = boost_frame(FourVector(p), m);
        const Mat3 f = -(b.transpose() * minkowski() * xs);
        lift = su2_reproject(so3_to_su2(Rotation3(f * f_prev.transpose())).matrix() * lift);
        f_prev = f;
    };
    for (const auto& piece : pieces) {
        x = ambient_piece<3>(piece, m, x, on_step);
    }
    const Eigen::Matrix<double, 4, 3> b0 = boost_frame(p0, m);
    AmbientHolonomy out;
    out.so3 = -(b0.transpose() * minkowski() * x);
    SU2Element u = so3_to_su2(Rotation3(out.so3));
    if ((u.matrix().adjoint() * lift).trace().real() < 0.0) {
        u = -u;
    }
    out.lift = u;
    return out;
}

} // namespace detail

/// Holonomy from the ambient engine: the boost frame at the base point is
/// transported around the loop and compared with itself. Chart-free. The SU(2)
/// element is the continuous lift along the loop. RK4, estimate |H_n - H_{n/2}| / 15.
inline HolonomyResult holonomy_ambient(const PathSpec& loop)
{
    detail::require_closed(loop);
    if (path_has_zero_length(loop)) {
        return make_holonomy(SU2Element(), 0.0, HolonomyFrame::cartesian);
    }
    const auto fine = detail::ambient_holonomy_run(loop, 1);
    const auto coarse = detail::ambient_holonomy_run(loop, 2);
    HolonomyResult r;
    r.su2 = fine.lift;
    r.so3 = Rotation3(fine.so3);
    r.angle_axis = rotation_to_angle_axis(r.so3);
    r.convergence = (fine.so3 - coarse.so3).cwiseAbs().maxCoeff() / 15.0;
    r.frame = HolonomyFrame::cartesian;
    return r;
}

/// True when some piece endpoint or midpoint sits on a chart singularity
/// (rest point or the polar axis), where the chart spin frame is undefined.
inline bool path_touches_chart_singularity(const PathSpec& path)
{
    for (const auto& piece : path_pieces(path)) {
        if (piece.zero_length()) {
            continue;
        }
        for (double t : {0.0, 0.5, 1.0}) {
            if (!ShellPoint(piece.raw_chart(t)).chart_regular(path.mass)) {
                return true;
            }
        }
    }
    return false;
}

/// Path-ordered spinor holonomy in the chart frame when the loop avoids the
/// chart singularities, otherwise the ambient holonomy in the Cartesian frame.
inline HolonomyResult holonomy_auto(const PathSpec& loop)
{
    detail::require_closed(loop);
    if (!path_touches_chart_singularity(loop)) {
        try {
            return holonomy_path_ordered(loop);
        } catch (const SingularChartError&) {
        }
    }
    return holonomy_ambient(loop);
}

//---------------------------------------------------------------------------//
// Closed forms and the boost triangle
//---------------------------------------------------------------------------//

/// alpha = 2 pi (gamma(V) - 1)
inline double thomas_precession_angle(double v)
{
    const double g = gamma_of_speed(v);
    // gamma - 1 = V^2 gamma^2 / (gamma + 1), no cancellation at small V
    return kTwoPi * v * v * g * g / (g + 1.0);
}

/// Circle rho = rho0, theta = pi/2, phi: 0 -> 2 pi, from the curvature integral
/// -int_D Omega_s = -i pi (E(rho0)/m - 1) sigma_2: rotation by 2 pi (gamma - 1) about e_2.
inline HolonomyResult holonomy_disk_circle(double rho0, double m)
{
    detail::require_mass(m);
    if (!(rho0 >= 0.0) || !std::isfinite(rho0)) {
        throw DomainError("circle radius must be non-negative");
    }
    const double e = std::hypot(m, rho0);
    const double alpha = kTwoPi * rho0 * rho0 / (m * (e + m));
    const auto& s = pauli();
    const Mat2c u = std::cos(0.5 * alpha) * Mat2c::Identity() - cplx(0.0, std::sin(0.5 * alpha)) * s[1];
    return make_holonomy(SU2Element(u), 0.0, HolonomyFrame::chart);
}

/// The closed full circle of the disk formula as a path.
inline PathSpec circle_loop(double rho0, double m, int steps)
{
    PathSpec p;
    p.mass = m;
    p.closed = true;
    p.steps_per_segment = steps;
    p.segments.push_back({CircleArc{rho0, kPi / 2, 0.0, kTwoPi}, 0});
    return p;
}

struct TriangleHolonomy {
    HolonomyResult holonomy;
    std::array<FourVector, 3> vertices;
    bool degenerate = false;
};

/// Vertices rest -> L(v1) rest -> L(v1) L(v2) rest (v2 relative to the v1 frame).
inline std::array<FourVector, 3> boost_triangle_vertices(const Velocity3& v1, const Velocity3& v2, double m)
{
    detail::require_mass(m);
    const FourVector a = FourVector::rest(m);
    const LorentzMap l1 = pure_boost(v1);
    return {a, l1 * a, l1 * (pure_boost(v2) * a)};
}

inline PathSpec triangle_loop(const std::array<FourVector, 3>& v, double m, int steps)
{
    PathSpec p;
    p.mass = m;
    p.closed = true;
    p.steps_per_segment = steps;
    for (int k = 0; k < 3; ++k) {
        p.segments.push_back({GeodesicSegment{v[k], v[(k + 1) % 3]}, 0});
    }
    return p;
}

/// Holonomy of the geodesic triangle of a boost pair, in the Cartesian frame at rest.
inline TriangleHolonomy triangle_holonomy(const Velocity3& v1, const Velocity3& v2, double m, int steps)
{
    if (steps < 1) {
        throw DomainError("steps must be positive");
    }
    TriangleHolonomy out;
    out.vertices = boost_triangle_vertices(v1, v2, m);
    if (v1.vec().cross(v2.vec()).norm() <= 1e-12) {
        out.degenerate = true;
        out.holonomy = make_holonomy(SU2Element(), 0.0, HolonomyFrame::cartesian);
        return out;
    }
    out.holonomy = holonomy_ambient(triangle_loop(out.vertices, m, steps));
    return out;
}

} // namespace twr
