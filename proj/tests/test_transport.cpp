#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace twr;
using testutil::max_diff;
using testutil::to_eigen;

namespace {

PathSpec tilted_loop(double rho, double beta, double m, int steps)
{
    const oracle::TiltedCircle c{rho, beta};
    PathSpec p;
    p.mass = m;
    p.closed = true;
    p.steps_per_segment = steps;
    ChartCurve curve;
    curve.z = [c](double t) { return to_eigen(c.z(oracle::ld(kTwoPi) * t)); };
    curve.zdot = [c](double t) { return Vec3(kTwoPi * to_eigen(c.zdot(oracle::ld(kTwoPi) * t))); };
    p.segments.push_back({curve, 0});
    return p;
}

SU2Element tilted_closed_form(double rho, double beta, double m)
{
    const oracle::TiltedCircle c{rho, beta};
    return su2_from_angle_axis({static_cast<double>(c.angle(m)), to_eigen(c.axis_chart())});
}

PathSpec open_geodesic(const FourVector& a, const FourVector& b, double m, int steps)
{
    PathSpec p;
    p.mass = m;
    p.steps_per_segment = steps;
    p.segments.push_back({GeodesicSegment{a, b}, 0});
    return p;
}

const FourVector kA = FourVector::rest(1.0);
const FourVector kB(1.25, 0.75, 0, 0);
const FourVector kC(1.5625, 0.9375, 0.75, 0);

} // namespace

TEST(Geodesic, ConstantWhenEndpointsCoincide)
{
    const auto s = geodesic_between(kB, kB, 1.0, 10);
    ASSERT_EQ(s.size(), 11u);
    for (const auto& p : s) {
        EXPECT_EQ(p.components(), kB.components());
    }
}

TEST(Geodesic, MidpointPlanarAndOnShell)
{
    const auto s = geodesic_between(kA, kB, 1.0, 2);
    EXPECT_NEAR(s[1].norm2(), 1.0, 1e-14);
    EXPECT_EQ(s[1].components()[2], 0.0);
    EXPECT_EQ(s[1].components()[3], 0.0);
    EXPECT_GT(s[1].components()[1], 0.0);
    const auto many = geodesic_between(kB, kC, 1.0, 1000);
    for (const auto& p : many) {
        EXPECT_NEAR(p.norm2(), 1.0, 1e-12);
    }
    EXPECT_EQ(many.front().components(), kB.components());
    EXPECT_EQ(many.back().components(), kC.components());
}

TEST(Geodesic, DistanceIsRapidity)
{
    const GeodesicCurve g(kA, kB, 1.0);
    EXPECT_NEAR(g.rapidity(), std::atanh(0.6), 1e-15);
    EXPECT_NEAR(g.length(), std::atanh(0.6), 1e-15);
}

// Oracle: chart-coordinate geodesic equation with Christoffels by finite differences.
TEST(Geodesic, SatisfiesGeodesicEquation)
{
    const GeodesicCurve g(kB, kC, 1.0);
    const double h = 1e-4;
    auto z = [&](double t) { return chart_from_momentum(FourVector(g.position(t)), 1.0).point.coords(); };
    for (double t = 0.1; t < 0.95; t += 0.1) {
        const Vec3 zd = (z(t + h) - z(t - h)) / (2 * h);
        const Vec3 zdd = (z(t + h) - 2 * z(t) + z(t - h)) / (h * h);
        const auto gam = oracle::christoffel_fd(testutil::to_ld(z(t)), 1.0L);
        Vec3 res = zdd;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                for (int k = 0; k < 3; ++k) {
                    res[i] += static_cast<double>(gam[i][j][k]) * zd[j] * zd[k];
                }
            }
        }
        EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-6) << "t=" << t;
    }
}

TEST(Geodesic, FarApartEndpointsStayFinite)
{
    const FourVector far = embed(ShellPoint(1e12, 1.0, 2.0), 1.0);
    const FourVector other = embed(ShellPoint(1e12, 2.0, 0.5), 1.0);
    const GeodesicCurve g(far, other, 1.0, 1e-3);
    EXPECT_GT(g.rapidity(), 20.0);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const Vec4 p = g.position(t);
        EXPECT_TRUE(p.allFinite());
        EXPECT_NEAR((minkowski_dot(p, p) - 1.0) / (p[0] * p[0]), 0.0, 1e-11);
        EXPECT_GT(p[0], 0.0);
    }
    EXPECT_LT(max_diff(g.position(1.0), other.components()) / other.energy(), 1e-12);
}

TEST(AmbientTransport, ConstantPathLeavesVectorUnchanged)
{
    const Vec4 x0 = boost_frame(kB, 1.0).col(1);
    EXPECT_EQ(transport_vector_ambient(open_geodesic(kB, kB, 1.0, 100), x0), x0);
}

TEST(AmbientTransport, RejectsNonTangentVector)
{
    EXPECT_THROW(transport_vector_ambient(open_geodesic(kA, kB, 1.0, 10), Vec4(1, 0, 0, 0)), DomainError);
}

TEST(AmbientTransport, OutAndBackThroughRestIsTrivial)
{
    PathSpec p = open_geodesic(kA, kC, 1.0, 10000);
    p.segments.push_back({GeodesicSegment{kC, kA}, 0});
    p.closed = true;
    const Eigen::Matrix<double, 4, 3> triad = boost_frame(kA, 1.0);
    EXPECT_LT(max_diff(transport_ambient<3>(p, triad), triad), 1e-8);
    EXPECT_LT(holonomy_ambient(p).angle_axis.angle, 1e-8);
}

TEST(AmbientTransport, PreservesTangencyAndNorm)
{
    PathSpec p = tilted_loop(0.75, 0.4, 1.0, 10000);
    const Vec4 p0 = path_start(p).components();
    const Vec4 x0 = boost_frame(FourVector(p0), 1.0) * Vec3(0.3, -1.0, 0.5);
    const Vec4 x1 = transport_vector_ambient(p, x0);
    EXPECT_NEAR(minkowski_dot(x1, path_end(p).components()), 0.0, 1e-9);
    EXPECT_NEAR(minkowski_dot(x1, x1), minkowski_dot(x0, x0), 1e-9);
}

TEST(IntrinsicTransport, ZeroLengthIsIdentity)
{
    PathSpec p;
    p.segments.push_back({CircleArc{0.75, 1.0, 2.0, 2.0}, 0});
    const Vec3 x0(0.1, 0.2, 0.3);
    EXPECT_EQ(transport_vector_intrinsic(p, x0), x0);
}

TEST(IntrinsicTransport, ConservesNormOnCircle)
{
    const PathSpec p = circle_loop(0.75, 1.0, 10000);
    const ShellPoint z0(0.75, kPi / 2, 0.0);
    const Mat3 g = metric_at(z0, 1.0).g;
    const Vec3 x0(0.4, -0.7, 1.1);
    const Vec3 x1 = transport_vector_intrinsic(p, x0);
    EXPECT_LT(std::abs(x1.dot(g * x1) - x0.dot(g * x0)), 1e-9);
}

TEST(IntrinsicTransport, AgreesWithAmbientEngine)
{
    for (const PathSpec& p : {open_geodesic(kB, kC, 1.0, 10000), tilted_loop(0.75, 0.7, 1.0, 10000)}) {
        const ShellPoint z0(path_pieces(p).front().raw_chart(0.0));
        const ShellPoint z1(path_pieces(p).back().raw_chart(1.0));
        const Vec3 x0(0.2, 0.9, -0.4);
        const Vec3 xi = transport_vector_intrinsic(p, x0);
        const Vec4 xa = transport_vector_ambient(p, embedding_jacobian(z0, 1.0) * x0);
        EXPECT_LT(max_diff(embedding_jacobian(z1, 1.0) * xi, xa), 1e-7);
    }
}

TEST(IntrinsicTransport, SingularPathPointsToAmbientEngine)
{
    try {
        transport_vector_intrinsic(open_geodesic(kA, kB, 1.0, 100), Vec3(1, 0, 0));
        FAIL();
    } catch (const SingularChartError& e) {
        EXPECT_NE(std::string(e.what()).find("ambient"), std::string::npos);
    }
}

TEST(SpinorTransport, ZeroPath)
{
    PathSpec p;
    p.segments.push_back({CircleArc{0.0, kPi / 2, 0.0, kTwoPi}, 0});
    const Vec2c psi(cplx(0.6, 0.1), cplx(0.0, -0.7));
    EXPECT_EQ(transport_spinor(p, psi), psi);
}

TEST(SpinorTransport, NormDrift)
{
    const Vec2c psi = Vec2c(cplx(0.3, 0.4), cplx(-0.5, 0.7)).normalized();
    for (const PathSpec& p : {circle_loop(0.75, 1.0, 10000), tilted_loop(0.75, 0.9, 1.0, 10000)}) {
        EXPECT_LT(std::abs(transport_spinor(p, psi).norm() - 1.0), 1e-13);
    }
}

TEST(SpinorTransport, FullCircleIsQuarterTurn)
{
    const Vec2c psi(1.0, 0.0);
    const auto& s = pauli();
    const Mat2c expect = std::cos(kPi / 4) * Mat2c::Identity() - cplx(0, std::sin(kPi / 4)) * s[1];
    const double rho = rho_of_speed(0.6, 1.0);
    EXPECT_LT((transport_spinor(circle_loop(rho, 1.0, 10000), psi) - expect * psi).norm(), 1e-6);
}

TEST(SpinorTransport, CrossingPhiZeroFlipsSign)
{
    // A half circle that starts at phi = -pi/2 and one at 3 pi / 2 are the same
    // curve, so they must give the same transport.
    PathSpec a, b;
    a.segments.push_back({CircleArc{0.5, 1.0, -kPi / 2, kPi / 2}, 0});
    b.segments.push_back({CircleArc{0.5, 1.0, 3 * kPi / 2, 5 * kPi / 2}, 0});
    EXPECT_LT(max_diff(path_ordered_exponential(a).matrix(), path_ordered_exponential(b).matrix()), 1e-12);
}

TEST(HolonomyPathOrdered, RequiresClosedLoop)
{
    EXPECT_THROW(holonomy_path_ordered(open_geodesic(kB, kC, 1.0, 10)), DomainError);
    PathSpec lie = open_geodesic(kB, kC, 1.0, 10);
    lie.closed = true;
    EXPECT_THROW(holonomy_path_ordered(lie), DomainError);
}

TEST(HolonomyPathOrdered, ZeroRadiusIsIdentity)
{
    const HolonomyResult h = holonomy_path_ordered(circle_loop(0.0, 1.0, 100));
    EXPECT_EQ(h.angle_axis.angle, 0.0);
    EXPECT_EQ(h.su2.matrix(), Mat2c::Identity());
}

TEST(HolonomyPathOrdered, CircleIsRotationAboutE2)
{
    const HolonomyResult h = holonomy_path_ordered(circle_loop(0.75, 1.0, 10000));
    EXPECT_NEAR(h.angle_axis.angle, kPi / 2, 1e-9);
    EXPECT_LT(max_diff(h.angle_axis.axis, Vec3::UnitY()), 1e-9);
    EXPECT_LT(max_diff(h.so3.matrix(), su2_to_so3(h.su2).matrix()), 1e-15);
    EXPECT_TRUE(h.su2.is_valid(1e-14));
}

// Oracle: closed form of the tilted circle.
TEST(HolonomyPathOrdered, SecondOrderOnTiltedCircle)
{
    const SU2Element exact = tilted_closed_form(0.75, 0.6, 1.0);
    double prev = 0.0;
    for (int n : {500, 1000, 2000, 4000}) {
        const HolonomyResult h = holonomy_path_ordered(tilted_loop(0.75, 0.6, 1.0, n));
        const double err = max_diff(h.su2.matrix(), exact.matrix());
        if (prev > 0.0) {
            EXPECT_NEAR(prev / err, 4.0, 0.2) << "n=" << n;
        }
        // the step-doubling estimate tracks the true error
        EXPECT_NEAR(h.convergence / err, 1.0, 0.1);
        prev = err;
    }
}

TEST(HolonomyDisk, ClosedForms)
{
    const HolonomyResult zero = holonomy_disk_circle(0.0, 1.0);
    EXPECT_EQ(zero.su2.matrix(), Mat2c::Identity());
    EXPECT_EQ(zero.angle_axis.angle, 0.0);

    const HolonomyResult q = holonomy_disk_circle(0.75, 1.0);
    EXPECT_NEAR(q.angle_axis.angle, kPi / 2, 1e-15);
    EXPECT_LT(max_diff(q.angle_axis.axis, Vec3::UnitY()), 1e-15);

    // gamma = 1.5: alpha = pi, su2 = -i sigma_2
    const double rho = std::sqrt(1.5 * 1.5 - 1.0);
    const HolonomyResult h = holonomy_disk_circle(rho, 1.0);
    EXPECT_NEAR(h.angle_axis.angle, kPi, 1e-12);
    EXPECT_LT(max_diff(h.su2.matrix(), Mat2c(cplx(0, -1) * pauli()[1])), 1e-15);
    EXPECT_THROW(holonomy_disk_circle(-0.1, 1.0), DomainError);
}

TEST(ThomasPrecession, Angle)
{
    EXPECT_EQ(thomas_precession_angle(0.0), 0.0);
    EXPECT_NEAR(thomas_precession_angle(0.6), kPi / 2, 1e-15);
    const double v = 0.01;
    EXPECT_LT(std::abs(thomas_precession_angle(v) - kPi * v * v) / thomas_precession_angle(v), 0.01);
    EXPECT_THROW(thomas_precession_angle(1.0), DomainError);
}

TEST(Triangle, DegenerateGivesIdentity)
{
    const TriangleHolonomy t = triangle_holonomy(Velocity3(Vec3(0.6, 0, 0)), Velocity3(), 1.0, 100);
    EXPECT_TRUE(t.degenerate);
    EXPECT_EQ(t.holonomy.angle_axis.angle, 0.0);
    const TriangleHolonomy c = triangle_holonomy(Velocity3(Vec3(0.6, 0, 0)), Velocity3(Vec3(-0.3, 0, 0)), 1.0, 100);
    EXPECT_TRUE(c.degenerate);
}

TEST(Triangle, Vertices)
{
    const auto v = boost_triangle_vertices(Velocity3(Vec3(0.6, 0, 0)), Velocity3(Vec3(0, 0.6, 0)), 1.0);
    EXPECT_LT(max_diff(v[0].components(), kA.components()), 1e-16);
    EXPECT_LT(max_diff(v[1].components(), kB.components()), 1e-15);
    EXPECT_LT(max_diff(v[2].components(), kC.components()), 1e-15);
}

TEST(Triangle, MatchesAlgebraicRotation)
{
    const Velocity3 v1(Vec3(0.6, 0, 0)), v2(Vec3(0, 0.6, 0));
    const TriangleHolonomy t = triangle_holonomy(v1, v2, 1.0, 10000);
    const AngleAxis alg = rotation_to_angle_axis(twr_of_two_boosts(v1, v2));
    EXPECT_NEAR(t.holonomy.angle_axis.angle, alg.angle, 1e-10);
    EXPECT_LT(max_diff(t.holonomy.angle_axis.axis, alg.axis), 1e-10);
    EXPECT_EQ(t.holonomy.frame, HolonomyFrame::cartesian);
    EXPECT_LT(max_diff(su2_to_so3(t.holonomy.su2).matrix(), t.holonomy.so3.matrix()), 1e-10);
}

// Oracle: Gauss-Bonnet quadrature of the curvature over the triangle.
TEST(Triangle, GaussBonnet)
{
    std::mt19937_64 rng(31);
    for (int k = 0; k < 6; ++k) {
        const Velocity3 v1 = testutil::random_velocity(rng, 0.9), v2 = testutil::random_velocity(rng, 0.9);
        const double m = 0.5 + k * 0.3;
        const TriangleHolonomy t = triangle_holonomy(v1, v2, m, 2000);
        oracle::V4 b, c;
        for (int i = 0; i < 4; ++i) {
            b[i] = t.vertices[1].components()[i];
            c[i] = t.vertices[2].components()[i];
        }
        const double flux = static_cast<double>(oracle::triangle_curvature_integral(b, c, m));
        EXPECT_NEAR(t.holonomy.angle_axis.angle, flux, 1e-4) << "k=" << k;
        // axis along minus the normal of the triangle plane, in traversal order
        const Vec3 normal = t.vertices[1].spatial().cross(t.vertices[2].spatial()).normalized();
        EXPECT_LT(max_diff(t.holonomy.angle_axis.axis, Vec3(-normal)), 1e-8);
    }
}

TEST(DoubleCover, PathOrderedMatchesIntrinsicTriad)
{
    const PathSpec p = tilted_loop(0.9, 0.5, 1.2, 10000);
    const HolonomyResult h = holonomy_path_ordered(p);
    EXPECT_LT(max_diff(su2_to_so3(h.su2).matrix(), so3_holonomy_intrinsic(p).matrix()), 1e-6);
}

TEST(DoubleCover, AmbientAndChartEnginesAgree)
{
    // chart frame at the base point in Cartesian components: columns r, theta, phi hats
    const PathSpec p = tilted_loop(0.75, 0.3, 1.0, 10000);
    const HolonomyResult chart = holonomy_path_ordered(p);
    const HolonomyResult amb = holonomy_ambient(p);
    Mat3 f;
    f << 1, 0, 0, 0, 0, 1, 0, -1, 0;
    EXPECT_LT(max_diff(Mat3(f.transpose() * amb.so3.matrix() * f), chart.so3.matrix()), 1e-8);
    EXPECT_LT(max_diff(chart.su2.matrix(), tilted_closed_form(0.75, 0.3, 1.0).matrix()), 1e-6);
}

TEST(HolonomyAuto, PicksEngineByChartRegularity)
{
    EXPECT_EQ(holonomy_auto(circle_loop(0.75, 1.0, 100)).frame, HolonomyFrame::chart);
    EXPECT_EQ(holonomy_auto(triangle_loop({kA, kB, kC}, 1.0, 100)).frame, HolonomyFrame::cartesian);
}

TEST(PathValidation, JoinsAndClosure)
{
    PathSpec p = open_geodesic(kA, kB, 1.0, 10);
    p.segments.push_back({GeodesicSegment{kC, kA}, 0});
    EXPECT_THROW(validate_path(p), DomainError);
    PathSpec q;
    q.closed = true;
    q.segments.push_back({CircleArc{0.5, 1.0, 0.0, kPi}, 0});
    EXPECT_THROW(validate_path(q), DomainError);
    PathSpec empty;
    EXPECT_THROW(validate_path(empty), DomainError);
    PathSpec off = open_geodesic(kA, FourVector(1.25, 0.7, 0, 0), 1.0, 10);
    EXPECT_THROW(validate_path(off), DomainError);
}

TEST(SampledCurve, IsChainOfGeodesicChords)
{
    PathSpec s;
    s.steps_per_segment = 3000;
    s.closed = true;
    s.segments.push_back({SampledCurve{{kA, kB, kC, kA}}, 0});
    const HolonomyResult a = holonomy_ambient(s);
    const HolonomyResult b = holonomy_ambient(triangle_loop({kA, kB, kC}, 1.0, 1000));
    EXPECT_LT(max_diff(a.so3.matrix(), b.so3.matrix()), 1e-12);
}
