#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace twr;
using testutil::max_diff;

TEST(PureBoost, ZeroVelocityIsIdentity)
{
    EXPECT_EQ(pure_boost(Velocity3()).matrix(), Mat4::Identity());
}

TEST(PureBoost, MapsRestToMovingMomentum)
{
    const FourVector p = pure_boost(Velocity3(Vec3(0.6, 0, 0))) * FourVector::rest(1.0);
    EXPECT_LT(max_diff(p.components(), Vec4(1.25, 0.75, 0, 0)), 1e-15);
    EXPECT_NEAR(p.norm2(), 1.0, 1e-14);
}

TEST(PureBoost, PreservesMetricAndIsProper)
{
    const LorentzMap l = pure_boost(Velocity3(Vec3(0.3, -0.5, 0.7)));
    EXPECT_LT(l.metric_residual(), 1e-12);
    EXPECT_TRUE(l.is_proper_orthochronous());
    EXPECT_LT(max_diff(l.matrix(), l.matrix().transpose()), 0.0 + 1e-16);
}

TEST(PureBoost, SuperluminalSpeedThrows)
{
    EXPECT_THROW(Velocity3(Vec3(1.2, 0, 0)), DomainError);
    EXPECT_THROW(Velocity3(Vec3(0.6, 0.8, 0)), DomainError);
    try {
        Velocity3(Vec3(0, 0, 1.0));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_STREQ(e.what(), "superluminal speed");
    }
}

TEST(BoostFromMomentum, RestGivesIdentity)
{
    EXPECT_LT(max_diff(boost_from_momentum(FourVector::rest(2.0), 2.0).matrix(), Mat4::Identity()), 1e-15);
}

TEST(BoostFromMomentum, InvertsPureBoost)
{
    const LorentzMap l = boost_from_momentum(FourVector(1.25, 0.75, 0, 0), 1.0);
    EXPECT_LT(max_diff(l.matrix(), pure_boost(Velocity3(Vec3(0.6, 0, 0))).matrix()), 1e-15);
}

TEST(BoostFromMomentum, RoundTrip)
{
    const Velocity3 v(Vec3(-0.2, 0.4, 0.65));
    const double m = 1.7;
    const LorentzMap l = pure_boost(v);
    EXPECT_LT(max_diff(boost_from_momentum(l * FourVector::rest(m), m).matrix(), l.matrix()), 1e-12);
}

TEST(BoostFromMomentum, OffShellThrows)
{
    EXPECT_THROW(boost_from_momentum(FourVector(1.25, 0.7, 0, 0), 1.0), DomainError);
    EXPECT_THROW(boost_from_momentum(FourVector(-1.25, 0.75, 0, 0), 1.0), DomainError);
    EXPECT_THROW(boost_from_momentum(FourVector(1, 0, 0, 0), 0.0), DomainError);
}

TEST(VelocityAdd, CollinearExamples)
{
    EXPECT_DOUBLE_EQ(velocity_add_collinear(0.5, 0.5), 0.8);
    EXPECT_DOUBLE_EQ(velocity_add_collinear(0.37, 0.0), 0.37);
    const long double ref = (0.9L + 0.9L) / (1.0L + 0.81L);
    EXPECT_NEAR(velocity_add_collinear(0.9, 0.9), static_cast<double>(ref), 1e-16);
    EXPECT_NEAR(velocity_add_collinear(0.9, 0.9), 0.994475138121547, 1e-15);
    EXPECT_THROW(velocity_add_collinear(1.0, 0.1), DomainError);
}

TEST(VelocityAdd, GeneralReducesToCollinear)
{
    const Vec3 d = Vec3(1, 2, -2).normalized();
    const Velocity3 s = velocity_add_general(Velocity3(0.5 * d), Velocity3(0.7 * d));
    EXPECT_NEAR(s.speed(), velocity_add_collinear(0.5, 0.7), 1e-15);
    EXPECT_LT((s.vec().normalized() - d).norm(), 1e-15);
    const Velocity3 v1(Vec3(0.1, 0.2, 0.3));
    EXPECT_LT(max_diff(velocity_add_general(v1, Velocity3()).vec(), v1.vec()), 1e-16);
}

// Oracle: the velocity of L(v1) L(v2) rest (second boost relative to the first
// frame), by extended-precision matrix products.
TEST(VelocityAdd, GeneralMatchesMatrixProduct)
{
    const oracle::M4 p = oracle::mul(oracle::boost({0.6L, 0, 0}), oracle::boost({0, 0.6L, 0}));
    const Vec3 ref(static_cast<double>(p[1][0] / p[0][0]), static_cast<double>(p[2][0] / p[0][0]),
                   static_cast<double>(p[3][0] / p[0][0]));
    const Velocity3 v12 = velocity_add_general(Velocity3(Vec3(0.6, 0, 0)), Velocity3(Vec3(0, 0.6, 0)));
    EXPECT_LT(max_diff(v12.vec(), ref), 1e-15);
    EXPECT_LT(max_diff(v12.vec(), Vec3(0.6, 0.48, 0)), 1e-15);
}

TEST(WignerRotation, CollinearBoostGivesIdentity)
{
    const FourVector p = pure_boost(Velocity3(Vec3(0, 0, 0.4))) * FourVector::rest(1.0);
    const Rotation3 r = wigner_rotation(pure_boost(Velocity3(Vec3(0, 0, -0.7))), p, 1.0);
    EXPECT_LT(max_diff(r.matrix(), Mat3::Identity()), 1e-14);
}

TEST(WignerRotation, RotationAtRestIsItself)
{
    const Mat3 rot = rodrigues({0.8, Vec3(1, 1, 0).normalized()}).matrix();
    const Rotation3 r = wigner_rotation(LorentzMap::rotation(rot), FourVector::rest(1.0), 1.0);
    EXPECT_LT(max_diff(r.matrix(), rot), 1e-15);
}

TEST(WignerRotation, LabOrderExampleMatchesTwrAngle)
{
    const Velocity3 v1(Vec3(0.6, 0, 0)), v2(Vec3(0, 0.6, 0));
    const AngleAxis w = rotation_to_angle_axis(wigner_rotation(pure_boost(v2), FourVector(1.25, 0.75, 0, 0), 1.0));
    const AngleAxis t = rotation_to_angle_axis(twr_of_two_boosts(v1, v2));
    EXPECT_NEAR(w.angle, t.angle, 1e-14);
    EXPECT_NEAR(std::abs(w.axis.dot(t.axis)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(w.axis[2]), 1.0, 1e-14);
}

TEST(WignerRotation, RelativeAndLabCompositions)
{
    const Velocity3 v1(Vec3(0.3, -0.2, 0.5)), v2(Vec3(-0.4, 0.6, 0.1));
    const FourVector p = pure_boost(v1) * FourVector::rest(1.3);
    EXPECT_LT(max_diff(wigner_rotation(relative_boost(v1, v2), p, 1.3).matrix(), twr_of_two_boosts(v1, v2).matrix()), 1e-12);
    EXPECT_LT(max_diff(wigner_rotation(pure_boost(v2), p, 1.3).matrix(), twr_of_two_boosts(v2, v1).matrix()), 1e-12);
}

TEST(WignerRotation, RejectsImproperMap)
{
    Mat4 parity = -Mat4::Identity();
    parity(0, 0) = 1.0;
    EXPECT_THROW(wigner_rotation(LorentzMap(parity), FourVector::rest(1.0), 1.0), DomainError);
}

TEST(Twr, TrivialCases)
{
    const Velocity3 v(Vec3(0.2, 0.3, -0.1));
    EXPECT_LT(max_diff(twr_of_two_boosts(v, Velocity3()).matrix(), Mat3::Identity()), 1e-15);
    EXPECT_LT(max_diff(twr_of_two_boosts(v, Velocity3(-2.5 * v.vec())).matrix(), Mat3::Identity()), 1e-12);
}

// Oracle: L(p)^-1 L(v1) L(v2) in long double, p = L(v1) L(v2) rest.
TEST(Twr, PerpendicularSixTenthsMatchesMatrixOracle)
{
    const oracle::M3 ref = oracle::residual_rotation(oracle::mul(oracle::boost({0.6L, 0, 0}), oracle::boost({0, 0.6L, 0})));
    const Rotation3 r = twr_of_two_boosts(Velocity3(Vec3(0.6, 0, 0)), Velocity3(Vec3(0, 0.6, 0)));
    EXPECT_LT(max_diff(r.matrix(), testutil::to_eigen(ref)), 1e-15);
    const AngleAxis aa = rotation_to_angle_axis(r);
    const auto aref = oracle::angle_axis(ref);
    EXPECT_NEAR(aa.angle, static_cast<double>(aref.angle), 1e-15);
    EXPECT_NEAR(aa.angle, 0.22131444234779, 1e-13);
    EXPECT_LT(max_diff(aa.axis, Vec3(0, 0, -1)), 1e-15);
    // cos(angle) = (1 + g + g1 + g2)^2 / ((1 + g)(1 + g1)(1 + g2)) - 1, g = g1 g2 when perpendicular
    const double g1 = 1.25, g = g1 * g1;
    EXPECT_NEAR(std::cos(aa.angle), (1 + g + 2 * g1) * (1 + g + 2 * g1) / ((1 + g) * (1 + g1) * (1 + g1)) - 1.0, 1e-15);
}

TEST(AngleAxisConversion, Canonical)
{
    const AngleAxis id = rotation_to_angle_axis(Rotation3());
    EXPECT_EQ(id.angle, 0.0);
    EXPECT_EQ(id.axis, Vec3::UnitZ());
    Mat3 rz;
    rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    const AngleAxis q = rotation_to_angle_axis(Rotation3(rz));
    EXPECT_NEAR(q.angle, kPi / 2, 1e-15);
    EXPECT_LT(max_diff(q.axis, Vec3::UnitZ()), 1e-15);
}

TEST(AngleAxisConversion, HalfTurnBranch)
{
    const Vec3 n = Vec3(-1, 2, 0.5).normalized();
    const AngleAxis a = rotation_to_angle_axis(rodrigues({kPi, n}));
    EXPECT_NEAR(a.angle, kPi, 1e-15);
    EXPECT_NEAR(std::abs(a.axis.dot(n)), 1.0, 1e-15);
    EXPECT_LT(max_diff(rodrigues(a).matrix(), rodrigues({kPi, n}).matrix()), 1e-14);
    // near the branch
    const AngleAxis b = rotation_to_angle_axis(rodrigues({kPi - 1e-9, n}));
    EXPECT_NEAR(b.angle, kPi - 1e-9, 1e-12);
    EXPECT_LT(max_diff(rodrigues(b).matrix(), rodrigues({kPi - 1e-9, n}).matrix()), 1e-14);
}

TEST(Su2, FromAngleAxis)
{
    EXPECT_LT(max_diff(su2_from_angle_axis({0.0, Vec3::UnitX()}).matrix(), Mat2c::Identity()), 0.0 + 1e-16);
    EXPECT_LT(max_diff(su2_from_angle_axis({kTwoPi, Vec3(1, 1, 1).normalized()}).matrix(), Mat2c(-Mat2c::Identity())), 1e-15);
    const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
    Mat2c expect;
    expect << c, -s, s, c;
    EXPECT_LT(max_diff(su2_from_angle_axis({kPi / 2, Vec3::UnitY()}).matrix(), expect), 1e-16);
}

TEST(Su2, ToSo3)
{
    EXPECT_LT(max_diff(su2_to_so3(SU2Element()).matrix(), Mat3::Identity()), 1e-16);
    EXPECT_LT(max_diff(su2_to_so3(-SU2Element()).matrix(), Mat3::Identity()), 1e-16);
    const auto& sg = pauli();
    const SU2Element u(std::cos(kPi / 4) * Mat2c::Identity() - cplx(0, std::sin(kPi / 4)) * sg[1]);
    EXPECT_LT(max_diff(su2_to_so3(u).matrix(), rodrigues({kPi / 2, Vec3::UnitY()}).matrix()), 1e-15);
}

TEST(Su2, GeneratorAlgebra)
{
    const auto& j = su2_generators();
    EXPECT_LT(max_diff(Mat2c(j[0] * j[1] - j[1] * j[0]), j[2]), 1e-16);
    EXPECT_LT(max_diff(Mat2c(j[1] * j[2] - j[2] * j[1]), j[0]), 1e-16);
    EXPECT_LT(max_diff(Mat2c(j[2] * j[0] - j[0] * j[2]), j[1]), 1e-16);
    const Vec3 x(0.3, -1.2, 0.7);
    EXPECT_LT(max_diff(su2_algebra_to_vector(su2_algebra_from_vector(x)), x), 1e-15);
}

TEST(Su2, Reproject)
{
    const SU2Element u = su2_from_angle_axis({1.1, Vec3(1, -2, 3).normalized()});
    EXPECT_LT(max_diff(su2_reproject(u.matrix()), u.matrix()), 1e-16);
    const Mat2c drifted = (1.0 + 1e-10) * u.matrix();
    EXPECT_LT(max_diff(su2_reproject(drifted), u.matrix()), 1e-15);
}

TEST(So3ToSu2, LiftsBackToRotation)
{
    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        const SU2Element u = testutil::random_su2(rng);
        const SU2Element w = so3_to_su2(su2_to_so3(u));
        const double d = std::min(max_diff(w.matrix(), u.matrix()), max_diff(w.matrix(), Mat2c(-u.matrix())));
        EXPECT_LT(d, 1e-12);
    }
}
