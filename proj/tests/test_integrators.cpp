#include "geodint/integrators.hpp"

#include <gtest/gtest.h>

#include "geodint/euclidean.hpp"
#include "geodint/fields.hpp"
#include "geodint/rng.hpp"
#include "geodint/spd.hpp"

namespace {

using namespace geodint;

Eigen::Matrix2d diag2(double a, double b) {
  return Eigen::Vector2d(a, b).asDiagonal().toDenseMatrix();
}

VectorField<Euclidean> downhill_field() {
  Eigen::Matrix2d a;
  a << -1.0, 4.0, 0.0, -3.0;
  return linear_field(a);
}

TEST(MethodId, NamesAndParsingRoundTrip) {
  EXPECT_EQ(method_name(MethodId::gee()), "gee");
  EXPECT_EQ(method_name(MethodId::gie()), "gie");
  EXPECT_EQ(method_name(MethodId::gimp()), "gimp");
  EXPECT_EQ(method_name(MethodId::sphmp()), "sphmp");
  EXPECT_EQ(method_name(MethodId::lie_euler(2.0)), "lie");
  EXPECT_EQ(parse_method("GIMP").kind, MethodKind::gimp);
  EXPECT_EQ(parse_method("lie_euler").kind, MethodKind::lie_euler_implicit);
  EXPECT_THROW(parse_method("rk4"), invalid_input);
  EXPECT_EQ(method_order(MethodId::gee()), 1);
  EXPECT_EQ(method_order(MethodId::gie()), 1);
  EXPECT_EQ(method_order(MethodId::gimp()), 2);
  EXPECT_EQ(method_order(MethodId::sphmp()), 2);
}

TEST(Rodrigues, MatchesAngleAxisRotation) {
  Rng rng(701);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector3d a = uniform(rng, 0.01, 6.0) * random_unit3(rng);
    const Eigen::Vector3d p = random_unit3(rng);
    const Eigen::Vector3d expected =
        Eigen::AngleAxisd(a.norm(), a.normalized()).toRotationMatrix() * p;
    EXPECT_LT((rodrigues_apply(a, p) - expected).norm(), 1e-13);
  }
  const Eigen::Vector3d tiny(1e-9, 0.0, 0.0);
  EXPECT_LT((rodrigues_apply(tiny, Eigen::Vector3d::UnitY()) -
             Eigen::Vector3d(0.0, 1.0, 1e-9))
                .norm(),
            1e-15);
}

TEST(ExplicitStep, LinearFieldMatchesClosedForm) {
  const Euclidean m(2);
  const auto out = gee_step(m, downhill_field(), Eigen::Vector2d(1.0, 1.0), 0.25);
  ASSERT_TRUE(out.converged);
  EXPECT_NEAR(out.principal()[0], 1.75, 1e-14);
  EXPECT_NEAR(out.principal()[1], 0.25, 1e-14);
}

TEST(ImplicitStep, LinearFieldMatchesResolventFormula) {
  const Euclidean m(2);
  const auto out =
      gie_step(m, downhill_field(), Eigen::Vector2d(1.0, 1.0), 0.25, SolverConfig{});
  ASSERT_TRUE(out.converged);
  EXPECT_NEAR(out.principal()[0], 1.2571428571428571, 1e-10);
  EXPECT_NEAR(out.principal()[1], 0.5714285714285714, 1e-10);
}

TEST(ImplicitStep, ResidualIdentityHoldsOnTheSphere) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d::UnitZ());
  const Eigen::Vector3d y = Eigen::Vector3d(0.8, 0.1, 0.59).normalized();
  SolverConfig cfg;
  cfg.tolerance = 1e-13;
  const auto out = gie_step(m, f, y, 0.4, cfg);
  ASSERT_TRUE(out.converged);
  const Eigen::Vector3d z = out.principal();
  const Eigen::Vector3d back = m.exp(z, -0.4 * f.eval(z));
  EXPECT_LT((back - y).norm(), 1e-11);
}

TEST(MidpointStep, LinearFieldMatchesClosedForm) {
  const Euclidean m(2);
  const auto out =
      gimp_step(m, downhill_field(), Eigen::Vector2d(1.0, 1.0), 0.25, SolverConfig{});
  ASSERT_TRUE(out.converged);
  EXPECT_NEAR(out.principal()[0], 1.4242424242424243, 1e-10);
  EXPECT_NEAR(out.principal()[1], 0.45454545454545459, 1e-10);
  ASSERT_TRUE(out.midpoint.has_value());
  EXPECT_NEAR((*out.midpoint)[0], 1.2121212121212122, 1e-10);
  EXPECT_NEAR((*out.midpoint)[1], 0.72727272727272729, 1e-10);
}

TEST(MidpointStep, HalfTurnRotationPassesThroughEquatorMidpoint) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d::UnitZ());
  const auto out =
      gimp_step(m, f, Eigen::Vector3d::UnitX(), M_PI, SolverConfig{});
  ASSERT_TRUE(out.converged);
  EXPECT_LT((out.principal() + Eigen::Vector3d::UnitX()).norm(), 1e-9);
  ASSERT_TRUE(out.midpoint.has_value());
  EXPECT_LT((*out.midpoint - Eigen::Vector3d::UnitY()).norm(), 1e-9);
}

TEST(MidpointStep, IsSelfAdjointOnTheSphere) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d(0.3, -0.2, 1.0));
  const Eigen::Vector3d y = Eigen::Vector3d(0.2, 0.9, 0.4).normalized();
  SolverConfig cfg;
  cfg.tolerance = 1e-13;
  for (double h : {0.3, 0.7, 1.3}) {
    const auto fwd = gimp_step(m, f, y, h, cfg);
    ASSERT_TRUE(fwd.converged);
    const auto back = gimp_step(m, f, fwd.principal(), -h, cfg);
    ASSERT_TRUE(back.converged);
    EXPECT_LT((back.principal() - y).norm(), 1e-10);
  }
}

TEST(MidpointStep, IsSelfAdjointOnSpd) {
  const SpdManifold m(2);
  const auto f = karcher_gradient_field(m, {diag2(3.0, 0.5), Eigen::Matrix2d::Identity()});
  const Eigen::MatrixXd y = (Eigen::Matrix2d() << 2.0, 0.4, 0.4, 1.0).finished();
  SolverConfig cfg;
  cfg.tolerance = 1e-13;
  const auto fwd = gimp_step(m, f, y, 0.8, cfg);
  ASSERT_TRUE(fwd.converged);
  const auto back = gimp_step(m, f, fwd.principal(), -0.8, cfg);
  ASSERT_TRUE(back.converged);
  EXPECT_LT((back.principal() - y).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SphereMidpointStep, EquatorialStepRotatesByClosedFormAngle) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d::UnitZ());
  const double h = 0.5;
  const auto out = sphmp_step(m, f, Eigen::Vector3d::UnitX(), h, SolverConfig{});
  ASSERT_TRUE(out.converged);
  const double beta = 0.50536051028415729;  // 2 asin(h / 2)
  EXPECT_LT((out.principal() - Eigen::Vector3d(std::cos(beta), std::sin(beta), 0.0)).norm(),
            1e-10);
}

TEST(SphereMidpointStep, QuarterTurnStepSizeMatchesClosedForm) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d::UnitZ());
  const double h = 0.76536686473017956;  // 2 sin(pi / 8)
  const auto out = sphmp_step(m, f, Eigen::Vector3d::UnitX(), h, SolverConfig{});
  ASSERT_TRUE(out.converged);
  EXPECT_LT((out.principal() -
             Eigen::Vector3d(0.70710678118654757, 0.70710678118654746, 0.0))
                .norm(),
            1e-10);
}

TEST(SphereMidpointStep, RejectsOtherManifolds) {
  const SpdManifold m(2);
  const auto f = zero_field(m);
  EXPECT_THROW(
      method_step(m, MethodId::sphmp(), f, Eigen::MatrixXd(Eigen::Matrix2d::Identity()), 0.1,
                  SolverConfig{}),
      invalid_input);
}

TEST(LieEulerStep, UnitFrameReproducesTheExactRotation) {
  const Sphere2 m;
  const auto f = isotropy_field(1.0);
  const Eigen::Vector3d y = Eigen::Vector3d(0.6, -0.3, 0.74).normalized();
  SolverConfig cfg;
  cfg.tolerance = 1e-13;
  for (double h : {0.5, 1.0, 2.0}) {
    const auto out = lie_euler_implicit_step(m, f, y, h, cfg);
    ASSERT_TRUE(out.converged);
    const Eigen::Vector3d expected =
        Eigen::AngleAxisd(h, Eigen::Vector3d::UnitZ()).toRotationMatrix() * y;
    EXPECT_LT((out.principal() - expected).norm(), 1e-11);
  }
}

TEST(LieEulerStep, ZeroFrameCoefficientMatchesImplicitEuler) {
  const Sphere2 m;
  const Eigen::Vector3d y = Eigen::Vector3d(0.7, 0.2, 0.69).normalized();
  SolverConfig cfg;
  cfg.tolerance = 1e-13;
  for (double h : {0.2, 0.6, 1.0}) {
    const auto lie = lie_euler_implicit_step(m, isotropy_field(0.0), y, h, cfg);
    const auto gie =
        gie_step(m, killing_rotation_field(Eigen::Vector3d::UnitZ()), y, h, cfg);
    ASSERT_TRUE(lie.converged);
    ASSERT_TRUE(gie.converged);
    EXPECT_LT((lie.principal() - gie.principal()).norm(), 2.0 * cfg.tolerance + 1e-12);
  }
}

TEST(LieEulerStep, RequiresAFrameMap) {
  const Sphere2 m;
  VectorField<Sphere2> f;
  f.eval = [](const Eigen::Vector3d& y) {
    return Eigen::Vector3d(Eigen::Vector3d::UnitZ() - y.z() * y);
  };
  EXPECT_THROW(lie_euler_implicit_step(m, f, Eigen::Vector3d::UnitX(), 0.1, SolverConfig{}),
               invalid_input);
}

TEST(MethodStep, AttachesCanonicalFrameForPlainRotationFields) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d::UnitZ());
  const Eigen::Vector3d y = Eigen::Vector3d(0.6, 0.0, 0.8).normalized();
  const auto out = method_step(m, MethodId::lie_euler(1.0), f, y, 0.5, SolverConfig{});
  ASSERT_TRUE(out.converged);
  const Eigen::Vector3d expected =
      Eigen::AngleAxisd(0.5, Eigen::Vector3d::UnitZ()).toRotationMatrix() * y;
  EXPECT_LT((out.principal() - expected).norm(), 1e-10);
}

TEST(MethodStep, LocalOrderMatchesMethodOrder) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d::UnitZ());
  const Eigen::Vector3d y = Eigen::Vector3d(0.8, 0.0, 0.6).normalized();
  SolverConfig cfg;
  cfg.tolerance = 1e-13;
  for (const auto& id :
       {MethodId::gee(), MethodId::gie(), MethodId::gimp(), MethodId::sphmp()}) {
    std::vector<double> hs = {0.02, 0.04, 0.08}, errs;
    for (double h : hs) {
      const auto out = method_step(m, id, f, y, h, cfg);
      ASSERT_TRUE(out.converged);
      const Eigen::Vector3d exact =
          Eigen::AngleAxisd(h, Eigen::Vector3d::UnitZ()).toRotationMatrix() * y;
      errs.push_back(m.distance(out.principal(), exact));
    }
    const double slope01 = std::log2(errs[1] / errs[0]);
    const double slope12 = std::log2(errs[2] / errs[1]);
    const double expected = method_order(id) + 1;
    EXPECT_NEAR(slope01, expected, 0.35) << method_name(id);
    EXPECT_NEAR(slope12, expected, 0.35) << method_name(id);
  }
}

TEST(MethodStep, NonconvergenceYieldsEmptySolutions) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d::UnitZ());
  SolverConfig cfg;
  cfg.tolerance = 1e-15;
  cfg.max_iterations = 1;
  cfg.strategy = SolverStrategy::newton;
  const auto out = method_step(m, MethodId::gie(), f,
                               Eigen::Vector3d(0.6, 0.0, 0.8).normalized(), 2.5, cfg);
  EXPECT_FALSE(out.converged);
  EXPECT_TRUE(out.solutions.empty());
  EXPECT_THROW(out.principal(), nonconvergence);
}

TEST(MethodStep, RejectsNonFiniteOrZeroStep) {
  const Euclidean m(2);
  const auto f = downhill_field();
  EXPECT_THROW(gee_step(m, f, Eigen::Vector2d(1.0, 0.0), 0.0), invalid_input);
  EXPECT_THROW(
      gee_step(m, f, Eigen::Vector2d(1.0, 0.0), std::numeric_limits<double>::infinity()),
      invalid_input);
}

TEST(Multistart, FindsAllImplicitSolutionsAtLargeStep) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d::UnitZ());
  const double z0 = 1e-4;
  const Eigen::Vector3d y(std::sqrt(1.0 - z0 * z0), 0.0, z0);
  SolverConfig cfg;
  cfg.tolerance = 1e-12;
  cfg.multistart_grid = sphere_multistart_grid();
  const auto out = gie_step(m, f, y, M_PI, cfg);
  ASSERT_TRUE(out.converged);
  const std::vector<double> expected = {-0.86600418156524339, -1.0000000000000703e-04,
                                        0.86604662288375034};
  ASSERT_EQ(out.solutions.size(), expected.size());
  std::vector<double> thirds;
  for (const auto& z : out.solutions) thirds.push_back(z.z());
  std::sort(thirds.begin(), thirds.end());
  for (size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(thirds[i], expected[i], 1e-8);
  for (size_t i = 0; i < out.solutions.size(); ++i)
    for (size_t j = i + 1; j < out.solutions.size(); ++j)
      EXPECT_GT((out.solutions[i] - out.solutions[j]).norm(), 1e-6);
}

TEST(Integrate, FollowsTheRotationFlow) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d(0.0, 0.0, 2.0));
  const auto traj = integrate(m, MethodId::gimp(), f, Eigen::Vector3d::UnitX(), 0.08, 10,
                              SolverConfig{});
  ASSERT_TRUE(traj.complete);
  ASSERT_EQ(traj.points.size(), 11u);
  const Eigen::Vector3d expected(-0.029199522301288815, 0.99957360304150511, 0.0);
  EXPECT_LT((traj.points.back() - expected).norm(), 1e-3);
}

TEST(Integrate, ReportsTheFailingStep) {
  const Sphere2 m;
  const auto f = killing_rotation_field(Eigen::Vector3d::UnitZ());
  SolverConfig cfg;
  cfg.tolerance = 1e-15;
  cfg.max_iterations = 1;
  cfg.strategy = SolverStrategy::newton;
  const auto traj = integrate(m, MethodId::gie(), f,
                              Eigen::Vector3d(0.6, 0.0, 0.8).normalized(), 2.5, 5, cfg);
  EXPECT_FALSE(traj.complete);
  EXPECT_EQ(traj.failed_step, 1);
  EXPECT_EQ(traj.points.size(), 1u);
}

TEST(Integrate, RequiresAtLeastOneStep) {
  const Euclidean m(2);
  EXPECT_THROW(
      integrate(m, MethodId::gee(), downhill_field(), Eigen::Vector2d(1.0, 0.0), 0.1, 0,
                SolverConfig{}),
      invalid_input);
}

}  // namespace
