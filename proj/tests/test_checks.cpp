#include <gtest/gtest.h>

#include <filesystem>

#include "framed/framed.hpp"

using namespace framed;

namespace {
SurfaceSpec builtin(const std::string& name, const Parameters& p = {}) { return build_surface(builtin_scene(name, p)); }
}  // namespace

TEST(Checks, EveryBuiltinPasses) {
  for (const auto& name : builtin_names()) {
    const CheckReport rep = run_checks(builtin(name));
    EXPECT_TRUE(rep.all_pass()) << name;
    for (const auto& row : rep.rows)
      EXPECT_TRUE(row.skipped || row.pass) << name << " " << row.suite << " " << row.detail << " " << row.value;
  }
}

TEST(Checks, SkipsWhatDoesNotApply) {
  const CheckReport gm = run_checks(builtin("cousin_pair"));
  for (const auto& row : gm.rows)
    if (row.suite == "gauss" || row.suite == "null" || row.suite == "ros") EXPECT_TRUE(row.skipped);
  const CheckReport cat = run_checks(builtin("catenoid"));
  int ros = 0;
  for (const auto& row : cat.rows) ros += row.suite == "ros" && !row.skipped;
  EXPECT_EQ(ros, 9);  // three forms at three points
}

TEST(Checks, BrokenDataFails) {
  // a residual stuck at a constant offset has order ~0
  const SurfaceFields F = make_fields(builtin("catenoid"));
  const auto st = convergence_study([&](double h) { return gauss_residual(F, {0.4, 0.3}, h) + 0.1; }, 2e-2);
  EXPECT_FALSE(st.pass());
}

TEST(Checks, SamplePointsAvoidSingularities) {
  const SurfaceSpec s = builtin("scherk");
  const SurfaceFields F = make_fields(s);
  const auto pts = check_points(s, F, 5);
  EXPECT_EQ(pts.size(), 5u);
  for (const Complex& z : pts)
    for (const Complex& q : singular_candidates(s, F)) EXPECT_GT(std::abs(z - q), 0.2);
}

TEST(Immersion, BallModelStaysInside) {
  for (const char* name : {"cousin", "catenoid", "enneper"}) {
    const ImmersedMesh m = immerse_grid(builtin(name), ImmersionModel::Ball, 24);
    ASSERT_FALSE(m.triangles.empty());
    for (const auto& x : m.x) EXPECT_LT(x[0] * x[0] + x[1] * x[1] + x[2] * x[2], 1.0) << name;
  }
}

TEST(Immersion, EuclideanMatchesPathIntegral) {
  const SurfaceSpec s = builtin("enneper");
  const ImmersedMesh m = immerse_grid(s, ImmersionModel::Euclidean, 16);
  // differences between grid vertices equal the immersion integral between their chart points
  const auto ref = minimal_immersion(s, m.z[0], m.z.back());
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(m.x.back()[k] - m.x[0][k], ref[k], 1e-8);
  // Enneper in closed form: x1 = Re(z - z^3/3)/2 up to translation
  auto x1 = [](Complex w) { return 0.5 * (w - w * w * w / 3.0).real(); };
  EXPECT_NEAR(m.x.back()[0] - m.x[0][0], x1(m.z.back()) - x1(m.z[0]), 1e-8);
}

TEST(Immersion, TorusAndGaussMapOnlyAreUnsupported) {
  EXPECT_THROW(immerse_grid(builtin("flat_torus"), ImmersionModel::Euclidean), Unsupported);
  EXPECT_THROW(immerse_grid(builtin("cousin_pair"), ImmersionModel::Ball), Unsupported);
}

TEST(Correspond, RoundTripAndFiles) {
  const Scene cat = builtin_scene("catenoid");
  const Scene b = correspond(cat, "bryant");
  EXPECT_EQ(b.kind, "bryant_sigma");
  const Scene back = correspond(b, "minimal");
  EXPECT_EQ(back.kind, "weierstrass");
  EXPECT_EQ(back.name, "catenoid");
  const auto path = std::filesystem::temp_directory_path() / "framed_corr_test.toml";
  save_scene_file(b, path.string());
  const Scene re = load_scene_file(path.string());
  EXPECT_EQ(re.exprs, b.exprs);
  std::filesystem::remove(path);
  // explicit Bryant data goes through eta = sigma / dg
  const Scene cm = correspond(builtin_scene("cousin", {{"mu", 1.0}}), "minimal");
  const SurfaceFields a = make_fields(build_surface(builtin_scene("cousin", {{"mu", 1.0}})));
  const SurfaceFields m = make_fields(build_surface(cm));
  for (Complex z : {Complex(0.4, 0.3), Complex(-1.1, 0.7)}) {
    EXPECT_NEAR(metric_factor(m, z) / metric_factor(a, z), 1.0, 1e-10);
    EXPECT_NEAR(gauss_curvature(m, z) / gauss_curvature(a, z), 1.0, 1e-10);
  }
  EXPECT_THROW(correspond(cat, "minimal"), Unsupported);
  EXPECT_THROW(correspond(cat, "sideways"), ValidationError);
}
