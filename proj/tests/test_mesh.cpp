#include <gtest/gtest.h>

#include <random>

#include "framed/mesh.hpp"
#include "framed/scene.hpp"

using namespace framed;

namespace {

SurfaceSpec builtin(const std::string& name, const Parameters& p = {}) { return build_surface(builtin_scene(name, p)); }

}  // namespace

TEST(Delaunay, EmptyCircumcircles) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<Complex> pts;
  for (int i = 0; i < 400; ++i) pts.emplace_back(U(rng), U(rng));
  const auto tris = delaunay(pts);
  // Euler: a triangulation of n points with k hull points has 2n - 2 - k triangles
  EXPECT_GT(tris.size(), 2 * pts.size() - 2 - 60);
  for (const auto& t : tris) {
    ASSERT_GT(detail::orient(pts[t[0]], pts[t[1]], pts[t[2]]), 0);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (static_cast<int>(p) == t[0] || static_cast<int>(p) == t[1] || static_cast<int>(p) == t[2]) continue;
      ASSERT_LE(detail::incircle(pts[t[0]], pts[t[1]], pts[t[2]], pts[p]), 1e-12);
    }
  }
  double area = 0.0;
  for (const auto& t : tris) area += 0.5 * static_cast<double>(detail::orient(pts[t[0]], pts[t[1]], pts[t[2]]));
  EXPECT_GT(area, 3.5);
  EXPECT_LT(area, 4.0);
}

TEST(Mesh, CatenoidIsACylinder) {
  const ConformalMesh m = build_mesh(builtin("catenoid"), 10.0, 0.1);
  EXPECT_EQ(m.boundary_components(), 2);
  EXPECT_EQ(m.euler_characteristic(), 0);
  EXPECT_GT(min_angle_degrees(m), 10.0);
  ASSERT_EQ(m.ends.size(), 2u);
  for (const auto& e : m.ends) EXPECT_NEAR(e.r_trunc, std::exp(-10.0), 1e-18);
  int dir = 0;
  for (char c : m.dirichlet) dir += c;
  EXPECT_GT(dir, 0);
}

TEST(Mesh, ScherkEulerCharacteristic) {
  const ConformalMesh m = build_mesh(builtin("scherk"), 5.0, 0.2);
  EXPECT_EQ(m.euler_characteristic(), -2);
  EXPECT_EQ(m.boundary_components(), 4);
  EXPECT_EQ(m.seams.size(), 4u);
}

TEST(Mesh, EnneperAndPlane) {
  const ConformalMesh e = build_mesh(builtin("enneper"), 5.0, 0.1);
  EXPECT_EQ(e.euler_characteristic(), 1);
  EXPECT_EQ(e.boundary_components(), 1);
  EXPECT_NEAR(e.ends[0].r_trunc, 1.0 / std::sqrt(5.0), 1e-14);
  const ConformalMesh p = build_mesh(builtin("plane"), 5.0, 0.2);
  EXPECT_EQ(p.euler_characteristic(), 1);
  for (double k : p.K) EXPECT_EQ(k, 0.0);
}

TEST(Mesh, TorusIsPeriodic) {
  const ConformalMesh m = build_mesh(builtin("flat_torus"), 5.0, 0.1);
  EXPECT_TRUE(m.periodic);
  EXPECT_EQ(m.euler_characteristic(), 0);
  EXPECT_EQ(m.boundary_components(), 0);
}

TEST(Mesh, ChartsMapPiecesToTheSurface) {
  const ConformalMesh m = build_mesh(builtin("scherk"), 5.0, 0.2);
  for (std::size_t t = 0; t < m.n_triangles(); t += 37)
    for (int k = 0; k < 3; ++k) {
      const auto [z, J] = m.chart_point(m.tri_piece[t], m.tri_coords[t][k]);
      EXPECT_LT(std::abs(z - m.z[m.triangles[t][k]]), 1e-9 * (1.0 + std::abs(z)));
      EXPECT_GT(J, 0.0);
    }
}

TEST(Mesh, Errors) {
  EXPECT_THROW(build_mesh(builtin("enneper"), 1.1, 0.1), DisjointnessViolation);
  EXPECT_THROW(build_mesh(builtin("cousin_pair"), 5.0, 0.1), Unsupported);
  EXPECT_THROW(build_mesh(builtin("catenoid"), 5.0, -1.0), ValidationError);
}
