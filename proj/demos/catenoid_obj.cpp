// Writes the catenoid and its Bryant cousin (Poincare ball) as OBJ meshes.

#include <cstdio>
#include <string>

#include "framed/framed.hpp"

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : ".";
  const framed::Scene sc = framed::builtin_scene("catenoid");
  const framed::SurfaceSpec s = framed::build_surface(sc);

  auto flat = framed::immerse_grid(s, framed::ImmersionModel::Euclidean, 48);
  framed::write_immersion_obj(flat, dir + "/catenoid.obj", "catenoid");
  std::printf("catenoid: %zu vertices, %zu triangles\n", flat.x.size(), flat.triangles.size());

  const framed::Scene cousin = framed::correspond(sc, "bryant");
  auto ball = framed::immerse_grid(framed::build_surface(cousin), framed::ImmersionModel::Ball, 48);
  framed::write_immersion_obj(ball, dir + "/catenoid_cousin.obj", cousin.name);
  double rmax = 0;
  for (const auto& p : ball.x) rmax = std::max(rmax, std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
  std::printf("%s: %zu vertices, max ball radius %.6f\n", cousin.name.c_str(), ball.x.size(), rmax);
}
