// Samples a minimal surface and its Bryant cousin side by side: metric and Hopf
// differential agree, the cousin's hyperbolic Gauss map is developed by the null lift.

#include <cstdio>

#include "framed/framed.hpp"

using framed::Complex;

int main() {
  for (const char* name : {"catenoid", "enneper"}) {
    const framed::SurfaceSpec s = framed::build_surface(framed::builtin_scene(name));
    const Complex base{0.31, 0.47};
    const framed::SurfaceSpec b = framed::lawson_min_to_bryant(s, base);
    const framed::SurfaceFields F = framed::make_fields(s), B = framed::make_fields(b);
    const framed::NullLift lift(B, base);
    std::printf("%s\n%8s %8s %14s %14s %12s\n", name, "re z", "im z", "e2l min", "e2l bryant", "|dsigma|");
    for (Complex z : {Complex{0.55, -0.73}, Complex{-0.62, 0.29}, Complex{1.37, 0.88}}) {
      const auto a = framed::intrinsic_sample(F, z);
      const auto c = framed::developed_intrinsic_sample(B, lift.at(z), z);
      std::printf("%8.3f %8.3f %14.8e %14.8e %12.3e\n", z.real(), z.imag(), a.e2l, c.e2l, std::abs(a.sigma - c.sigma));
    }
  }
}
