// Morse index estimates for a few surfaces against the divisor bound.

#include <cstdio>

#include "framed/framed.hpp"

int main() {
  for (const char* name : {"catenoid", "enneper", "scherk"}) {
    const framed::SurfaceSpec s = framed::build_surface(framed::builtin_scene(name));
    framed::SpectralReport rep;
    try {
      rep = framed::estimate_index(s, {5.0, 10.0}, {0.2, 0.1, 0.07});
    } catch (const framed::Error& e) {
      std::printf("%s: %s\n", name, e.what());
      continue;
    }
    std::printf("%s\n%s", name, rep.trace().c_str());
    if (!rep.converged) {
      std::printf("  not converged\n");
      continue;
    }
    const auto v = framed::compare_bound(rep);
    std::printf("  index %ld, bound %s, %s\n", v.estimate, v.bound.c_str(), v.pass ? "ok" : "VIOLATED");
  }
}
