#pragma once

// Lawson correspondence on scenes, so the result can be written back out as a file.

#include <string>

#include "framed/checks.hpp"
#include "framed/scene.hpp"

namespace framed {

/// target "bryant": minimal (g, eta) -> Bryant data developed from a base point.
/// target "minimal": Bryant (f, g) or (g, eta) -> minimal (g, eta) with the same sigma.
inline Scene correspond(const Scene& sc, const std::string& target) {
  const SurfaceSpec s = build_surface(sc);
  const SurfaceFields F = make_fields(s);
  Scene r = sc;
  if (target == "bryant") {
    if (sc.kind != "weierstrass") throw Unsupported("--to bryant needs a weierstrass scene, got " + sc.kind);
    if (is_constant_function(F.need_g())) throw DegenerateData("constant Gauss map: the correspondent is a horosphere");
    const auto pts = check_points(s, F, 1);
    if (pts.empty()) throw ValidationError("no regular base point for the developed lift");
    r.name = sc.name + "_bryant";
    r.kind = "bryant_sigma";
    r.exprs = {{"g", sc.exprs.at("g")}, {"eta", sc.exprs.at("eta")}, {"base", format_complex(pts.front())}};
    r.note = "Lawson correspondent of " + sc.name;
    return r;
  }
  if (target == "minimal") {
    if (sc.kind == "weierstrass") throw Unsupported("scene is already minimal");
    const SurfaceSpec m = lawson_bryant_to_min(s);
    r.name = m.name;
    r.kind = "weierstrass";
    if (sc.kind == "bryant_sigma") r.exprs = {{"g", sc.exprs.at("g")}, {"eta", sc.exprs.at("eta")}};
    else r.exprs = {{"g", sc.exprs.at("g")}, {"eta", to_string(F.need_eta())}};
    r.note = "Lawson correspondent of " + sc.name;
    build_surface(r);
    return r;
  }
  throw ValidationError("--to: expected bryant or minimal, got '" + target + "'");
}

}  // namespace framed
