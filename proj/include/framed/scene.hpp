#pragma once

// Scene files (TOML subset or JSON) and the built-in example catalog.

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "framed/expr_parse.hpp"
#include "framed/surface.hpp"
#include "framed/toml_lite.hpp"

namespace framed {

struct AnalysisDefaults {
  std::vector<double> R{5.0, 10.0, 20.0};
  std::vector<double> h{0.2, 0.1, 0.05};
  double tol = 1e-9;
  long order = 24;
};

struct Scene {
  std::string name;
  std::string note;
  Parameters parameters;
  std::string topology = "sphere";
  std::vector<std::string> punctures;
  std::string period1 = "1", period2 = "i";
  std::string kind = "weierstrass";
  std::map<std::string, std::string> exprs;  // g, eta, f, h, sigma, base
  double theta = 0.0;                        // associated-family angle
  Sidedness sidedness = Sidedness::TwoSided;
  AnalysisDefaults analysis;
};

namespace scene_detail {

inline const std::map<std::string, std::vector<std::string>>& required_fields() {
  static const std::map<std::string, std::vector<std::string>> r{
      {"weierstrass", {"g", "eta"}},  {"bryant", {"f", "g"}},         {"bryant_sigma", {"g", "eta"}},
      {"intrinsic", {"h", "sigma"}}, {"gauss_map", {"g"}}};
  return r;
}

inline Complex constant_value(const std::string& text, const Parameters& p, const std::string& field) {
  Expr e;
  try {
    e = parse_expr(text, p);
  } catch (const ParseError& err) {
    throw ValidationError(field + ": " + err.what());
  }
  if (!e.is_constant()) throw ValidationError(field + ": '" + text + "' is not a constant");
  return e.value();
}

inline SpherePoint point_value(const std::string& text, const Parameters& p, const std::string& field) {
  if (text == "inf" || text == "infinity") return SpherePoint::infinity();
  return SpherePoint::finite(constant_value(text, p, field));
}

}  // namespace scene_detail

/// Parse one expression field; multivalued nodes default to the principal branch.
inline Expr scene_expr(const Scene& sc, const std::string& key) {
  auto it = sc.exprs.find(key);
  if (it == sc.exprs.end()) throw ValidationError("data." + key + ": missing");
  try {
    return with_branch(parse_expr(it->second, sc.parameters), 0);
  } catch (const ParseError& err) {
    throw ValidationError("data." + key + ": " + err.what());
  }
}

/// Build and validate the surface.
inline SurfaceSpec build_surface(const Scene& sc) {
  SurfaceSpec s;
  s.name = sc.name;
  s.sidedness = sc.sidedness;
  s.phase = std::exp(Complex(0.0, sc.theta));
  if (sc.topology == "torus") {
    s.torus = true;
    s.period1 = scene_detail::constant_value(sc.period1, sc.parameters, "topology.periods[0]");
    s.period2 = scene_detail::constant_value(sc.period2, sc.parameters, "topology.periods[1]");
    if (std::abs((s.period2 / s.period1).imag()) < 1e-12) throw ValidationError("topology.periods: not a lattice");
    if (!sc.punctures.empty()) throw ValidationError("topology.punctures: tori take no punctures");
  } else if (sc.topology != "sphere") {
    throw ValidationError("topology.kind: expected sphere or torus, got '" + sc.topology + "'");
  }
  for (std::size_t i = 0; i < sc.punctures.size(); ++i) {
    const SpherePoint p =
        scene_detail::point_value(sc.punctures[i], sc.parameters, "topology.punctures[" + std::to_string(i) + "]");
    for (const auto& q : s.punctures)
      if (near(p, q, 1e-12)) throw ValidationError("topology.punctures: '" + sc.punctures[i] + "' repeated");
    s.punctures.push_back(p);
  }
  const auto req = scene_detail::required_fields().find(sc.kind);
  if (req == scene_detail::required_fields().end()) throw ValidationError("data.kind: unknown kind '" + sc.kind + "'");
  for (const auto& k : req->second)
    if (!sc.exprs.count(k)) throw ValidationError("data." + k + ": required for kind " + sc.kind);
  if (sc.kind == "weierstrass") s.data = WeierstrassData{scene_expr(sc, "g"), scene_expr(sc, "eta")};
  else if (sc.kind == "bryant") s.data = BryantData{scene_expr(sc, "f"), scene_expr(sc, "g")};
  else if (sc.kind == "bryant_sigma") {
    Complex base{};
    if (auto it = sc.exprs.find("base"); it != sc.exprs.end())
      base = scene_detail::constant_value(it->second, sc.parameters, "data.base");
    s.data = BryantDevelopedData{scene_expr(sc, "g"), scene_expr(sc, "eta"), base};
  } else if (sc.kind == "intrinsic") s.data = IntrinsicData{scene_expr(sc, "h"), scene_expr(sc, "sigma")};
  else s.data = GaussMapData{scene_expr(sc, "g")};
  return s;
}

// ---- serialization ------------------------------------------------------------------

inline nlohmann::json to_json(const Scene& sc) {
  nlohmann::json j;
  j["name"] = sc.name;
  if (!sc.note.empty()) j["note"] = sc.note;
  j["sidedness"] = sc.sidedness == Sidedness::TwoSided ? "two-sided" : "one-sided";
  j["topology"]["kind"] = sc.topology;
  if (sc.topology == "torus") j["topology"]["periods"] = {sc.period1, sc.period2};
  else j["topology"]["punctures"] = sc.punctures;
  j["data"]["kind"] = sc.kind;
  for (const auto& [k, v] : sc.exprs) j["data"][k] = v;
  if (sc.theta != 0.0) j["data"]["phase"] = sc.theta;
  if (!sc.parameters.empty())
    for (const auto& [k, v] : sc.parameters) j["parameters"][k] = v;
  j["analysis"]["R"] = sc.analysis.R;
  j["analysis"]["h"] = sc.analysis.h;
  j["analysis"]["tol"] = sc.analysis.tol;
  j["analysis"]["order"] = sc.analysis.order;
  return j;
}

inline Scene scene_from_json(const nlohmann::json& j) {
  Scene sc;
  auto str = [](const nlohmann::json& v, const std::string& field) {
    if (!v.is_string()) throw ValidationError(field + ": expected a string");
    return v.get<std::string>();
  };
  auto num = [](const nlohmann::json& v, const std::string& field) {
    if (!v.is_number()) throw ValidationError(field + ": expected a number");
    return v.get<double>();
  };
  if (!j.is_object()) throw ValidationError("scene: expected a table");
  if (!j.contains("name")) throw ValidationError("name: missing");
  sc.name = str(j["name"], "name");
  if (j.contains("note")) sc.note = str(j["note"], "note");
  if (j.contains("sidedness")) {
    const std::string s = str(j["sidedness"], "sidedness");
    if (s == "two-sided") sc.sidedness = Sidedness::TwoSided;
    else if (s == "one-sided") sc.sidedness = Sidedness::OneSided;
    else throw ValidationError("sidedness: expected two-sided or one-sided");
  }
  if (j.contains("parameters")) {
    for (auto it = j["parameters"].begin(); it != j["parameters"].end(); ++it)
      sc.parameters[it.key()] = num(*it, "parameters." + it.key());
  }
  if (!j.contains("topology")) throw ValidationError("topology: missing");
  const auto& t = j["topology"];
  sc.topology = t.contains("kind") ? str(t["kind"], "topology.kind") : "sphere";
  if (t.contains("punctures")) {
    if (!t["punctures"].is_array()) throw ValidationError("topology.punctures: expected an array");
    for (std::size_t i = 0; i < t["punctures"].size(); ++i) {
      const auto& v = t["punctures"][i];
      const std::string field = "topology.punctures[" + std::to_string(i) + "]";
      sc.punctures.push_back(v.is_number() ? std::to_string(v.get<double>()) : str(v, field));
    }
  }
  if (t.contains("periods")) {
    if (!t["periods"].is_array() || t["periods"].size() != 2) throw ValidationError("topology.periods: expected two entries");
    sc.period1 = str(t["periods"][0], "topology.periods[0]");
    sc.period2 = str(t["periods"][1], "topology.periods[1]");
  }
  if (!j.contains("data")) throw ValidationError("data: missing");
  const auto& d = j["data"];
  if (!d.contains("kind")) throw ValidationError("data.kind: missing");
  sc.kind = str(d["kind"], "data.kind");
  for (auto it = d.begin(); it != d.end(); ++it) {
    if (it.key() == "kind") continue;
    if (it.key() == "phase") {
      sc.theta = num(*it, "data.phase");
      continue;
    }
    sc.exprs[it.key()] = it->is_number() ? std::to_string(it->get<double>()) : str(*it, "data." + it.key());
  }
  if (j.contains("analysis")) {
    const auto& a = j["analysis"];
    auto list = [&](const char* key, std::vector<double>& out) {
      if (!a.contains(key)) return;
      if (!a[key].is_array()) throw ValidationError(std::string("analysis.") + key + ": expected an array");
      out.clear();
      for (const auto& v : a[key]) out.push_back(num(v, std::string("analysis.") + key));
    };
    list("R", sc.analysis.R);
    list("h", sc.analysis.h);
    if (a.contains("tol")) sc.analysis.tol = num(a["tol"], "analysis.tol");
    if (a.contains("order")) sc.analysis.order = static_cast<long>(num(a["order"], "analysis.order"));
  }
  build_surface(sc);  // validate eagerly
  return sc;
}

inline std::string to_toml(const Scene& sc) { return toml::dump(to_json(sc)); }

inline Scene parse_scene(const std::string& text, bool json) {
  try {
    return scene_from_json(json ? nlohmann::json::parse(text) : toml::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scene: ") + e.what());
  } catch (const ParseError& e) {
    throw ValidationError(std::string("scene: ") + e.what());
  }
}

inline Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scene file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return parse_scene(ss.str(), json);
}

inline void save_scene_file(const Scene& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  out << (json ? to_json(sc).dump(2) + "\n" : to_toml(sc));
}

// ---- built-in catalog ---------------------------------------------------------------

inline std::vector<std::string> builtin_names() {
  return {"plane", "catenoid", "helicoid", "enneper", "scherk", "flat_torus", "horosphere", "cousin", "cousin_pair", "cousin_dihedral"};
}

/// Built-in scene; `params` overrides defaults (cousin: mu; cousin_pair: mu; cousin_dihedral: mu, m).
inline Scene builtin_scene(const std::string& name, const Parameters& params = {}) {
  Scene sc;
  sc.name = name;
  auto param = [&](const std::string& k, double def) {
    auto it = params.find(k);
    sc.parameters[k] = it == params.end() ? def : it->second;
    return sc.parameters[k];
  };
  if (name == "plane") {
    sc.note = "flat plane, g = 0, eta = dz";
    sc.punctures = {"inf"};
    sc.exprs = {{"g", "0"}, {"eta", "1"}};
  } else if (name == "catenoid" || name == "helicoid") {
    sc.note = name == "catenoid" ? "catenoid, g = z, eta = dz/z^2" : "helicoid: catenoid data rotated by pi/2";
    sc.punctures = {"0", "inf"};
    sc.exprs = {{"g", "z"}, {"eta", "z^-2"}};
    if (name == "helicoid") sc.theta = kPi / 2;
  } else if (name == "enneper") {
    sc.note = "Enneper surface, g = z, eta = dz";
    sc.punctures = {"inf"};
    sc.exprs = {{"g", "z"}, {"eta", "1"}};
  } else if (name == "scherk") {
    sc.note = "Scherk doubly periodic surface, quotient by its translations";
    sc.punctures = {"1", "-1", "i", "-i"};
    sc.exprs = {{"g", "z"}, {"eta", "(1 - z^4)^-1"}};
  } else if (name == "flat_torus") {
    sc.note = "flat square torus";
    sc.topology = "torus";
    sc.kind = "intrinsic";
    sc.exprs = {{"h", "1"}, {"sigma", "0"}};
  } else if (name == "horosphere") {
    sc.note = "horosphere, flat and totally umbilic";
    sc.kind = "intrinsic";
    sc.punctures = {"inf"};
    sc.exprs = {{"h", "1"}, {"sigma", "0"}};
  } else if (name == "cousin") {
    param("mu", 0.5);
    sc.note = "catenoid cousin, f = z, g = z^(-2 mu - 1)";
    sc.kind = "bryant";
    sc.punctures = {"0", "inf"};
    sc.exprs = {{"f", "z"}, {"g", "z^{-2*mu - 1}"}};
  } else if (name == "cousin_pair") {
    param("mu", 2.0);
    sc.note = "g = ((z-1)/(z+1))^mu (z-mu)/(z+mu)";
    sc.kind = "gauss_map";
    sc.punctures = {"1", "-1"};
    sc.exprs = {{"g", "((z - 1)/(z + 1))^{mu} * (z - mu)/(z + mu)"}};
  } else if (name == "cousin_dihedral") {
    const double mu = param("mu", 2.0);
    const double m = param("m", 3.0);
    sc.parameters["a"] = (mu + m) / (mu - m);
    sc.note = "g = z^mu (z^m + a)/(a z^m + 1), a = (mu + m)/(mu - m)";
    sc.kind = "gauss_map";
    sc.punctures = {"0", "inf"};
    const int mi = static_cast<int>(std::lround(m));
    for (int k = 0; k < mi; ++k) {
      // roots of z^m = -1
      const double ang = kPi * (2.0 * k + 1.0) / m;
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.17g + %.17g*i", std::cos(ang), std::sin(ang));
      sc.punctures.push_back(buf);
    }
    sc.exprs = {{"g", "z^{mu} * (z^{m} + a)/(a*z^{m} + 1)"}};
  } else {
    throw ValidationError("unknown built-in scene '" + name + "'");
  }
  for (const auto& [k, v] : params)
    if (!sc.parameters.count(k)) throw ValidationError("parameters." + k + ": not used by '" + name + "'");
  build_surface(sc);
  return sc;
}

}  // namespace framed
