// framed: command-line front end for scenes, residual checks, immersions and index estimates.
//
// Exit status: 0 pass, 2 invalid input or unsupported request, 3 numerical failure
// (non-convergence, a failed check, a violated bound).

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "framed/framed.hpp"

using namespace framed;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct Globals {
  double tol = 1e-9;
  unsigned threads = 1;
  std::string format = "text";
  long order = 24;
};

/// `name k=v ...` for a built-in scene, or a path to a TOML/JSON scene file.
Scene resolve_scene(const std::vector<std::string>& args) {
  if (args.empty()) throw ValidationError("scene: missing");
  Parameters params;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const auto eq = args[i].find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("parameter '" + args[i] + "': expected key=value");
    try {
      params[args[i].substr(0, eq)] = std::stod(args[i].substr(eq + 1));
    } catch (const std::exception&) {
      throw ValidationError("parameter '" + args[i] + "': value is not a number");
    }
  }
  const std::string& name = args.front();
  if (std::ifstream(name).good()) {
    Scene sc = load_scene_file(name);
    for (const auto& [k, v] : params) sc.parameters[k] = v;
    build_surface(sc);
    return sc;
  }
  return builtin_scene(name, params);
}

Complex parse_point(const std::string& text) {
  try {
    // accept 0.3+0.2i as well as 0.3+0.2*i
    const Expr e = parse_expr(std::regex_replace(text, std::regex("([0-9.])i"), "$1*i"));
    if (!e.is_constant()) throw ValidationError("'" + text + "' is not a constant");
    return e.value();
  } catch (const ParseError& e) {
    throw ValidationError(std::string("--at: ") + e.what());
  }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return format_complex({v[0].get<double>(), v[1].get<double>()});
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(10);
    os << v.get<double>();
    return os.str();
  }
  return v.dump();
}

void print_csv_table(std::ostream& os, const json& rows) {
  if (rows.empty()) return;
  std::vector<std::string> cols;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) cols.push_back(it.key());
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::string c = cell(r.value(cols[i], json()));
      if (c.find(',') != std::string::npos) c = "\"" + c + "\"";
      os << (i ? "," : "") << c;
    }
    os << "\n";
  }
}

/// Text rendering of a report: scalars as `key: value`, arrays of objects as aligned tables.
void print_text(std::ostream& os, const json& j, const std::string& indent = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = *it;
    if (v.is_array() && !v.empty() && v[0].is_object()) {
      os << indent << it.key() << ":\n";
      std::vector<std::string> cols;
      for (auto c = v[0].begin(); c != v[0].end(); ++c) cols.push_back(c.key());
      std::vector<std::size_t> w(cols.size());
      for (std::size_t i = 0; i < cols.size(); ++i) {
        w[i] = cols[i].size();
        for (const auto& r : v) w[i] = std::max(w[i], cell(r.value(cols[i], json())).size());
      }
      os << indent << "  ";
      for (std::size_t i = 0; i < cols.size(); ++i) os << cols[i] << std::string(w[i] - cols[i].size() + 2, ' ');
      os << "\n";
      for (const auto& r : v) {
        os << indent << "  ";
        for (std::size_t i = 0; i < cols.size(); ++i) {
          const std::string c = cell(r.value(cols[i], json()));
          os << c << std::string(w[i] - c.size() + 2, ' ');
        }
        os << "\n";
      }
    } else if (v.is_object()) {
      os << indent << it.key() << ":\n";
      print_text(os, v, indent + "  ");
    } else if (v.is_array() && !(v.size() == 2 && v[0].is_number())) {
      os << indent << it.key() << ":";
      for (const auto& e : v) os << " " << cell(e);
      os << "\n";
    } else {
      os << indent << it.key() << ": " << cell(v) << "\n";
    }
  }
}

/// Emits the report in the requested format; `table` names the array used for CSV.
void emit(const Globals& g, const json& report, const std::string& table) {
  if (g.format == "json") std::cout << report.dump(2) << "\n";
  else if (g.format == "csv") print_csv_table(std::cout, report.contains(table) ? report[table] : json::array({report}));
  else print_text(std::cout, report);
}

// ---- commands ---------------------------------------------------------------------------

int cmd_info(const Globals& g, const Scene& sc) {
  const SurfaceSpec s = build_surface(sc);
  const SurfaceFields F = make_fields(s);
  json r;
  r["scene"] = sc.name;
  r["kind"] = data_kind(s);
  r["genus"] = s.genus();
  r["sidedness"] = s.sidedness == Sidedness::TwoSided ? "two-sided" : "one-sided";
  if (!sc.parameters.empty())
    for (const auto& [k, v] : sc.parameters) r["parameters"][k] = v;
  const MonodromyReport mono = monodromy_report(s);
  r["framed"] = mono.framed;
  if (!F.has_metric()) {
    r["note"] = "Gauss map only: no metric, ends or divisor";
    emit(g, r, "ends");
    return 0;
  }
  try {
    json ends = json::array();
    for (const auto& e : framed::ends(s, F)) ends.push_back({{"point", format_point(e.point)}, {"order", e.order}});
    r["ends"] = ends;
    r["branch_divisor"] = branch_divisor(s, F).to_string();
    const Divisor D = fundamental_divisor(s, F);
    r["divisor"] = D.to_string();
    r["divisor_degree"] = D.degree();
    const IndexBound two = index_bound(s.genus(), D, Sidedness::TwoSided);
    const IndexBound one = index_bound(s.genus(), D, Sidedness::OneSided);
    r["h1"] = two.h1;
    r["bound_two_sided"] = two.fraction();
    r["bound_two_sided_ceiling"] = two.ceiling();
    r["bound_one_sided"] = one.fraction();
    r["bound_one_sided_ceiling"] = one.ceiling();
  } catch (const Error& e) {
    if (mono.framed) throw;
    r["note"] = std::string("not framed; no divisor on the surface (") + e.what() + ")";
  }
  emit(g, r, "ends");
  return 0;
}

LaurentSeries sigma_at_end(const Expr& sigma, const SpherePoint& p, long N) {
  if (!p.is_infinite()) return laurent(sigma, p.z, N);
  const Expr w = Expr::var();
  return laurent(substitute(sigma, Expr::constant(1.0) / w) * pow(w, -4), 0.0, N);
}

int cmd_schwarzian_eval(const Globals& g, const Scene& sc, const std::string& at) {
  const SurfaceSpec s = build_surface(sc);
  const SurfaceFields F = make_fields(s);
  if (!F.sigma) throw Unsupported("scene has no Hopf differential");
  const Complex z = parse_point(at);
  json r;
  r["scene"] = sc.name;
  r["z"] = format_complex(z);
  r["sigma"] = complex_json(hopf_value(F, z));
  if (F.kind == SurfaceFields::Kind::BryantExplicit) r["S(f,g)"] = complex_json(schwarzian_value(*F.f, *F.g, z));
  if (F.g) r["S(g,z)"] = complex_json(schwarzian_value(*F.g, Expr::var(), z));
  r["e2l"] = metric_factor(F, z);
  r["K"] = gauss_curvature(F, z);
  if (F.g && !is_constant_function(*F.g)) {
    json ends = json::array();
    for (const auto& p : s.punctures) {
      const long og = function_order(*F.g, p);
      const Expr G = og < 0 ? Expr::constant(1.0) / *F.g : *F.g;
      long n = 0;
      std::string cls;
      try {
        n = ramification(G, p);
        cls = to_string(classify_end(sigma_at_end(F.phase * *F.sigma, p, g.order), n));
      } catch (const Error& e) {
        cls = std::string("unclassified: ") + e.what();
      }
      ends.push_back({{"point", format_point(p)}, {"g_multiplicity", n}, {"class", cls}});
    }
    r["ends"] = ends;
  }
  emit(g, r, "ends");
  return 0;
}

int cmd_schwarzian_solve(const Globals& g, const std::string& sigma_text, long n) {
  Expr sigma;
  try {
    sigma = parse_expr(sigma_text);
  } catch (const ParseError& e) {
    throw ValidationError(std::string("--sigma: ") + e.what());
  }
  if (n < 1) throw ValidationError("--n: expected a positive integer");
  const SchwarzianSolution sol = solve_schwarzian_series(sigma, n, g.order);
  json rows = json::array();
  for (std::size_t j = 0; j < std::max(sol.a.size(), sol.b.size()); ++j) {
    const long e = sol.f_series.leading_order() + static_cast<long>(j);
    json row;
    row["j"] = j;
    row["a_re"] = j < sol.a.size() ? sol.a[j].real() : 0.0;
    row["a_im"] = j < sol.a.size() ? sol.a[j].imag() : 0.0;
    row["b_re"] = j < sol.b.size() ? sol.b[j].real() : 0.0;
    row["b_im"] = j < sol.b.size() ? sol.b[j].imag() : 0.0;
    row["f_exponent"] = e;
    const Complex f = e < sol.f_series.end() ? sol.f_series.coefficient(e) : Complex{};
    row["f_re"] = f.real();
    row["f_im"] = f.imag();
    rows.push_back(row);
  }
  json r;
  r["sigma"] = sigma_text;
  r["n"] = n;
  r["k"] = sol.k;
  r["order"] = sol.truncation;
  r["gauge"] = complex_json(sol.gauge);
  r["backsub_error"] = sol.backsub_error;
  r["coefficients"] = rows;
  if (g.format == "text") {
    print_csv_table(std::cout, rows);
    std::cerr << "backsubstitution error " << sol.backsub_error << "\n";
  } else {
    emit(g, r, "coefficients");
  }
  return sol.backsub_error < 1e-8 ? 0 : kExitNumerical;
}

int cmd_immerse(const Globals& g, const Scene& sc, const std::string& model, int grid, const std::string& out) {
  ImmersionModel m;
  if (model == "euclidean") m = ImmersionModel::Euclidean;
  else if (model == "ball") m = ImmersionModel::Ball;
  else throw ValidationError("--model: expected euclidean or ball");
  const ImmersedMesh mesh = immerse_grid(build_surface(sc), m, grid);
  write_immersion_obj(mesh, out, sc.name);
  double rmax = 0.0;
  for (const auto& x : mesh.x) rmax = std::max(rmax, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  json r{{"scene", sc.name}, {"model", model}, {"out", out}, {"vertices", mesh.x.size()},
         {"triangles", mesh.triangles.size()}, {"max_radius", rmax}};
  emit(g, r, "");
  return m == ImmersionModel::Ball && rmax >= 1.0 ? kExitNumerical : 0;
}

int cmd_correspond(const Globals& g, const Scene& sc, const std::string& to, const std::string& out) {
  const Scene r = correspond(sc, to);
  if (out.empty()) std::cout << to_toml(r);
  else {
    save_scene_file(r, out);
    emit(g, json{{"scene", sc.name}, {"correspondent", r.name}, {"kind", r.kind}, {"out", out}}, "");
  }
  return 0;
}

int cmd_check(const Globals& g, const Scene& sc) {
  CheckOptions opt;
  opt.tol = g.tol;
  const CheckReport rep = run_checks(build_surface(sc), opt);
  json rows = json::array();
  for (const auto& row : rep.rows)
    rows.push_back({{"suite", row.suite},
                    {"detail", row.detail},
                    {"value", row.value},
                    {"threshold", row.threshold},
                    {"result", row.skipped ? "skip" : row.pass ? "pass" : "FAIL"}});
  json r{{"scene", sc.name}, {"all_pass", rep.all_pass()}, {"rows", rows}};
  emit(g, r, "rows");
  return rep.all_pass() ? 0 : kExitNumerical;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return out;
}

int cmd_index(const Globals& g, const Scene& sc, const std::string& R_text, const std::string& h_text,
              const std::string& out, const std::string& mesh_out) {
  const SurfaceSpec s = build_surface(sc);
  const std::vector<double> Rs = R_text.empty() ? sc.analysis.R : parse_list(R_text, "--R");
  const std::vector<double> hs = h_text.empty() ? sc.analysis.h : parse_list(h_text, "--h");
  IndexOptions opt;
  opt.assembly.threads = g.threads;
  const SpectralReport rep = estimate_index(s, Rs, hs, opt);
  const long ceil = rep.bound.ceiling();
  json rows = json::array();
  for (const auto& run : rep.runs)
    rows.push_back({{"R", run.R},
                    {"h", run.h},
                    {"n_vertices", run.n_vertices},
                    {"inertia_minus", run.minus},
                    {"inertia_zero", run.zero},
                    {"bound", rep.bound.fraction()},
                    {"bound_ceiling", ceil},
                    {"verdict", run.minus >= ceil ? "pass" : "below"}});
  json r;
  r["scene"] = sc.name;
  r["h1"] = rep.bound.h1;
  r["bound"] = rep.bound.fraction();
  r["bound_ceiling"] = ceil;
  r["converged"] = rep.converged;
  if (rep.converged) {
    const BoundVerdict v = compare_bound(rep);
    r["estimate"] = v.estimate;
    r["margin"] = v.margin;
    r["verdict"] = v.pass ? "pass" : "FAIL";
  }
  if (rep.excised_points) {
    r["excised_branch_points"] = rep.excised_points;
    r["excision_radius"] = rep.excision_radius;
  }
  if (!rep.monotonicity_log.empty()) r["monotonicity"] = rep.monotonicity_log;
  r["runs"] = rows;
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw ValidationError("cannot write '" + out + "'");
    print_csv_table(f, rows);
  }
  if (!mesh_out.empty()) {
    const ConformalMesh m = build_mesh(s, Rs.back(), *std::min_element(hs.begin(), hs.end()));
    write_mesh_obj(m, mesh_out);
  }
  emit(g, r, "runs");
  if (!rep.converged) {
    std::cerr << "index counts did not stabilize\n";
    return kExitNumerical;
  }
  return r["verdict"] == "pass" ? 0 : kExitNumerical;
}

int cmd_list(const Globals& g) {
  json rows = json::array();
  for (const auto& n : builtin_names()) {
    const Scene sc = builtin_scene(n);
    rows.push_back({{"name", n}, {"kind", sc.kind}, {"note", sc.note}});
  }
  emit(g, json{{"scenes", rows}}, "scenes");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"framed: framed minimal and Bryant surfaces, Lawson correspondence, index bounds"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "relative tolerance for algebraic identity checks")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for assembly")->capture_default_str();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}))->capture_default_str();
  app.add_option("--order", g.order, "series truncation order")->capture_default_str();

  std::vector<std::string> scene_args;
  std::function<int()> run;

  app.add_subcommand("list", "list the built-in scenes")->callback([&] { run = [&] { return cmd_list(g); }; });

  auto* surface = app.add_subcommand("surface", "scene data");
  surface->require_subcommand(1);
  auto* info = surface->add_subcommand("info", "ends, orders, divisor, h1, index bounds, framedness");
  info->add_option("scene", scene_args, "built-in name with key=value parameters, or a scene file")->required();
  info->callback([&] { run = [&] { return cmd_info(g, resolve_scene(scene_args)); }; });

  auto* schw = app.add_subcommand("schwarzian", "Schwarzian evaluation and series solutions");
  schw->require_subcommand(1);
  std::string at = "0.31+0.47i";
  auto* ev = schw->add_subcommand("eval", "sigma, Schwarzians, metric and end classes of a scene");
  ev->add_option("scene", scene_args)->required();
  ev->add_option("--at", at, "chart point")->capture_default_str();
  ev->callback([&] { run = [&] { return cmd_schwarzian_eval(g, resolve_scene(scene_args), at); }; });
  std::string sigma_text;
  long n = 1;
  auto* solve = schw->add_subcommand("solve", "series solution of S{f, z^n} = -sigma at z = 0");
  solve->add_option("--sigma", sigma_text, "sigma as an expression in z")->required();
  solve->add_option("--n", n, "multiplicity of g at the center")->capture_default_str();
  solve->callback([&] { run = [&] { return cmd_schwarzian_solve(g, sigma_text, n); }; });

  std::string model = "euclidean", out, to, R_text, h_text, mesh_out;
  int grid = 40;
  auto* imm = app.add_subcommand("immerse", "triangulated image of a chart grid as OBJ");
  imm->add_option("scene", scene_args)->required();
  imm->add_option("--model", model)->check(CLI::IsMember({"euclidean", "ball"}))->capture_default_str();
  imm->add_option("--grid", grid, "cells per side")->capture_default_str();
  imm->add_option("--out", out, "OBJ path")->required();
  imm->callback([&] { run = [&] { return cmd_immerse(g, resolve_scene(scene_args), model, grid, out); }; });

  auto* cor = app.add_subcommand("correspond", "Lawson correspondent as a scene file");
  cor->add_option("scene", scene_args)->required();
  cor->add_option("--to", to)->check(CLI::IsMember({"bryant", "minimal"}))->required();
  cor->add_option("--out", out, "scene path (.toml or .json); stdout if omitted");
  cor->callback([&] { run = [&] { return cmd_correspond(g, resolve_scene(scene_args), to, out); }; });

  auto* chk = app.add_subcommand("check", "null, Gauss, conformality and Ros residual suites");
  chk->add_option("scene", scene_args)->required();
  chk->callback([&] { run = [&] { return cmd_check(g, resolve_scene(scene_args)); }; });

  auto* idx = app.add_subcommand("index", "negative inertia of the discretized Jacobi form");
  idx->set_help_flag("--help", "print this help message and exit");
  idx->add_option("scene", scene_args)->required();
  idx->add_option("--R", R_text, "comma-separated truncation parameters");
  idx->add_option("--h", h_text, "comma-separated mesh sizes");
  idx->add_option("--out", out, "CSV report path");
  idx->add_option("--mesh-out", mesh_out, "OBJ dump of the finest mesh at the largest R");
  idx->callback([&] { run = [&] { return cmd_index(g, resolve_scene(scene_args), R_text, h_text, out, mesh_out); }; });

  // global flags are accepted after the subcommand too
  std::function<void(CLI::App*)> fall = [&](CLI::App* a) {
    a->fallthrough();
    for (auto* sub : a->get_subcommands({})) fall(sub);
  };
  fall(&app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }
  try {
    return run();
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const Unsupported& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const DegenerateData& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitNumerical;
  }
}
