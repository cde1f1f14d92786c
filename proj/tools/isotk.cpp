// isotk: convex-geometry / optimal-transport verification runs with
// machine-readable reports. Every subcommand accepts --config (JSON file,
// flags take precedence), --output, --format and --seed; identical
// config+seed produce byte-identical reports.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "isotk/json_io.hpp"
#include "isotk/measure.hpp"
#include "isotk/transport.hpp"
#include "isotk/verify.hpp"

using namespace isotk;

namespace {

struct CommonOpts {
  std::string config_path, output_path, format = "json";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_path, "JSON config file; flags override its keys");
  cmd->add_option("--output", c.output_path, "write the report here instead of stdout");
  cmd->add_option("--format", c.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", c.seed, "seed recorded in the report and used by randomized runs");
}

// Flags take precedence over config keys; config supplies the rest.
json load_config(const CommonOpts& c, const std::set<std::string>& allowed) {
  if (c.config_path.empty()) return json::object();
  json cfg = load_json_file(c.config_path);
  std::set<std::string> all = allowed;
  all.insert({"command", "output", "format", "seed"});
  require_keys(cfg, all, "config");
  return cfg;
}

template <typename T>
T pick(const CLI::App* cmd, const std::string& flag, const json& cfg, const std::string& key,
       T current) {
  if (cmd->count(flag) > 0) return current;  // explicit flag wins
  if (cfg.contains(key)) return cfg.at(key).get<T>();
  return current;  // built-in default
}

void flatten(const json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& v : j) flatten(v, prefix + "[" + std::to_string(i++) + "]", out);
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

void emit(const json& report, const CommonOpts& c) {
  std::string text;
  if (c.format == "csv") {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(report, "", rows);
    text = "key,value\n";
    for (const auto& [k, v] : rows) text += k + "," + v + "\n";
  } else {
    text = report.dump(2) + "\n";
  }
  if (c.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.output_path);
    if (!out) throw InvalidInput("cannot write " + c.output_path);
    out << text;
  }
}

json resolved_config_json(const CommonOpts& c, json params) {
  params["seed"] = c.seed;
  params["format"] = c.format;
  return params;
}

SolverChoice solver_from(const std::string& kind, double epsilon) {
  SolverChoice ch;
  ch.kind = kind;
  ch.epsilon = epsilon;
  return ch;
}

ScalarField make_field(const std::string& spec, const ConvexFunction& v, int n, const Vec& shift) {
  if (spec == "extremal") return extremal_profile(v, n, shift);
  return field_from_json(load_json_file(spec));
}

int run_perimeter(const CLI::App* cmd, const CommonOpts& c, std::string e_path, std::string k_path,
                  bool inward, bool minkowski_check) {
  const json cfg = load_config(c, {"e", "k", "inward", "minkowski_check"});
  e_path = pick<std::string>(cmd, "--e", cfg, "e", e_path);
  k_path = pick<std::string>(cmd, "--k", cfg, "k", k_path);
  inward = pick<bool>(cmd, "--inward", cfg, "inward", inward);
  minkowski_check = pick<bool>(cmd, "--minkowski-check", cfg, "minkowski_check", minkowski_check);
  if (e_path.empty() || k_path.empty()) throw InvalidInput("perimeter: --e and --k are required");
  const ConvexBody e = body_from_json(load_json_file(e_path));
  const ConvexBody k = body_from_json(load_json_file(k_path));
  DeficitReport rep = deficit_r(e, k, inward ? NormalSign::Inward : NormalSign::Outward);
  json out;
  out["report"] = deficit_report_to_json(rep);
  bool ok = rep.ok;
  if (minkowski_check) {
    const double mc = minkowski_content(e, k);
    out["minkowski_content"] = mc;
    out["minkowski_rel_gap"] = std::fabs(mc - rep.lhs) / std::max(rep.lhs, 1e-300);
    const bool mok = std::fabs(mc - rep.lhs) <= 0.02 * rep.lhs;
    out["minkowski_ok"] = mok;
    ok = ok && mok;
  }
  out["config"] = resolved_config_json(
      c, {{"command", "perimeter"}, {"e", e_path}, {"k", k_path}, {"inward", inward}});
  emit(out, c);
  return ok ? 0 : 3;
}

int run_thm1(const CLI::App* cmd, const CommonOpts& c, std::string v_path, std::string f_spec,
             int n, double rel_tol, std::vector<double> shift) {
  const json cfg = load_config(c, {"v", "f", "n", "rel_tol", "shift"});
  v_path = pick<std::string>(cmd, "--v", cfg, "v", v_path);
  f_spec = pick<std::string>(cmd, "--f", cfg, "f", f_spec);
  n = pick<int>(cmd, "--n", cfg, "n", n);
  rel_tol = pick<double>(cmd, "--rel-tol", cfg, "rel_tol", rel_tol);
  if (cmd->count("--shift") == 0 && cfg.contains("shift"))
    shift = cfg.at("shift").get<std::vector<double>>();
  if (v_path.empty()) throw InvalidInput("thm1: --v is required");
  const ConvexFunction v = function_from_json(load_json_file(v_path));
  if (shift.empty()) shift.assign(n, 0.0);
  QuadratureSpec quad;
  quad.rel_tol = rel_tol;
  const ScalarField f = make_field(f_spec, v, n, shift);
  const DeficitReport rep = thm1_report(v, f, n, quad, f_spec == "extremal");
  json out;
  out["report"] = deficit_report_to_json(rep);
  out["config"] = resolved_config_json(c, {{"command", "thm1"},
                                           {"v", v_path},
                                           {"f", f_spec},
                                           {"n", n},
                                           {"rel_tol", rel_tol},
                                           {"shift", shift}});
  emit(out, c);
  return rep.ok ? 0 : 3;
}

int run_thm2(const CLI::App* cmd, const CommonOpts& c, std::string e_path, std::string k_path,
             int resolution, std::string solver, double epsilon, std::string constant) {
  const json cfg = load_config(c, {"e", "k", "resolution", "solver", "epsilon", "interval_constant"});
  e_path = pick<std::string>(cmd, "--e", cfg, "e", e_path);
  k_path = pick<std::string>(cmd, "--k", cfg, "k", k_path);
  resolution = pick<int>(cmd, "--resolution", cfg, "resolution", resolution);
  solver = pick<std::string>(cmd, "--solver", cfg, "solver", solver);
  epsilon = pick<double>(cmd, "--epsilon", cfg, "epsilon", epsilon);
  constant = pick<std::string>(cmd, "--interval-constant", cfg, "interval_constant", constant);
  if (e_path.empty() || k_path.empty()) throw InvalidInput("thm2: --e and --k are required");
  const ConvexBody e = body_from_json(load_json_file(e_path));
  const ConvexBody k = body_from_json(load_json_file(k_path));
  const Thm2Report rep =
      thm2_report(e, k, resolution, solver_from(solver, epsilon),
                  constant == "paper" ? IntervalConstant::Paper : IntervalConstant::Oracle);
  json out;
  out["report"] = thm2_to_json(rep);
  out["config"] = resolved_config_json(c, {{"command", "thm2"},
                                           {"e", e_path},
                                           {"k", k_path},
                                           {"resolution", resolution},
                                           {"solver", solver},
                                           {"epsilon", epsilon},
                                           {"interval_constant", constant}});
  emit(out, c);
  return rep.ok ? 0 : 3;
}

json example2d_run(double alpha, int resolution, const std::string& solver, double epsilon,
                   double c_asym, bool& ok) {
  const Example2dReport rep = example_2d(alpha, resolution, solver_from(solver, epsilon), c_asym);
  ok = rep.w1_bound_ok;
  return example2d_to_json(rep);
}

int run_example2d(const CLI::App* cmd, const CommonOpts& c, double alpha, int resolution,
                  std::string solver, double epsilon, double c_asym) {
  const json cfg = load_config(c, {"alpha", "resolution", "solver", "epsilon", "c_asym"});
  alpha = pick<double>(cmd, "--alpha", cfg, "alpha", alpha);
  resolution = pick<int>(cmd, "--resolution", cfg, "resolution", resolution);
  solver = pick<std::string>(cmd, "--solver", cfg, "solver", solver);
  epsilon = pick<double>(cmd, "--epsilon", cfg, "epsilon", epsilon);
  c_asym = pick<double>(cmd, "--c-asymmetry", cfg, "c_asym", c_asym);
  bool ok = true;
  json out;
  out["report"] = example2d_run(alpha, resolution, solver, epsilon, c_asym, ok);
  out["config"] = resolved_config_json(c, {{"command", "example2d"},
                                           {"alpha", alpha},
                                           {"resolution", resolution},
                                           {"solver", solver},
                                           {"epsilon", epsilon},
                                           {"c_asym", c_asym}});
  emit(out, c);
  return ok ? 0 : 3;
}

int run_isotropic(const CLI::App* cmd, const CommonOpts& c, std::string k_path, std::string l_path,
                  int resolution, double c_upper) {
  const json cfg = load_config(c, {"k", "l", "resolution", "c_upper"});
  k_path = pick<std::string>(cmd, "--k", cfg, "k", k_path);
  l_path = pick<std::string>(cmd, "--l", cfg, "l", l_path);
  resolution = pick<int>(cmd, "--resolution", cfg, "resolution", resolution);
  c_upper = pick<double>(cmd, "--c-upper", cfg, "c_upper", c_upper);
  if (k_path.empty()) throw InvalidInput("isotropic: --k is required");
  const ConvexBody k = body_from_json(load_json_file(k_path));
  json out;
  bool ok = true;
  if (l_path.empty()) {
    out["report"] = isotropic_stats_to_json(isotropic_stats(k));
  } else {
    const ConvexBody l = body_from_json(load_json_file(l_path));
    const IsotropicW1Report rep = isotropic_w1_bounds(k, l, resolution, {}, c_upper);
    out["report"] = isotropic_w1_to_json(rep);
    ok = rep.lower_ok && rep.dual_ok;
  }
  out["config"] = resolved_config_json(c, {{"command", "isotropic"},
                                           {"k", k_path},
                                           {"l", l_path},
                                           {"resolution", resolution},
                                           {"c_upper", c_upper}});
  emit(out, c);
  return ok ? 0 : 3;
}

json spectral_run(const ConvexBody& body, const std::string& method, int resolution) {
  if (method == "tensorized") {
    if (body.type != BodyType::Box) throw InvalidInput("spectral: tensorized needs a box body");
    return spectral_to_json(poincare_box(body.half_sides));
  }
  if (method == "grid_eigen") return spectral_to_json(poincare_grid(body, resolution));
  if (method == "cheeger_tensorized")
    return spectral_to_json(cheeger_estimate(body, "tensorized", resolution));
  if (method == "cheeger_grid")
    return spectral_to_json(cheeger_estimate(body, "grid_eigen", resolution));
  throw InvalidInput(
      "spectral: method must be tensorized|grid_eigen|cheeger_tensorized|cheeger_grid");
}

int run_spectral(const CLI::App* cmd, const CommonOpts& c, std::string body_path,
                 std::string method, int resolution) {
  const json cfg = load_config(c, {"body", "method", "resolution"});
  body_path = pick<std::string>(cmd, "--body", cfg, "body", body_path);
  method = pick<std::string>(cmd, "--method", cfg, "method", method);
  resolution = pick<int>(cmd, "--resolution", cfg, "resolution", resolution);
  if (body_path.empty()) throw InvalidInput("spectral: --body is required");
  const ConvexBody body = body_from_json(load_json_file(body_path));
  json out;
  out["report"] = spectral_run(body, method, resolution);
  out["config"] = resolved_config_json(c, {{"command", "spectral"},
                                           {"body", body_path},
                                           {"method", method},
                                           {"resolution", resolution}});
  emit(out, c);
  return 0;
}

int run_transport(const CLI::App* cmd, const CommonOpts& c, std::string mu_path,
                  std::string nu_path, int resolution, std::string cost_name, double d_che,
                  std::string solver, double epsilon, std::string plan_csv,
                  std::string measures_prefix) {
  const json cfg = load_config(c, {"mu", "nu", "resolution", "cost", "d_che", "solver", "epsilon",
                                   "plan_csv", "export_measures"});
  mu_path = pick<std::string>(cmd, "--mu", cfg, "mu", mu_path);
  nu_path = pick<std::string>(cmd, "--nu", cfg, "nu", nu_path);
  resolution = pick<int>(cmd, "--resolution", cfg, "resolution", resolution);
  cost_name = pick<std::string>(cmd, "--cost", cfg, "cost", cost_name);
  d_che = pick<double>(cmd, "--d-che", cfg, "d_che", d_che);
  solver = pick<std::string>(cmd, "--solver", cfg, "solver", solver);
  epsilon = pick<double>(cmd, "--epsilon", cfg, "epsilon", epsilon);
  plan_csv = pick<std::string>(cmd, "--plan-csv", cfg, "plan_csv", plan_csv);
  measures_prefix =
      pick<std::string>(cmd, "--export-measures", cfg, "export_measures", measures_prefix);
  if (mu_path.empty() || nu_path.empty()) throw InvalidInput("transport: --mu and --nu required");

  CostSpec cost = CostSpec::euclidean(1.0);
  if (cost_name == "w1")
    cost = CostSpec::euclidean(1.0);
  else if (cost_name == "w2")
    cost = CostSpec::euclidean(2.0);
  else if (cost_name == "cheeger")
    cost = CostSpec::cheeger(d_che);
  else
    throw InvalidInput("transport: cost must be w1|w2|cheeger");

  const DiscreteMeasure mu = discretize_body(body_from_json(load_json_file(mu_path)), resolution);
  const DiscreteMeasure nu = discretize_body(body_from_json(load_json_file(nu_path)), resolution);
  SolverChoice ch = solver_from(solver, epsilon);
  ch.budget_pairs = std::max(ch.budget_pairs, mu.size() * nu.size());
  const TransportPlan plan = solve(mu, nu, cost, ch);
  if (!plan_csv.empty()) {
    std::FILE* fp = std::fopen(plan_csv.c_str(), "w");
    if (!fp) throw InvalidInput("cannot write " + plan_csv);
    write_plan_csv(plan, fp);
    std::fclose(fp);
  }
  if (!measures_prefix.empty()) {
    const std::pair<std::string, const DiscreteMeasure*> exports[] = {{"mu", &mu}, {"nu", &nu}};
    for (const auto& [name, m] : exports) {
      std::FILE* fp = std::fopen((measures_prefix + "_" + name + ".csv").c_str(), "w");
      if (!fp) throw InvalidInput("cannot write measure CSV");
      write_measure_csv(*m, fp);
      std::fclose(fp);
    }
  }
  json out;
  out["report"] = plan_to_json(plan);
  out["report"]["cost"] = cost.describe();
  out["config"] = resolved_config_json(c, {{"command", "transport"},
                                           {"mu", mu_path},
                                           {"nu", nu_path},
                                           {"resolution", resolution},
                                           {"cost", cost_name},
                                           {"d_che", d_che},
                                           {"solver", solver},
                                           {"epsilon", epsilon}});
  emit(out, c);
  return 0;
}

int run_sweep(const CommonOpts& c) {
  if (c.config_path.empty()) throw InvalidInput("sweep: --config is required");
  json cfg = load_json_file(c.config_path);
  if (!cfg.contains("command")) throw InvalidInput("sweep: config needs a 'command'");
  const std::string command = cfg.at("command").get<std::string>();
  std::string csv;
  auto append_row = [&csv](const json& row, bool& first) {
    std::vector<std::pair<std::string, std::string>> cells;
    flatten(row, "", cells);
    if (first) {
      for (std::size_t i = 0; i < cells.size(); ++i)
        csv += cells[i].first + (i + 1 < cells.size() ? "," : "\n");
      first = false;
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
      csv += cells[i].second + (i + 1 < cells.size() ? "," : "\n");
  };
  if (command == "example2d") {
    require_keys(cfg, {"command", "alpha", "resolution", "solver", "epsilon", "c_asym", "output",
                       "format", "seed"},
                 "sweep");
    const auto alphas = cfg.at("alpha").get<std::vector<double>>();
    bool first = true;
    for (double a : alphas) {
      bool ok = true;
      append_row(example2d_run(a, cfg.value("resolution", 16), cfg.value("solver", "exact"),
                               cfg.value("epsilon", 1e-2), cfg.value("c_asym", 1.0), ok),
                 first);
    }
  } else if (command == "spectral") {
    require_keys(cfg, {"command", "body", "method", "resolution", "output", "format", "seed"},
                 "sweep");
    const ConvexBody body = body_from_json(cfg.at("body"));
    const auto resolutions = cfg.at("resolution").get<std::vector<int>>();
    bool first = true;
    for (int r : resolutions)
      append_row(spectral_run(body, cfg.value("method", "grid_eigen"), r), first);
  } else {
    throw InvalidInput("sweep: supported commands are example2d and spectral");
  }
  if (c.output_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(c.output_path);
    if (!out) throw InvalidInput("cannot write " + c.output_path);
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex geometry, optimal transport and isoperimetric verification runs"};
  app.require_subcommand(1);

  CommonOpts c_perim, c_thm1, c_thm2, c_ex, c_iso, c_spec, c_tr, c_sweep;

  auto* perim = app.add_subcommand("perimeter", "anisotropic perimeter and deficit R(E, K)");
  std::string pe, pk;
  bool p_inward = false, p_mink = false;
  perim->add_option("--e", pe, "body JSON for E");
  perim->add_option("--k", pk, "body JSON for K");
  perim->add_flag("--inward", p_inward, "use the h_K(-nu) convention");
  perim->add_flag("--minkowski-check", p_mink, "cross-check against the Minkowski content");
  add_common(perim, c_perim);

  auto* thm1 = app.add_subcommand("thm1", "functional isoperimetric inequality report");
  std::string t1v, t1f = "extremal";
  int t1n = 2;
  double t1tol = 1e-6;
  std::vector<double> t1shift;
  thm1->add_option("--v", t1v, "convex function JSON");
  thm1->add_option("--f", t1f, "'extremal' or a field JSON file");
  thm1->add_option("--n", t1n, "ambient dimension");
  thm1->add_option("--rel-tol", t1tol, "quadrature relative tolerance");
  thm1->add_option("--shift", t1shift, "profile shift vector");
  add_common(thm1, c_thm1);

  auto* thm2 = app.add_subcommand("thm2", "quantitative isoperimetry observables");
  std::string t2e, t2k, t2solver = "exact", t2const = "oracle";
  int t2res = 32;
  double t2eps = 1e-2;
  thm2->add_option("--e", t2e, "body JSON for E");
  thm2->add_option("--k", t2k, "body JSON for K");
  thm2->add_option("--resolution", t2res, "grid cells per axis");
  thm2->add_option("--solver", t2solver, "exact|entropic")
      ->check(CLI::IsMember({"exact", "entropic"}));
  thm2->add_option("--epsilon", t2eps, "entropic regularization");
  thm2->add_option("--interval-constant", t2const, "oracle|paper")
      ->check(CLI::IsMember({"oracle", "paper"}));
  add_common(thm2, c_thm2);

  auto* ex = app.add_subcommand("example2d", "the two-rectangle worked example");
  double exalpha = 4.0, exeps = 1e-2, excasym = 1.0;
  int exres = 32;
  std::string exsolver = "exact";
  ex->add_option("--alpha", exalpha, "aspect parameter (> 1)");
  ex->add_option("--resolution", exres, "grid cells per axis");
  ex->add_option("--solver", exsolver, "exact|entropic")
      ->check(CLI::IsMember({"exact", "entropic"}));
  ex->add_option("--epsilon", exeps, "entropic regularization");
  ex->add_option("--c-asymmetry", excasym, "constant C in the asymmetry remainder");
  add_common(ex, c_ex);

  auto* iso = app.add_subcommand("isotropic", "isotropic constants and W1 bounds");
  std::string isok, isol;
  int isores = 32;
  double isoc = 1.0;
  iso->add_option("--k", isok, "body JSON for K (unit volume, centered)");
  iso->add_option("--l", isol, "optional second body: runs the W1 bound report");
  iso->add_option("--resolution", isores, "grid cells per axis");
  iso->add_option("--c-upper", isoc, "constant in the reported upper expression");
  add_common(iso, c_iso);

  auto* spec = app.add_subcommand("spectral", "Poincare / Cheeger estimates");
  std::string spbody, spmethod = "grid_eigen";
  int spres = 64;
  spec->add_option("--body", spbody, "body JSON");
  spec->add_option("--method", spmethod, "tensorized|grid_eigen|cheeger_tensorized|cheeger_grid");
  spec->add_option("--resolution", spres, "grid cells per axis");
  add_common(spec, c_spec);

  auto* tr = app.add_subcommand("transport", "Wasserstein costs between body measures");
  std::string trmu, trnu, trcost = "w1", trsolver = "exact", trplan, trmeas;
  int trres = 16;
  double trd = 1.0, treps = 1e-2;
  tr->add_option("--mu", trmu, "body JSON for the source measure");
  tr->add_option("--nu", trnu, "body JSON for the target measure");
  tr->add_option("--resolution", trres, "grid cells per axis");
  tr->add_option("--cost", trcost, "w1|w2|cheeger");
  tr->add_option("--d-che", trd, "Cheeger constant for the cheeger cost");
  tr->add_option("--solver", trsolver, "exact|entropic")
      ->check(CLI::IsMember({"exact", "entropic"}));
  tr->add_option("--epsilon", treps, "entropic regularization");
  tr->add_option("--plan-csv", trplan, "write the coupling as CSV (i,j,mass)");
  tr->add_option("--export-measures", trmeas, "prefix for mu/nu point-weight CSVs");
  add_common(tr, c_tr);

  auto* sweep = app.add_subcommand("sweep", "batch runs over a parameter grid (CSV output)");
  add_common(sweep, c_sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (perim->parsed()) return run_perimeter(perim, c_perim, pe, pk, p_inward, p_mink);
    if (thm1->parsed()) return run_thm1(thm1, c_thm1, t1v, t1f, t1n, t1tol, t1shift);
    if (thm2->parsed()) return run_thm2(thm2, c_thm2, t2e, t2k, t2res, t2solver, t2eps, t2const);
    if (ex->parsed()) return run_example2d(ex, c_ex, exalpha, exres, exsolver, exeps, excasym);
    if (iso->parsed()) return run_isotropic(iso, c_iso, isok, isol, isores, isoc);
    if (spec->parsed()) return run_spectral(spec, c_spec, spbody, spmethod, spres);
    if (tr->parsed())
      return run_transport(tr, c_tr, trmu, trnu, trres, trcost, trd, trsolver, treps, trplan,
                           trmeas);
    if (sweep->parsed()) return run_sweep(c_sweep);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
