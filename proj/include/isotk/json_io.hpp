#pragma once

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "isotk/body.hpp"
#include "isotk/convex_function.hpp"
#include "isotk/errors.hpp"
#include "isotk/quadrature.hpp"
#include "isotk/scalar_field.hpp"
#include "isotk/spectral.hpp"
#include "isotk/transport.hpp"
#include "isotk/verify.hpp"

namespace isotk {

using nlohmann::json;

inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw InvalidInput(what + ": unknown key '" + it.key() + "'");
}

inline Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of reals");
  Vec v;
  for (const auto& x : j) v.push_back(x.get<double>());
  return v;
}

inline Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("expected a row-major matrix");
  const int n = static_cast<int>(j.size());
  Mat m(n);
  for (int i = 0; i < n; ++i) {
    const Vec row = vec_from_json(j[i]);
    if (static_cast<int>(row.size()) != n) throw InvalidInput("matrix must be square");
    for (int c = 0; c < n; ++c) m(i, c) = row[c];
  }
  return m;
}

inline ConvexBody body_from_json_impl(const json& j);

inline ConvexBody body_from_json(const json& j) {
  try {
    return body_from_json_impl(j);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("body: ") + e.what());
  }
}

inline ConvexBody body_from_json_impl(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw InvalidInput("body: missing 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "box") {
    require_keys(j, {"type", "half_sides"}, "body(box)");
    return ConvexBody::box(vec_from_json(j.at("half_sides")));
  }
  if (type == "ball") {
    // "dim" is optional (default 2): the radius alone does not fix n
    require_keys(j, {"type", "radius", "dim"}, "body(ball)");
    return ConvexBody::ball(j.at("radius").get<double>(), j.value("dim", 2));
  }
  if (type == "polytope") {
    require_keys(j, {"type", "vertices"}, "body(polytope)");
    std::vector<Vec> vs;
    for (const auto& row : j.at("vertices")) vs.push_back(vec_from_json(row));
    return ConvexBody::polytope(std::move(vs));
  }
  if (type == "affine") {
    require_keys(j, {"type", "matrix", "shift", "base"}, "body(affine)");
    return ConvexBody::affine(mat_from_json(j.at("matrix")), vec_from_json(j.at("shift")),
                              body_from_json(j.at("base")));
  }
  throw InvalidInput("body: unknown type '" + type + "'");
}

inline json body_to_json(const ConvexBody& b) {
  json j;
  switch (b.type) {
    case BodyType::Box:
      j["type"] = "box";
      j["half_sides"] = b.half_sides;
      break;
    case BodyType::Ball:
      j["type"] = "ball";
      j["radius"] = b.radius;
      j["dim"] = b.ball_dim;
      break;
    case BodyType::Polytope:
      j["type"] = "polytope";
      j["vertices"] = b.vertices;
      break;
    case BodyType::Affine: {
      j["type"] = "affine";
      json rows = json::array();
      for (int i = 0; i < b.matrix.n; ++i) {
        json row = json::array();
        for (int c = 0; c < b.matrix.n; ++c) row.push_back(b.matrix(i, c));
        rows.push_back(row);
      }
      j["matrix"] = rows;
      j["shift"] = b.shift;
      j["base"] = body_to_json(*b.base);
      break;
    }
  }
  return j;
}

inline ConvexFunction function_from_json_impl(const json& j);

inline ConvexFunction function_from_json(const json& j) {
  try {
    return function_from_json_impl(j);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("function: ") + e.what());
  }
}

inline ConvexFunction function_from_json_impl(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw InvalidInput("function: missing 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "indicatrix") {
    require_keys(j, {"type", "body"}, "function(indicatrix)");
    return ConvexFunction::indicatrix(body_from_json(j.at("body")));
  }
  if (type == "quadratic") {
    require_keys(j, {"type", "scale", "dim"}, "function(quadratic)");
    return ConvexFunction::quadratic(j.at("scale").get<double>(), j.at("dim").get<int>());
  }
  if (type == "power_norm") {
    require_keys(j, {"type", "exponent", "scale", "dim"}, "function(power_norm)");
    return ConvexFunction::power_norm(j.at("exponent").get<double>(), j.at("scale").get<double>(),
                                      j.at("dim").get<int>());
  }
  if (type == "grid_sampled") {
    require_keys(j, {"type", "origin", "spacing", "shape", "values"}, "function(grid_sampled)");
    std::vector<int> shape;
    for (const auto& s : j.at("shape")) shape.push_back(s.get<int>());
    std::vector<double> values;
    for (const auto& v : j.at("values")) values.push_back(v.get<double>());
    return ConvexFunction::grid_sampled(vec_from_json(j.at("origin")),
                                        vec_from_json(j.at("spacing")), shape, values);
  }
  throw InvalidInput("function: unknown type '" + type + "'");
}

inline ScalarField field_from_json_impl(const json& j);

inline ScalarField field_from_json(const json& j) {
  try {
    return field_from_json_impl(j);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("field: ") + e.what());
  }
}

inline ScalarField field_from_json_impl(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw InvalidInput("field: missing 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "gaussian_mixture") {
    require_keys(j, {"type", "centers", "sigmas", "amplitudes"}, "field(gaussian_mixture)");
    std::vector<Vec> centers;
    for (const auto& c : j.at("centers")) centers.push_back(vec_from_json(c));
    std::vector<double> sigmas, amps;
    for (const auto& s : j.at("sigmas")) sigmas.push_back(s.get<double>());
    for (const auto& a : j.at("amplitudes")) amps.push_back(a.get<double>());
    return gaussian_mixture(centers, sigmas, amps);
  }
  throw InvalidInput("field: unknown type '" + type + "' (use gaussian_mixture or 'extremal')");
}

inline QuadratureSpec quadspec_from_json(const json& j) try {
  require_keys(j, {"box", "rel_tol", "max_cells"}, "quadrature");
  QuadratureSpec q;
  if (j.contains("box"))
    for (const auto& row : j.at("box")) {
      const Vec r = vec_from_json(row);
      if (r.size() != 2) throw InvalidInput("quadrature: box rows are [lo, hi]");
      q.box.emplace_back(r[0], r[1]);
    }
  q.rel_tol = j.value("rel_tol", 1e-6);
  q.max_cells = j.value("max_cells", 200000);
  if (!(q.rel_tol > 0.0)) throw InvalidInput("quadrature: rel_tol must be positive");
  return q;
} catch (const json::exception& e) {
  throw InvalidInput(std::string("quadrature: ") + e.what());
}

inline json deficit_report_to_json(const DeficitReport& r) {
  json j;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["deficit"] = r.deficit;
  if (r.has_remainder) j["remainder"] = r.remainder;
  if (!r.comparison.empty()) j["comparison"] = r.comparison;
  j["tolerances"] = r.tolerances;
  j["metrics"] = r.metrics;
  j["inputs"] = r.inputs;
  j["flags"] = r.flags;
  j["ok"] = r.ok;
  return j;
}

inline json spectral_to_json(const SpectralEstimate& e) {
  json j;
  j["kind"] = e.kind;
  j["value"] = e.value;
  if (e.has_bracket) j["bracket"] = {e.bracket_lo, e.bracket_hi};
  j["method"] = e.method;
  j["resolution"] = e.resolution;
  j["oracle_value"] = e.oracle_value;
  if (e.paper_value > 0.0) j["paper_value"] = e.paper_value;
  return j;
}

inline json thm2_to_json(const Thm2Report& r) {
  json j;
  j["r_report"] = deficit_report_to_json(r.r_report);
  j["cheeger"] = spectral_to_json(r.cheeger);
  j["translation"] = r.translation;
  j["w1"] = r.w1;
  j["w_cheeger_cost"] = r.w_cheeger_cost;
  j["f_of_d_w1"] = r.f_of_dw1;
  j["observed_ratio_cost_form"] = r.ratio_cost_form;
  j["observed_ratio_f_form"] = r.ratio_f_form;
  j["d_che_used"] = r.d_che_used;
  j["resolution"] = r.resolution;
  j["ok"] = r.ok;
  return j;
}

inline json example2d_to_json(const Example2dReport& r) {
  json j;
  j["alpha"] = r.alpha;
  j["R"] = r.r_deficit;
  j["w1"] = r.w1;
  j["paper_lower_bound"] = r.paper_lower_bound;
  j["poincare_oracle"] = r.poincare_oracle;
  j["poincare_paper"] = r.poincare_paper;
  j["remainder_oracle"] = r.remainder_oracle;
  j["remainder_paper"] = r.remainder_paper;
  j["asymmetry_remainder"] = r.asymmetry_remainder_value;
  j["asymmetry"] = r.asymmetry;
  j["cell_diameter"] = r.cell_diameter;
  j["w1_tolerance"] = r.w1_tolerance;
  j["resolution"] = r.resolution;
  j["w1_bound_ok"] = r.w1_bound_ok;
  return j;
}

inline json isotropic_stats_to_json(const IsotropicStats& s) {
  json j;
  j["L_K"] = s.l_k;
  j["M_K"] = s.m_k;
  j["isotropy_defect"] = s.isotropy_defect;
  json rows = json::array();
  for (int i = 0; i < s.covariance.n; ++i) {
    json row = json::array();
    for (int c = 0; c < s.covariance.n; ++c) row.push_back(s.covariance(i, c));
    rows.push_back(row);
  }
  j["covariance"] = rows;
  return j;
}

inline json isotropic_w1_to_json(const IsotropicW1Report& r) {
  json j;
  j["K"] = isotropic_stats_to_json(r.k_stats);
  j["L"] = isotropic_stats_to_json(r.l_stats);
  j["w1"] = r.w1;
  j["lower_bound"] = r.lower_bound;
  j["upper_expression"] = r.upper_expression;
  j["dual_value_abs_phi"] = r.dual_value;
  j["tolerance"] = r.tolerance;
  j["resolution"] = r.resolution;
  j["lower_ok"] = r.lower_ok;
  j["dual_ok"] = r.dual_ok;
  return j;
}

inline json plan_to_json(const TransportPlan& p) {
  json j;
  j["value"] = p.primal_cost;
  j["marginal_defect"] = p.marginal_defect;
  j["solver"] = p.solver;
  if (p.solver == "entropic") j["epsilon"] = p.epsilon;
  j["iterations"] = p.iterations;
  j["couplings"] = p.couplings.size();
  return j;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InvalidInput("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace isotk
