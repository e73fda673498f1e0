#include "speccas/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "speccas/error.hpp"
#include "speccas/schur_interp.hpp"

namespace speccas {

namespace {

void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end())
      raise(errc::parse_error, "unknown field '" + key + "' in " + where);
  }
}

std::vector<cplx> complex_list(const Json& doc, const std::string& where) {
  if (!doc.is_array()) raise(errc::parse_error, where + " must be a list of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(doc.size());
  for (const auto& item : doc) out.push_back(complex_from_json(item));
  return out;
}

SchurMap parse_layer(const Json& doc, std::optional<CMatrix>& conjugator_out,
                     bool& is_conjugation) {
  if (!doc.is_object() || !doc.contains("kind"))
    raise(errc::parse_error, "layer descriptors need a kind");
  std::string kind = doc["kind"].get<std::string>();
  is_conjugation = false;
  try {
    if (kind == "affine") {
      reject_unknown_keys(doc, {"kind", "t"}, "affine layer");
      return SchurMap::affine(doc.at("t").get<double>());
    }
    if (kind == "blaschke") {
      reject_unknown_keys(doc, {"kind", "t"}, "blaschke layer");
      return SchurMap::blaschke(doc.at("t").get<double>());
    }
    if (kind == "mobius") {
      reject_unknown_keys(doc, {"kind", "a", "b", "c", "d"}, "mobius layer");
      return SchurMap::mobius(complex_from_json(doc.at("a")), complex_from_json(doc.at("b")),
                              complex_from_json(doc.at("c")), complex_from_json(doc.at("d")));
    }
    if (kind == "polynomial") {
      reject_unknown_keys(doc, {"kind", "coeffs"}, "polynomial layer");
      return SchurMap::polynomial(complex_list(doc.at("coeffs"), "coeffs"));
    }
    if (kind == "rational") {
      reject_unknown_keys(doc, {"kind", "num", "den"}, "rational layer");
      return SchurMap::rational(complex_list(doc.at("num"), "num"),
                                complex_list(doc.at("den"), "den"));
    }
    if (kind == "conjugation") {
      reject_unknown_keys(doc, {"kind", "matrix"}, "conjugation layer");
      conjugator_out = matrix_from_json(doc.at("matrix"));
      is_conjugation = true;
      return SchurMap::identity();  // placeholder; conjugation is not a map layer
    }
  } catch (const Error& e) {
    if (e.code() == errc::param_out_of_range || e.code() == errc::empty_cycle)
      raise(errc::validation_error, std::string("layer rejected: ") + e.what());
    throw;
  }
  raise(errc::validation_error, "unknown layer kind: " + kind);
}

IterationMode parse_mode(const std::string& text) {
  if (text == "function_iteration") return IterationMode::function_iteration;
  if (text == "power") return IterationMode::power_iteration;
  if (text == "cesaro") return IterationMode::cesaro;
  if (text == "conjugation") return IterationMode::conjugation_cycle;
  raise(errc::validation_error, "unknown mode: " + text);
}

std::string mode_name(IterationMode mode) {
  switch (mode) {
    case IterationMode::function_iteration: return "function_iteration";
    case IterationMode::power_iteration: return "power";
    case IterationMode::cesaro: return "cesaro";
    case IterationMode::conjugation_cycle: return "conjugation";
  }
  return "unknown";
}

IterationStatus parse_expect(const std::string& text) {
  if (text == "converged") return IterationStatus::converged;
  if (text == "cycle") return IterationStatus::cycle;
  if (text == "diverged") return IterationStatus::diverged;
  raise(errc::validation_error, "unknown expectation: " + text);
}

Json layer_to_json(const SchurMap& map) {
  return std::visit(
      [](const auto& node) -> Json {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return Json{{"kind", "affine"}, {"t", node.t}};
        } else if constexpr (std::is_same_v<T, Blaschke>) {
          return Json{{"kind", "blaschke"}, {"t", node.t}};
        } else if constexpr (std::is_same_v<T, Mobius>) {
          return Json{{"kind", "mobius"},
                      {"a", complex_to_json(node.a)},
                      {"b", complex_to_json(node.b)},
                      {"c", complex_to_json(node.c)},
                      {"d", complex_to_json(node.d)}};
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          Json coeffs = Json::array();
          for (cplx c : node.coeffs) coeffs.push_back(complex_to_json(c));
          return Json{{"kind", "polynomial"}, {"coeffs", coeffs}};
        } else if constexpr (std::is_same_v<T, RationalMap>) {
          Json num = Json::array(), den = Json::array();
          for (cplx c : node.num) num.push_back(complex_to_json(c));
          for (cplx c : node.den) den.push_back(complex_to_json(c));
          return Json{{"kind", "rational"}, {"num", num}, {"den", den}};
        } else {
          raise(errc::unsupported_variant, "layer kind has no scenario representation");
        }
      },
      map.node());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot write " + path);
  out << text;
}

std::string format_sci(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.16e", value);
  return buffer;
}

}  // namespace

int Scenario::dim() const {
  switch (operator_kind) {
    case OperatorKind::diagonal: return static_cast<int>(diagonal_eigenvalues.size());
    case OperatorKind::dense: return static_cast<int>(dense_entries.rows());
    case OperatorKind::jordan_block: return jordan_dim;
  }
  return 0;
}

CMatrix Scenario::operator_matrix() const {
  switch (operator_kind) {
    case OperatorKind::diagonal: {
      CMatrix M = CMatrix::Zero(dim(), dim());
      M.diagonal() = diagonal_eigenvalues;
      return M;
    }
    case OperatorKind::dense:
      return dense_entries;
    case OperatorKind::jordan_block: {
      CMatrix M = CMatrix::Zero(jordan_dim, jordan_dim);
      for (int i = 0; i < jordan_dim; ++i) {
        M(i, i) = jordan_eigenvalue;
        if (i + 1 < jordan_dim) M(i, i + 1) = 1.0;
      }
      return M;
    }
  }
  raise(errc::validation_error, "unknown operator kind");
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "limit_properties", "spectral_match",       "stage_omega",  "riesz_product",
      "fixed_space_match", "boundary_separation", "reference_map"};
  return names;
}

Scenario parse_scenario(const std::string& document) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const std::exception& e) {
    raise(errc::parse_error, std::string("invalid scenario document: ") + e.what());
  }
  if (!doc.is_object()) raise(errc::parse_error, "scenario document must be an object");
  reject_unknown_keys(doc,
                      {"name", "operator", "layers", "mode", "tolerance", "max_stages",
                       "cycle_window", "checks", "contour", "expect", "reference_map",
                       "expect_reference_mismatch"},
                      "scenario");

  Scenario s;
  if (!doc.contains("name") || !doc["name"].is_string())
    raise(errc::parse_error, "scenario needs a name");
  s.name = doc["name"].get<std::string>();

  if (!doc.contains("operator")) raise(errc::parse_error, "scenario needs an operator");
  const Json& op = doc["operator"];
  if (!op.is_object() || !op.contains("kind"))
    raise(errc::parse_error, "operator needs a kind");
  std::string op_kind = op["kind"].get<std::string>();
  if (op_kind == "diagonal") {
    reject_unknown_keys(op, {"kind", "eigenvalues"}, "diagonal operator");
    auto eigs = complex_list(op.at("eigenvalues"), "eigenvalues");
    s.operator_kind = OperatorKind::diagonal;
    s.diagonal_eigenvalues = CVector(static_cast<int>(eigs.size()));
    for (size_t i = 0; i < eigs.size(); ++i) s.diagonal_eigenvalues(static_cast<int>(i)) = eigs[i];
  } else if (op_kind == "dense") {
    reject_unknown_keys(op, {"kind", "dim", "rows"}, "dense operator");
    Json entries = Json{{"dim", op.at("dim")}, {"rows", op.at("rows")}};
    s.operator_kind = OperatorKind::dense;
    s.dense_entries = matrix_from_json(entries);
  } else if (op_kind == "jordan_block") {
    reject_unknown_keys(op, {"kind", "dim", "eigenvalue"}, "jordan operator");
    s.operator_kind = OperatorKind::jordan_block;
    s.jordan_dim = op.at("dim").get<int>();
    s.jordan_eigenvalue = complex_from_json(op.at("eigenvalue"));
  } else {
    raise(errc::validation_error, "unknown operator kind: " + op_kind);
  }
  if (s.dim() < 1 || s.dim() > defaults::scenario_dim_max)
    raise(errc::validation_error, "operator dimension out of range");

  if (!doc.contains("mode")) raise(errc::parse_error, "scenario needs a mode");
  s.mode = parse_mode(doc["mode"].get<std::string>());

  if (doc.contains("layers")) {
    if (!doc["layers"].is_array()) raise(errc::parse_error, "layers must be a list");
    for (const auto& item : doc["layers"]) {
      bool is_conjugation = false;
      SchurMap layer = parse_layer(item, s.conjugator, is_conjugation);
      if (!is_conjugation) s.layers.push_back(layer);
    }
  }

  if (s.mode == IterationMode::function_iteration && s.layers.empty())
    raise(errc::validation_error, "function iteration needs at least one layer");
  if (s.mode == IterationMode::conjugation_cycle && !s.conjugator)
    raise(errc::validation_error, "conjugation mode needs a conjugation layer");
  if (s.mode == IterationMode::conjugation_cycle && !s.layers.empty())
    raise(errc::validation_error, "conjugation mode takes only the conjugation layer");
  if (s.conjugator && s.mode != IterationMode::conjugation_cycle)
    raise(errc::validation_error, "conjugation layers only apply to conjugation mode");
  if (s.conjugator && s.conjugator->rows() != s.dim())
    raise(errc::validation_error, "conjugator dimension mismatch");

  if (doc.contains("tolerance")) {
    s.tolerance = doc["tolerance"].get<double>();
    if (!(s.tolerance > 0.0)) raise(errc::validation_error, "tolerance must be positive");
  }
  if (doc.contains("max_stages")) {
    s.max_stages = doc["max_stages"].get<long long>();
    if (s.max_stages < 1) raise(errc::validation_error, "max_stages must be at least 1");
  }
  if (doc.contains("cycle_window")) {
    s.cycle_window = doc["cycle_window"].get<int>();
    if (s.cycle_window < 2) raise(errc::validation_error, "cycle_window must be at least 2");
  }
  if (doc.contains("checks")) {
    if (!doc["checks"].is_array()) raise(errc::parse_error, "checks must be a list");
    for (const auto& item : doc["checks"]) {
      std::string name = item.get<std::string>();
      if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
        raise(errc::validation_error, "unknown check: " + name);
      if (std::find(s.checks.begin(), s.checks.end(), name) != s.checks.end())
        raise(errc::validation_error, "duplicate check: " + name);
      s.checks.push_back(name);
    }
  }
  if (doc.contains("contour")) {
    const Json& c = doc["contour"];
    reject_unknown_keys(c, {"center", "radius", "nodes"}, "contour");
    ContourSpec spec;
    spec.center = complex_from_json(c.at("center"));
    spec.radius = c.at("radius").get<double>();
    if (c.contains("nodes")) spec.nodes = c["nodes"].get<int>();
    if (!(spec.radius > 0.0)) raise(errc::validation_error, "contour radius must be positive");
    if (spec.nodes < defaults::quad_min_nodes)
      raise(errc::validation_error, "contour needs at least 16 nodes");
    s.contour = spec;
  }
  if (doc.contains("expect")) s.expect = parse_expect(doc["expect"].get<std::string>());
  if (doc.contains("reference_map")) {
    bool ignored = false;
    std::optional<CMatrix> no_conj;
    s.reference_map = parse_layer(doc["reference_map"], no_conj, ignored);
    if (ignored) raise(errc::validation_error, "reference_map must be a map descriptor");
  }
  if (doc.contains("expect_reference_mismatch"))
    s.expect_reference_mismatch = doc["expect_reference_mismatch"].get<bool>();
  if (s.expect_reference_mismatch && !s.reference_map)
    raise(errc::validation_error, "expect_reference_mismatch needs a reference_map");

  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario(text);
}

std::string serialize_scenario(const Scenario& s) {
  Json doc;
  doc["name"] = s.name;
  switch (s.operator_kind) {
    case OperatorKind::diagonal: {
      Json eigs = Json::array();
      for (int i = 0; i < s.diagonal_eigenvalues.size(); ++i)
        eigs.push_back(complex_to_json(s.diagonal_eigenvalues(i)));
      doc["operator"] = Json{{"kind", "diagonal"}, {"eigenvalues", eigs}};
      break;
    }
    case OperatorKind::dense: {
      Json m = matrix_to_json(s.dense_entries);
      doc["operator"] = Json{{"kind", "dense"}, {"dim", m["dim"]}, {"rows", m["rows"]}};
      break;
    }
    case OperatorKind::jordan_block:
      doc["operator"] = Json{{"kind", "jordan_block"},
                             {"dim", s.jordan_dim},
                             {"eigenvalue", complex_to_json(s.jordan_eigenvalue)}};
      break;
  }
  doc["mode"] = mode_name(s.mode);
  Json layers = Json::array();
  for (const auto& layer : s.layers) layers.push_back(layer_to_json(layer));
  if (s.conjugator)
    layers.push_back(Json{{"kind", "conjugation"}, {"matrix", matrix_to_json(*s.conjugator)}});
  if (!layers.empty()) doc["layers"] = layers;
  doc["tolerance"] = s.tolerance;
  doc["max_stages"] = s.max_stages;
  doc["cycle_window"] = s.cycle_window;
  if (!s.checks.empty()) doc["checks"] = s.checks;
  if (s.contour)
    doc["contour"] = Json{{"center", complex_to_json(s.contour->center)},
                          {"radius", s.contour->radius},
                          {"nodes", s.contour->nodes}};
  if (s.expect) doc["expect"] = status_name(*s.expect);
  if (s.reference_map) doc["reference_map"] = layer_to_json(*s.reference_map);
  if (s.expect_reference_mismatch) doc["expect_reference_mismatch"] = true;
  return doc.dump(2) + "\n";
}

namespace {

CheckResult unavailable_check() { return CheckResult{-1.0, false}; }

std::map<std::string, CheckResult> evaluate_checks(const Scenario& s,
                                                   const ConvergenceReport& conv,
                                                   const CMatrix& A) {
  std::map<std::string, CheckResult> results;
  std::optional<LayerCycle> cycle;
  if (!s.layers.empty()) cycle = LayerCycle::from_layers(s.layers);

  bool operator_is_normal = true;
  if (s.operator_kind != OperatorKind::diagonal) {
    double scale2 = A.squaredNorm();
    operator_is_normal =
        scale2 == 0.0 || (A * A.adjoint() - A.adjoint() * A).norm() < defaults::normality_tol * scale2;
  }

  for (const std::string& name : s.checks) {
    if (name == "boundary_separation") {
      if (!cycle) {
        results[name] = unavailable_check();
        continue;
      }
      SeparationReport sep = boundary_separation_check(s.layers);
      results[name] = CheckResult{static_cast<double>(sep.violations.size()), sep.pass()};
      continue;
    }
    if (name == "reference_map") {
      if (!s.reference_map || !cycle) {
        results[name] = unavailable_check();
        continue;
      }
      double sup = 0.0;
      for (int j = 0; j <= 64; ++j) {
        double r = j / 64.0;
        for (int k = 0; k < 16; ++k) {
          cplx z = r * std::polar(1.0, 2.0 * std::numbers::pi * k / 16);
          try {
            sup = std::max(sup, std::abs(eval_map(cycle->composite(), z) -
                                         eval_map(*s.reference_map, z)));
          } catch (const Error&) {  // a pole on the grid cannot match a disk self-map
            sup = std::numeric_limits<double>::infinity();
          }
        }
      }
      bool mismatch = sup > defaults::ref_match_tol;
      results[name] = CheckResult{sup, mismatch == s.expect_reference_mismatch};
      continue;
    }
    if (name == "riesz_product") {
      if (!cycle) {
        results[name] = unavailable_check();
        continue;
      }
      try {
        CMatrix composite_image = apply_transform(A, cycle->composite());
        ContourSpec at_1 = s.contour ? *s.contour
                                     : isolating_contour(eigenvalues_of(composite_image), 1.0);
        RieszProductReport rp = riesz_product_identity(A, s.layers, at_1, defaults::check_riesz_tol);
        results[name] =
            CheckResult{std::max(rp.product_residual, rp.max_commutator), rp.pass};
      } catch (const Error&) {
        results[name] = unavailable_check();
      }
      continue;
    }
    if (name == "fixed_space_match") {
      if (!cycle) {
        results[name] = unavailable_check();
        continue;
      }
      SeparationReport sep = boundary_separation_check(s.layers);
      std::vector<CMatrix> transformed;
      for (const auto& layer : s.layers) transformed.push_back(apply_transform(A, layer));
      CMatrix composite_image = apply_transform(A, cycle->composite());
      double angle = subspace_angle(joint_fixed_space(transformed).basis,
                                    fixed_space(composite_image).basis);
      results[name] =
          CheckResult{angle, sep.pass() && angle < defaults::check_angle_tol};
      continue;
    }

    // The remaining checks need a converged limit.
    if (conv.status != IterationStatus::converged || !conv.limit) {
      results[name] = unavailable_check();
      continue;
    }
    const CMatrix& P = *conv.limit;
    if (name == "limit_properties") {
      auto residuals = check_limit_properties(P, A, defaults::check_limit_tol);
      double worst = std::max({residuals["idempotency"], residuals["commutation"],
                               residuals["spectrum_01"]});
      if (operator_is_normal) worst = std::max(worst, residuals["hermitian"]);
      results[name] = CheckResult{worst, worst < defaults::check_limit_tol};
    } else if (name == "stage_omega") {
      if (!cycle) {
        results[name] = unavailable_check();
        continue;
      }
      OmegaCheck omega = stage_omega_check(P, *cycle, defaults::check_limit_tol);
      results[name] = CheckResult{omega.residual, omega.pass};
    } else if (name == "spectral_match") {
      if (!cycle || s.operator_kind != OperatorKind::diagonal) {
        results[name] = unavailable_check();
        continue;
      }
      NormalOperator normal = NormalOperator::diagonal(s.diagonal_eigenvalues);
      CMatrix expected = spectral_projection(
          normal, SpectralSet::characteristic_of_limit(*cycle, LimitClass::Tag::one));
      double residual = (P - expected).norm();
      results[name] = CheckResult{residual, residual < defaults::check_limit_tol};
    }
  }
  return results;
}

}  // namespace

RunReport run_scenario(const Scenario& s, const RunOptions& options) {
  auto started = std::chrono::steady_clock::now();

  RunReport report;
  report.scenario = s.name;
  double tol = options.tol_override.value_or(s.tolerance);
  long long max_stages = options.max_stages_override.value_or(s.max_stages);

  IterationConfig config;
  config.mode = s.mode;
  config.tol = tol;
  config.max_stages = max_stages;
  config.cycle_window = s.cycle_window;
  config.conjugator = s.conjugator;
  config.record_history = true;

  CMatrix A = s.operator_matrix();
  std::optional<LayerCycle> cycle;
  if (!s.layers.empty()) cycle = LayerCycle::from_layers(s.layers);

  ConvergenceReport conv;
  switch (s.mode) {
    case IterationMode::function_iteration:
      if (s.operator_kind == OperatorKind::diagonal)
        conv = iterate_operator(NormalOperator::diagonal(s.diagonal_eigenvalues), *cycle, config);
      else
        conv = iterate_operator(A, *cycle, config);
      break;
    case IterationMode::power_iteration: {
      CMatrix T = cycle ? apply_transform(A, cycle->composite()) : A;
      conv = power_limit(T, tol, max_stages, config);
      break;
    }
    case IterationMode::cesaro: {
      CMatrix T = cycle ? apply_transform(A, cycle->composite()) : A;
      conv = cesaro_projection(T, tol, max_stages, /*record_history=*/true);
      break;
    }
    case IterationMode::conjugation_cycle:
      conv = conjugation_cycle(A, *s.conjugator, config);
      break;
  }

  if (conv.eigenvalue_history.empty() && !conv.history.empty()) {
    for (const auto& X : conv.history) {
      auto eigs = eigenvalues_of(X);
      CVector v(static_cast<int>(eigs.size()));
      for (size_t i = 0; i < eigs.size(); ++i) v(static_cast<int>(i)) = eigs[i];
      conv.eigenvalue_history.push_back(v);
    }
  }

  report.status = conv.status;
  report.period = conv.period;
  report.stage = conv.stage;
  report.checks = evaluate_checks(s, conv, A);

  if (options.emit_files) {
    std::filesystem::create_directories(options.out_dir);
    std::string base = options.out_dir + "/" + s.name;
    if (options.format == "json") {
      emit_trace_json(conv, base + "_trace.json");
      report.emitted_files.push_back(base + "_trace.json");
    } else {
      emit_trace(conv, base + "_trace.csv");
      report.emitted_files.push_back(base + "_trace.csv");
    }
    emit_eigenvalues(conv, base + "_eigs.csv");
    report.emitted_files.push_back(base + "_eigs.csv");
  }

  IterationStatus expected = s.expect.value_or(IterationStatus::converged);
  bool checks_pass = true;
  for (const auto& [name, result] : report.checks) {
    (void)name;
    checks_pass = checks_pass && result.pass;
  }
  if (report.status != expected)
    report.exit_code = 2;
  else if (!checks_pass)
    report.exit_code = 1;
  else
    report.exit_code = 0;

  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             started)
                       .count();

  if (options.emit_files) {
    std::string report_path = options.out_dir + "/" + s.name + "_report.json";
    write_text(report_path, report_to_json(report).dump(2) + "\n");
    report.emitted_files.push_back(report_path);
  }
  return report;
}

void emit_trace(const ConvergenceReport& report, const std::string& path) {
  if (report.history.empty())
    raise(errc::param_out_of_range, "trace emission needs recorded history");

  const CMatrix& final_state = report.limit ? *report.limit : report.history.back();
  std::string text = "stage,frobenius_delta,distance_to_final,norm\n";
  for (size_t m = 0; m < report.history.size(); ++m) {
    double delta = (m == 0) ? 0.0 : report.residual_history[m - 1];
    double distance = (report.history[m] - final_state).norm();
    text += std::to_string(m) + "," + format_sci(delta) + "," + format_sci(distance) + "," +
            format_sci(report.norm_history[m]) + "\n";
  }
  write_text(path, text);
}

void emit_eigenvalues(const ConvergenceReport& report, const std::string& path) {
  std::string text = "stage,index,re,im\n";
  for (size_t m = 0; m < report.eigenvalue_history.size(); ++m)
    for (int i = 0; i < report.eigenvalue_history[m].size(); ++i)
      text += std::to_string(m) + "," + std::to_string(i) + "," +
              format_sci(report.eigenvalue_history[m](i).real()) + "," +
              format_sci(report.eigenvalue_history[m](i).imag()) + "\n";
  write_text(path, text);
}

void emit_trace_json(const ConvergenceReport& report, const std::string& path) {
  if (report.history.empty())
    raise(errc::param_out_of_range, "trace emission needs recorded history");

  const CMatrix& final_state = report.limit ? *report.limit : report.history.back();
  Json rows = Json::array();
  for (size_t m = 0; m < report.history.size(); ++m) {
    rows.push_back(Json{{"stage", m},
                        {"frobenius_delta", m == 0 ? 0.0 : report.residual_history[m - 1]},
                        {"distance_to_final", (report.history[m] - final_state).norm()},
                        {"norm", report.norm_history[m]}});
  }
  write_text(path, rows.dump(2) + "\n");
}

Json report_to_json(const RunReport& report) {
  Json checks;
  for (const auto& [name, result] : report.checks)
    checks[name] = Json{{"residual", result.residual}, {"pass", result.pass}};
  return Json{{"scenario", report.scenario}, {"status", status_name(report.status)},
              {"period", report.period},     {"stage", report.stage},
              {"checks", checks},            {"wall_ms", report.wall_ms},
              {"exit_code", report.exit_code}};
}

}  // namespace speccas
