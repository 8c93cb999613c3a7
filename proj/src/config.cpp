#include "uio/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "uio/errors.hpp"
#include "uio/expr.hpp"

namespace uio {

using nlohmann::json;

namespace {

const json& require(const json& doc, const std::string& key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end())
    throw ValidationError("config: missing '" + key + "' in " + where);
  return *it;
}

double number_at(const json& j, const std::string& what) {
  if (!j.is_number())
    throw ValidationError("config: " + what + " must be a number");
  return j.get<double>();
}

std::vector<double> number_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError("config: " + what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number_at(v, what + " entry"));
  return out;
}

LambdaField lambda_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ValidationError("config: plant.lambda must be an object with a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    Vector v = vector_from_json(require(j, "values", "plant.lambda"), "lambda values");
    return LambdaField::from_constant(v);
  }
  if (kind == "expr") {
    const json& entries = require(j, "entries", "plant.lambda");
    if (!entries.is_array() || entries.empty())
      throw ValidationError("config: plant.lambda.entries must be a non-empty array");
    std::vector<ScalarExpr> exprs;
    std::string label;
    for (const auto& e : entries) {
      if (!e.is_string())
        throw ValidationError("config: plant.lambda.entries must hold strings");
      exprs.push_back(ScalarExpr::parse(e.get<std::string>()));
      if (!label.empty()) label += ", ";
      label += e.get<std::string>();
    }
    const int n = static_cast<int>(exprs.size());
    return LambdaField::from_function(
        n,
        [exprs, n](double z) {
          Vector v(n);
          for (int i = 0; i < n; ++i) v(i) = exprs[i](z);
          return v;
        },
        label);
  }
  if (kind == "samples") {
    Vector z = vector_from_json(require(j, "z", "plant.lambda"), "lambda sample grid");
    Matrix vals = matrix_from_json(require(j, "values", "plant.lambda"),
                                   "lambda sample values");
    return LambdaField::from_samples(z, vals);
  }
  throw ValidationError("config: plant.lambda.kind must be constant, expr, or samples");
}

NonlinearitySpec nonlinearity_from_json(const json& j) {
  if (!j.is_object() || !j.contains("name"))
    throw ValidationError("config: plant.nonlinearity must be an object with a 'name'");
  const std::string name = j.at("name").get<std::string>();
  if (name == "tanh") {
    Matrix U1 = matrix_from_json(require(j, "U1", "plant.nonlinearity"), "U1");
    Matrix U2 = matrix_from_json(require(j, "U2", "plant.nonlinearity"), "U2");
    return make_tanh_nonlinearity(U1, U2);
  }
  if (name == "zero") {
    const json& d = require(j, "dim", "plant.nonlinearity");
    if (!d.is_number_integer() || d.get<int>() < 1)
      throw ValidationError("config: plant.nonlinearity.dim must be a positive integer");
    return make_zero_nonlinearity(d.get<int>());
  }
  throw ValidationError("config: unsupported nonlinearity '" + name +
                        "' (supported: tanh, zero)");
}

SignalComponent component_from_json(const json& j, const std::string& what) {
  SignalComponent c;
  if (j.is_number()) {
    c.kind = SignalComponent::Kind::Constant;
    c.value = j.get<double>();
    return c;
  }
  if (!j.is_object() || !j.contains("kind"))
    throw ValidationError("config: " + what +
                          " components must be numbers or objects with a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    c.kind = SignalComponent::Kind::Constant;
    c.value = number_at(require(j, "value", what), what + ".value");
  } else if (kind == "sinusoid") {
    c.kind = SignalComponent::Kind::Sinusoid;
    c.amplitude = number_at(require(j, "amplitude", what), what + ".amplitude");
    c.frequency = number_at(require(j, "frequency", what), what + ".frequency");
    c.phase = j.value("phase", 0.0);
    c.cosine = j.value("cosine", false);
  } else if (kind == "table") {
    c.kind = SignalComponent::Kind::Table;
    c.t_samples = number_list(require(j, "t", what), what + ".t");
    c.v_samples = number_list(require(j, "v", what), what + ".v");
    if (c.t_samples.size() != c.v_samples.size() || c.t_samples.size() < 2)
      throw ValidationError("config: " + what +
                            " table needs matching t and v arrays of length >= 2");
    for (size_t i = 1; i < c.t_samples.size(); ++i)
      if (c.t_samples[i] <= c.t_samples[i - 1])
        throw ValidationError("config: " + what + " table times must be increasing");
  } else {
    throw ValidationError("config: " + what + " component kind '" + kind +
                          "' must be constant, sinusoid, or table");
  }
  return c;
}

SignalSpec signal_from_json(const json& j, const std::string& what) {
  if (!j.is_array())
    throw ValidationError("config: " + what + " must be an array of components");
  SignalSpec s;
  for (const auto& c : j) s.components.push_back(component_from_json(c, what));
  return s;
}

std::function<Vector(double)> profile_from_json(const json& j, int n,
                                                const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ValidationError("config: " + what + " must be an array of " +
                          std::to_string(n) + " expression strings");
  std::vector<ScalarExpr> exprs;
  for (const auto& e : j) {
    if (!e.is_string())
      throw ValidationError("config: " + what + " entries must be strings");
    exprs.push_back(ScalarExpr::parse(e.get<std::string>()));
  }
  return [exprs, n](double z) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = exprs[i](z);
    return v;
  };
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "upwind1") return Scheme::Upwind1;
  if (s == "lax_friedrichs2") return Scheme::LaxFriedrichs2;
  throw ValidationError("config: grid.scheme must be upwind1 or lax_friedrichs2");
}

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

json shared_example_json() {
  json doc;
  doc["plant"] = {
      {"M", {{1, 1, 1}, {0, 1, 0}}},
      {"A", {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}},
      {"B", {{0}, {0}, {0}}},
      {"N", {{1, 0}, {0, 1}}},
      {"S", {{1}, {0}}},
      {"nonlinearity",
       {{"name", "tanh"}, {"U1", {{0.0}}}, {"U2", {{0.5}}}}},
  };
  doc["signals"] = {
      {"u", {{{"kind", "constant"}, {"value", 0.0}}}},
      {"w", {{{"kind", "sinusoid"}, {"amplitude", 1.0}, {"frequency", 2.0}}}},
  };
  doc["initial"] = {
      {"x0", {"0.5*(sin(2*pi*z)-1)", "0.5*(sin(4*pi*z)-1)"}},
      {"chi0", {0.5, -0.5, -0.5}},
      {"xhat0", {"0", "0"}},
      {"chihat0", {0, 0, 0}},
  };
  doc["grid"] = {{"cells", 200},
                 {"t_final", 20.0},
                 {"cfl", 0.9},
                 {"scheme", "upwind1"},
                 {"snapshot_stride", 0}};
  doc["synthesis"] = json::object();
  return doc;
}

}  // namespace

json builtin_config_json(const std::string& name) {
  if (name == "example1") {
    json doc = shared_example_json();
    doc["name"] = "example1";
    doc["plant"]["lambda"] = {{"kind", "expr"}, {"entries", {"1+z*z", "exp(-z)"}}};
    doc["plant"]["E"] = {{0}, {1}, {1}};
    doc["plant"]["C"] = {{1, 1}};
    doc["plant"]["T"] = {{1, 0}};
    return doc;
  }
  if (name == "example2") {
    json doc = shared_example_json();
    doc["name"] = "example2";
    doc["plant"]["lambda"] = {{"kind", "expr"}, {"entries", {"sqrt(2)", "2"}}};
    doc["plant"]["E"] = {{0}, {0}, {1}};
    doc["plant"]["C"] = {{1, 0}};
    doc["plant"]["T"] = {{0, 1}};
    return doc;
  }
  throw ValidationError("config: unknown builtin '" + name +
                        "' (available: example1, example2)");
}

ProblemConfig builtin_config(const std::string& name) {
  return config_from_json(builtin_config_json(name));
}

ProblemConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config: document must be a JSON object");
  json merged;
  if (doc.contains("base")) {
    if (!doc.at("base").is_string())
      throw ValidationError("config: 'base' must name a builtin setup");
    merged = builtin_config_json(doc.at("base").get<std::string>());
    json patch = doc;
    patch.erase("base");
    merged.merge_patch(patch);
  } else {
    merged = doc;
  }

  ProblemConfig cfg;
  cfg.name = merged.value("name", "custom");

  const json& p = require(merged, "plant", "the document");
  cfg.plant.Lambda = lambda_from_json(require(p, "lambda", "plant"));
  cfg.plant.M = matrix_from_json(require(p, "M", "plant"), "plant.M");
  cfg.plant.A = matrix_from_json(require(p, "A", "plant"), "plant.A");
  cfg.plant.B = matrix_from_json(require(p, "B", "plant"), "plant.B");
  cfg.plant.E = matrix_from_json(require(p, "E", "plant"), "plant.E");
  cfg.plant.C = matrix_from_json(require(p, "C", "plant"), "plant.C");
  cfg.plant.N = matrix_from_json(require(p, "N", "plant"), "plant.N");
  cfg.plant.S = matrix_from_json(require(p, "S", "plant"), "plant.S");
  cfg.plant.T = matrix_from_json(require(p, "T", "plant"), "plant.T");
  cfg.plant.nonlinearity = nonlinearity_from_json(require(p, "nonlinearity", "plant"));
  cfg.plant.validate();

  cfg.u = SignalSpec::zero(cfg.plant.nu());
  cfg.w = SignalSpec::zero(cfg.plant.nw());
  if (merged.contains("signals")) {
    const json& s = merged.at("signals");
    if (s.contains("u")) cfg.u = signal_from_json(s.at("u"), "signals.u");
    if (s.contains("w")) cfg.w = signal_from_json(s.at("w"), "signals.w");
  }
  if (cfg.u.dim() != cfg.plant.nu())
    throw ValidationError("config: signals.u must have one component per column of B");
  if (cfg.w.dim() != cfg.plant.nw())
    throw ValidationError("config: signals.w must have one component per column of E");

  const int n_x = cfg.plant.nx(), n_chi = cfg.plant.nchi();
  cfg.initial.x0 = [n_x](double) { return Vector::Zero(n_x); };
  cfg.initial.xhat0 = [n_x](double) { return Vector::Zero(n_x); };
  cfg.initial.chi0 = Vector::Zero(n_chi);
  cfg.initial.chihat0 = Vector::Zero(n_chi);
  if (merged.contains("initial")) {
    const json& ini = merged.at("initial");
    if (ini.contains("x0"))
      cfg.initial.x0 = profile_from_json(ini.at("x0"), n_x, "initial.x0");
    if (ini.contains("xhat0"))
      cfg.initial.xhat0 = profile_from_json(ini.at("xhat0"), n_x, "initial.xhat0");
    if (ini.contains("chi0")) {
      cfg.initial.chi0 = vector_from_json(ini.at("chi0"), "initial.chi0");
      if (cfg.initial.chi0.size() != n_chi)
        throw ValidationError("config: initial.chi0 must have the ODE dimension");
    }
    if (ini.contains("chihat0")) {
      cfg.initial.chihat0 = vector_from_json(ini.at("chihat0"), "initial.chihat0");
      if (cfg.initial.chihat0.size() != n_chi)
        throw ValidationError("config: initial.chihat0 must have the ODE dimension");
    }
  }

  if (merged.contains("grid")) {
    const json& g = merged.at("grid");
    cfg.grid.cells = g.value("cells", cfg.grid.cells);
    cfg.grid.t_final = g.value("t_final", cfg.grid.t_final);
    cfg.grid.cfl = g.value("cfl", cfg.grid.cfl);
    if (g.contains("scheme"))
      cfg.grid.scheme = scheme_from_string(g.at("scheme").get<std::string>());
    cfg.grid.snapshot_stride = g.value("snapshot_stride", cfg.grid.snapshot_stride);
  }

  if (merged.contains("synthesis")) {
    const json& s = merged.at("synthesis");
    if (s.contains("mu_grid")) cfg.synthesis.mu_grid = number_list(s.at("mu_grid"), "mu_grid");
    if (s.contains("theta_grid"))
      cfg.synthesis.theta_grid = number_list(s.at("theta_grid"), "theta_grid");
    cfg.synthesis.epsilon = s.value("epsilon", cfg.synthesis.epsilon);
    cfg.synthesis.delta = s.value("delta", cfg.synthesis.delta);
    if (s.contains("selection")) {
      const std::string sel = s.at("selection").get<std::string>();
      if (sel == "first_feasible")
        cfg.synthesis.best_margin = false;
      else if (sel == "best_margin")
        cfg.synthesis.best_margin = true;
      else
        throw ValidationError(
            "config: synthesis.selection must be first_feasible or best_margin");
    }
    cfg.synthesis.force_L_zero = s.value("force_L_zero", cfg.synthesis.force_L_zero);
    cfg.synthesis.lambda_grid_points =
        s.value("lambda_grid_points", cfg.synthesis.lambda_grid_points);
    cfg.synthesis.verify_points = s.value("verify_points", cfg.synthesis.verify_points);
    if (s.contains("sdp")) {
      const json& d = s.at("sdp");
      cfg.synthesis.sdp.required_slack =
          d.value("required_slack", cfg.synthesis.sdp.required_slack);
      cfg.synthesis.sdp.desired_slack =
          d.value("desired_slack", cfg.synthesis.sdp.desired_slack);
      cfg.synthesis.sdp.box_radius = d.value("box_radius", cfg.synthesis.sdp.box_radius);
      cfg.synthesis.sdp.max_newton_total =
          d.value("max_newton_total", cfg.synthesis.sdp.max_newton_total);
    }
  }
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array())
    throw ValidationError("config: " + what + " must be an array of rows");
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array())
    throw ValidationError("config: " + what + " rows must be arrays");
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw ValidationError("config: " + what + " must be rectangular");
    for (int c = 0; c < cols; ++c)
      m(i, c) = number_at(j[i][c], what + " entry");
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array())
    throw ValidationError("config: " + what + " must be an array of numbers");
  Vector v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = number_at(j[i], what + " entry");
  return v;
}

json gains_to_json(const ObserverGains& gains) {
  json doc;
  doc["format"] = "uio-gains-1";
  doc["H"] = matrix_to_json(gains.H);
  doc["R"] = matrix_to_json(gains.R);
  doc["F"] = matrix_to_json(gains.F);
  doc["K1"] = matrix_to_json(gains.K1);
  doc["K2"] = matrix_to_json(gains.K2);
  doc["K"] = matrix_to_json(gains.K);
  doc["L"] = matrix_to_json(gains.L);
  return doc;
}

ObserverGains gains_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != "uio-gains-1")
    throw ValidationError("gains file: expected format tag uio-gains-1");
  ObserverGains g;
  g.H = matrix_from_json(require(j, "H", "gains"), "H");
  g.R = matrix_from_json(require(j, "R", "gains"), "R");
  g.F = matrix_from_json(require(j, "F", "gains"), "F");
  g.K1 = matrix_from_json(require(j, "K1", "gains"), "K1");
  g.K2 = matrix_from_json(require(j, "K2", "gains"), "K2");
  g.K = matrix_from_json(require(j, "K", "gains"), "K");
  g.L = matrix_from_json(require(j, "L", "gains"), "L");
  return g;
}

namespace {

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace

void save_gains(const ObserverGains& gains, const std::string& path) {
  write_text_file(path, gains_to_json(gains).dump(2) + "\n");
}

ObserverGains load_gains(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("gains file: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("gains file: '" + path + "' is not valid JSON: " + e.what());
  }
  return gains_from_json(doc);
}

json certificate_to_json(const StabilityCertificate& cert) {
  json doc;
  doc["format"] = "uio-certificate-1";
  doc["mode"] = to_string(cert.mode);
  doc["mu"] = cert.mu;
  doc["kappa"] = cert.kappa;
  doc["theta"] = cert.theta;
  doc["epsilon"] = cert.epsilon;
  doc["design_slack"] = cert.design_slack;
  doc["verified_margin"] = cert.verified_margin;
  doc["vertex_grid_points"] = cert.vertex_grid_points;
  doc["verify_points"] = cert.verify_points;
  doc["P"] = vector_to_json(cert.P);
  doc["Q"] = matrix_to_json(cert.Q);
  doc["X"] = matrix_to_json(cert.X);
  doc["J"] = matrix_to_json(cert.J);
  doc["Y"] = matrix_to_json(cert.Y);
  return doc;
}

StabilityCertificate certificate_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != "uio-certificate-1")
    throw ValidationError("certificate file: expected format tag uio-certificate-1");
  StabilityCertificate c;
  const std::string mode = require(j, "mode", "certificate").get<std::string>();
  if (mode == "detectable")
    c.mode = CertificateMode::Detectable;
  else if (mode == "nondetectable")
    c.mode = CertificateMode::Nondetectable;
  else
    throw ValidationError("certificate file: mode must be detectable or nondetectable");
  c.mu = number_at(require(j, "mu", "certificate"), "mu");
  c.kappa = number_at(require(j, "kappa", "certificate"), "kappa");
  c.theta = j.value("theta", 0.0);
  c.epsilon = j.value("epsilon", 0.0);
  c.design_slack = j.value("design_slack", 0.0);
  c.verified_margin = j.value("verified_margin", 0.0);
  c.vertex_grid_points = j.value("vertex_grid_points", 0);
  c.verify_points = j.value("verify_points", 0);
  c.P = vector_from_json(require(j, "P", "certificate"), "P");
  c.Q = matrix_from_json(require(j, "Q", "certificate"), "Q");
  if (j.contains("X")) c.X = matrix_from_json(j.at("X"), "X");
  if (j.contains("J")) c.J = matrix_from_json(j.at("J"), "J");
  if (j.contains("Y")) c.Y = matrix_from_json(j.at("Y"), "Y");
  return c;
}

void save_certificate(const StabilityCertificate& cert, const std::string& path) {
  write_text_file(path, certificate_to_json(cert).dump(2) + "\n");
}

StabilityCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("certificate file: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("certificate file: '" + path + "' is not valid JSON: " +
                          e.what());
  }
  return certificate_from_json(doc);
}

void write_trace_csv(const SimulationTrace& trace, const std::string& path) {
  std::string out = "t,err_sq,eps_chi_sq";
  const bool with_lyap = !trace.lyap.empty();
  if (with_lyap) out += "," + trace.lyap_name;
  out += "\n";
  for (size_t i = 0; i < trace.t.size(); ++i) {
    append_number(out, trace.t[i]);
    out += ',';
    append_number(out, trace.err_sq[i]);
    out += ',';
    append_number(out, trace.eps_chi_sq[i]);
    if (with_lyap) {
      out += ',';
      append_number(out, trace.lyap[i]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_fields_csv(const SimulationTrace& trace, const std::string& path) {
  const int n_x = static_cast<int>(trace.x_final.rows());
  std::string out = "t,z";
  for (int k = 1; k <= n_x; ++k) out += ",x_" + std::to_string(k);
  for (int k = 1; k <= n_x; ++k) out += ",xhat_" + std::to_string(k);
  out += "\n";
  auto emit = [&](double t, const Matrix& x, const Matrix& xh) {
    for (int i = 0; i < x.cols(); ++i) {
      append_number(out, t);
      out += ',';
      append_number(out, (i + 0.5) * trace.dz);
      for (int k = 0; k < n_x; ++k) {
        out += ',';
        append_number(out, x(k, i));
      }
      for (int k = 0; k < n_x; ++k) {
        out += ',';
        append_number(out, xh(k, i));
      }
      out += '\n';
    }
  };
  if (!trace.x_snapshots.empty()) {
    for (size_t s = 0; s < trace.x_snapshots.size(); ++s)
      emit(trace.snapshot_t[s], trace.x_snapshots[s], trace.xhat_snapshots[s]);
  } else if (trace.x_final.size() > 0 && !trace.t.empty()) {
    emit(trace.t.back(), trace.x_final, trace.xhat_final);
  }
  write_text_file(path, out);
}

}  // namespace uio
