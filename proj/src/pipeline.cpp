#include "uio/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "uio/errors.hpp"

namespace uio {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

std::string plant_summary(const ProblemConfig& cfg) {
  const PlantSpec& p = cfg.plant;
  std::string s;
  s += "problem: " + cfg.name + "\n";
  s += "dimensions: n_x=" + std::to_string(p.nx()) +
       " n_chi=" + std::to_string(p.nchi()) + " n_u=" + std::to_string(p.nu()) +
       " n_w=" + std::to_string(p.nw()) + " n_y1=" + std::to_string(p.ny1()) +
       " n_y2=" + std::to_string(p.ny2()) + "\n";
  s += "transport speeds: " + p.Lambda.label() + "\n";
  s += "nonlinearity: " + p.nonlinearity.name + "\n";
  return s;
}

std::string attempts_table(const std::vector<SolveAttempt>& attempts) {
  std::string s = "search attempts:\n";
  for (const auto& a : attempts) {
    s += "  mu=" + fmt(a.mu, "%-10.5g");
    s += std::isnan(a.theta) ? " theta=-         " : " theta=" + fmt(a.theta, "%-10.5g");
    s += " " + a.status;
    if (a.slack != 0.0) s += " (slack " + fmt(a.slack) + ")";
    s += "\n";
  }
  return s;
}

std::string verification_summary(const VerificationReport& v) {
  std::string s = "independent sweep (" + std::to_string(v.points) + " points): " +
                  (v.pass ? "pass" : "FAIL") + ", margin " + fmt(v.margin) + "\n";
  for (const auto& c : v.conditions) {
    s += "  " + c.name + ": margin " + fmt(c.margin);
    if (c.worst_z >= 0.0) s += " at z=" + fmt(c.worst_z);
    if (c.first_violation_z >= 0.0)
      s += ", first violation at z=" + fmt(c.first_violation_z);
    s += "\n";
  }
  return s;
}

void audit_gain_tuple(const PlantSpec& plant, const ObserverGains& g) {
  const int n_chi = plant.nchi();
  if (g.H.rows() != n_chi || g.H.cols() != plant.ny1() || g.R.rows() != n_chi ||
      g.R.cols() != n_chi || g.F.rows() != n_chi || g.F.cols() != n_chi ||
      g.K1.rows() != n_chi || g.K1.cols() != plant.ny1() || g.K.rows() != n_chi ||
      g.L.rows() != n_chi || g.L.cols() != plant.ny2())
    throw ValidationError("stored gains: shapes do not match the configured plant");
  const double tol = 1e-9 * (1.0 + plant.coefficient_scale());
  const Matrix CM = plant.C * plant.M;
  const Matrix I = Matrix::Identity(n_chi, n_chi);
  if (max_abs(g.R - (I - g.H * CM)) > tol)
    throw ValidationError("stored gains: R does not equal I - H C M");
  if (max_abs(g.F - (g.R * plant.A - g.K1 * CM)) > tol)
    throw ValidationError("stored gains: F does not equal R A - K1 C M");
  if (max_abs(g.K2 - g.F * g.H) > tol)
    throw ValidationError("stored gains: K2 does not equal F H");
  if (max_abs(g.K - (g.K1 + g.K2)) > tol)
    throw ValidationError("stored gains: K does not equal K1 + K2");
  ResidualMatrices res = residual_matrices(plant, g);
  if (max_abs(res.Gw) > tol)
    throw ValidationError("stored gains: unknown-input leakage (I - H C M) E is nonzero");
  if (max_abs(res.Gu) > tol)
    throw ValidationError("stored gains: known-input mismatch (I - R - H C M) B is nonzero");
}

std::string decay_summary(const std::vector<double>& series,
                          const std::vector<double>& times, const std::string& label) {
  DecayDiagnostics d = decay_diagnostics(series, times);
  std::string s;
  s += label + " initial " + fmt(series.front()) + ", final " + fmt(series.back()) +
       ", ratio " + fmt(d.terminal_initial_ratio) + "\n";
  if (d.rate_valid)
    s += label + " fitted decay rate over the final half: " + fmt(d.fitted_rate) + "\n";
  s += label + " rises above the 0.1% band: " + std::to_string(d.violation_count) +
       " of " + std::to_string(series.size() - 1) + " steps";
  if (d.nonpositive_count > 0)
    s += " (" + std::to_string(d.nonpositive_count) + " non-positive entries)";
  s += "\n";
  return s;
}

SimulationInputs make_inputs(const ProblemConfig& cfg) {
  SimulationInputs in;
  in.u = cfg.u;
  in.w = cfg.w;
  in.initial = cfg.initial;
  in.grid = cfg.grid;
  return in;
}

std::string simulate_and_report(const ProblemConfig& cfg, const ObserverGains& gains,
                                const StabilityCertificate* cert,
                                const std::string& output_dir, RunReport& report) {
  report.trace = simulate(cfg.plant, gains, make_inputs(cfg), cert);
  const SimulationTrace& tr = report.trace;
  std::string s;
  s += "scheme " + to_string(tr.scheme) + ", cells " + std::to_string(tr.cells) +
       ", dt " + fmt(tr.dt) + ", steps " + std::to_string(tr.t.size() - 1) + "\n";
  s += decay_summary(tr.err_sq, tr.t, "err_sq");
  if (!tr.lyap.empty()) s += decay_summary(tr.lyap, tr.t, tr.lyap_name);
  std::filesystem::create_directories(output_dir);
  const std::string trace_path = output_dir + "/trace.csv";
  write_trace_csv(tr, trace_path);
  s += "wrote " + trace_path + "\n";
  if (tr.snapshot_stride > 0) {
    const std::string fields_path = output_dir + "/fields.csv";
    write_fields_csv(tr, fields_path);
    s += "wrote " + fields_path + "\n";
  }
  return s;
}

}  // namespace

RunReport run_design(const ProblemConfig& cfg, const std::string& output_dir) {
  RunReport report;
  cfg.plant.validate();
  std::string s = plant_summary(cfg);

  DecoupledData dd = make_decoupled_data(cfg.plant);
  s += cfg.plant.nw() == 0
           ? "no unknown input columns; feedthrough H = 0\n"
           : "input decoupling rank condition holds; H computed\n";
  PbhResult pbh = pbh_detectability(dd.RA, dd.CM);
  if (pbh.detectable) {
    s += "pair (R A, C M) detectable; designing with free inflow injection\n";
  } else {
    s += "pair (R A, C M) not detectable; offending eigenvalues:";
    for (const auto& ev : pbh.offending)
      s += " " + fmt(ev.real()) + (ev.imag() >= 0 ? "+" : "-") +
           fmt(std::abs(ev.imag())) + "i";
    s += "\nusing the cross-weighted design with K1 = 0\n";
  }

  report.synthesis = pbh.detectable ? solve_detectable(cfg.plant, cfg.synthesis)
                                    : solve_nondetectable(cfg.plant, cfg.synthesis);
  const SynthesisResult& res = report.synthesis;
  report.verification = res.verification;
  s += attempts_table(res.attempts);

  if (!res.feasible) {
    s += "design infeasible: " + res.message + "\n";
    report.exit_code = kExitInfeasible;
    report.text = s;
    std::filesystem::create_directories(output_dir);
    write_text_file(output_dir + "/report.txt", s);
    return report;
  }

  const StabilityCertificate& cert = res.certificate;
  s += "selected mu=" + fmt(cert.mu);
  if (cert.mode == CertificateMode::Nondetectable) s += ", theta=" + fmt(cert.theta);
  s += ", kappa=" + fmt(cert.kappa) + ", epsilon=" + fmt(res.epsilon) +
       ", design slack " + fmt(cert.design_slack) + "\n";
  s += verification_summary(res.verification);

  std::filesystem::create_directories(output_dir);
  save_gains(res.gains, output_dir + "/gains.json");
  save_certificate(cert, output_dir + "/certificate.json");
  s += "wrote " + output_dir + "/gains.json\n";
  s += "wrote " + output_dir + "/certificate.json\n";
  write_text_file(output_dir + "/report.txt", s);
  report.text = s;
  return report;
}

RunReport run_verify(const ProblemConfig& cfg, const std::string& gains_path,
                     const std::string& certificate_path) {
  RunReport report;
  cfg.plant.validate();
  ObserverGains gains = load_gains(gains_path);
  audit_gain_tuple(cfg.plant, gains);
  StabilityCertificate cert = load_certificate(certificate_path);

  std::string s = plant_summary(cfg);
  s += "gain algebra consistent with the configured plant\n";
  report.verification = verify_certificate(cfg.plant, gains, cert,
                                           cfg.synthesis.verify_points, 0.0);
  s += verification_summary(report.verification);
  if (!report.verification.pass) report.exit_code = kExitVerifyFailed;
  report.text = s;
  return report;
}

RunReport run_simulate(const ProblemConfig& cfg, const std::string& gains_path,
                       const std::string& certificate_path,
                       const std::string& output_dir) {
  RunReport report;
  cfg.plant.validate();
  ObserverGains gains = load_gains(gains_path);
  audit_gain_tuple(cfg.plant, gains);
  StabilityCertificate cert;
  const StabilityCertificate* cert_ptr = nullptr;
  if (!certificate_path.empty()) {
    cert = load_certificate(certificate_path);
    cert_ptr = &cert;
  }
  std::string s = plant_summary(cfg);
  s += simulate_and_report(cfg, gains, cert_ptr, output_dir, report);
  write_text_file(output_dir + "/report.txt", s);
  report.text = s;
  return report;
}

RunReport run_demo(const ProblemConfig& cfg, const std::string& output_dir) {
  RunReport report = run_design(cfg, output_dir);
  if (report.exit_code != kExitOk) return report;
  std::string s = report.text;
  s += simulate_and_report(cfg, report.synthesis.gains, &report.synthesis.certificate,
                           output_dir, report);
  write_text_file(output_dir + "/report.txt", s);
  report.text = s;
  return report;
}

RunReport run_sweep_mu(const ProblemConfig& cfg) {
  RunReport report;
  cfg.plant.validate();
  DecoupledData dd = make_decoupled_data(cfg.plant);
  PbhResult pbh = pbh_detectability(dd.RA, dd.CM);

  std::string s = plant_summary(cfg);
  s += pbh.detectable ? "branch: detectable\n" : "branch: non-detectable (K1 = 0)\n";
  for (double mu : cfg.synthesis.mu_grid) {
    SynthesisOptions opt = cfg.synthesis;
    opt.mu_grid = {mu};
    opt.best_margin = false;
    SynthesisResult res = pbh.detectable ? solve_detectable(cfg.plant, opt)
                                         : solve_nondetectable(cfg.plant, opt);
    s += "  mu=" + fmt(mu, "%-10.5g");
    if (res.feasible) {
      s += " feasible";
      if (res.certificate.mode == CertificateMode::Nondetectable)
        s += " at theta=" + fmt(res.certificate.theta);
      s += ", verified margin " + fmt(res.verification.margin);
    } else {
      s += " infeasible";
    }
    s += "\n";
  }
  report.text = s;
  return report;
}

}  // namespace uio
