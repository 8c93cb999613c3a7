#include "uio/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "uio/errors.hpp"

namespace uio {

std::string to_string(Scheme s) {
  return s == Scheme::Upwind1 ? "upwind1" : "lax_friedrichs2";
}

double SignalComponent::eval(double t) const {
  switch (kind) {
    case Kind::Constant:
      return value;
    case Kind::Sinusoid:
      return cosine ? amplitude * std::cos(frequency * t + phase)
                    : amplitude * std::sin(frequency * t + phase);
    case Kind::Table: {
      if (t_samples.empty()) return 0.0;
      if (t <= t_samples.front()) return v_samples.front();
      if (t >= t_samples.back()) return v_samples.back();
      auto it = std::upper_bound(t_samples.begin(), t_samples.end(), t);
      size_t hi = it - t_samples.begin();
      size_t lo = hi - 1;
      double f = (t - t_samples[lo]) / (t_samples[hi] - t_samples[lo]);
      return (1.0 - f) * v_samples[lo] + f * v_samples[hi];
    }
  }
  return 0.0;
}

SignalSpec SignalSpec::zero(int n) {
  SignalSpec s;
  s.components.resize(n);
  return s;
}

SignalSpec SignalSpec::sinusoid(double amplitude, double frequency, double phase,
                                bool cosine) {
  SignalComponent c;
  c.kind = SignalComponent::Kind::Sinusoid;
  c.amplitude = amplitude;
  c.frequency = frequency;
  c.phase = phase;
  c.cosine = cosine;
  SignalSpec s;
  s.components.push_back(c);
  return s;
}

Vector SignalSpec::eval(double t) const {
  Vector v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = components[i].eval(t);
  return v;
}

namespace {

// Precomputed transport tables shared by both fields; the arithmetic matches
// step_pde exactly so the public op and the co-simulation agree bitwise.
struct TransportTables {
  Matrix lam_center;     // n_x x N
  Matrix lam_interface;  // n_x x (N+1)
  double max_speed = 0.0;
};

TransportTables make_tables(const LambdaField& Lambda, int cells, double dz) {
  TransportTables t;
  const int n_x = Lambda.size();
  t.lam_center.resize(n_x, cells);
  t.lam_interface.resize(n_x, cells + 1);
  for (int i = 0; i < cells; ++i)
    t.lam_center.col(i) = Lambda.diag_at((i + 0.5) * dz);
  for (int j = 0; j <= cells; ++j)
    t.lam_interface.col(j) = Lambda.diag_at(j * dz);
  t.max_speed = std::max(t.lam_center.maxCoeff(), t.lam_interface.maxCoeff());
  return t;
}

Matrix advance_field(const Matrix& field, const TransportTables& tables,
                     const std::function<Vector(const Vector&)>& source, double dt,
                     double dz, const Vector& inflow, Scheme scheme) {
  const int N = static_cast<int>(field.cols());
  const double r = dt / dz;
  Matrix out(field.rows(), N);
  if (scheme == Scheme::Upwind1) {
    for (int i = 0; i < N; ++i) {
      const auto left = i == 0 ? inflow : Vector(field.col(i - 1));
      out.col(i) = field.col(i) -
                   r * tables.lam_center.col(i).cwiseProduct(field.col(i) - left) -
                   dt * source(field.col(i));
    }
  } else {
    // interface half states, ghost cells by inflow value / outflow extrapolation
    Matrix half(field.rows(), N + 1);
    for (int j = 0; j <= N; ++j) {
      const Vector& left = j == 0 ? inflow : Vector(field.col(j - 1));
      const Vector& right = j == N ? Vector(field.col(N - 1)) : Vector(field.col(j));
      Vector avg = 0.5 * (left + right);
      half.col(j) = avg -
                    0.5 * r * tables.lam_interface.col(j).cwiseProduct(right - left) -
                    0.5 * dt * source(avg);
    }
    for (int i = 0; i < N; ++i) {
      Vector mid = 0.5 * (half.col(i) + half.col(i + 1));
      out.col(i) = field.col(i) -
                   r * tables.lam_center.col(i).cwiseProduct(half.col(i + 1) - half.col(i)) -
                   dt * source(mid);
    }
  }
  return out;
}

}  // namespace

Matrix step_pde(const Matrix& field, const LambdaField& Lambda,
                const std::function<Vector(const Vector&)>& source, double dt,
                double dz, const Vector& inflow, Scheme scheme) {
  if (field.rows() != Lambda.size())
    throw ValidationError("step_pde: field rows must match the transport dimension");
  if (inflow.size() != field.rows())
    throw ValidationError("step_pde: inflow size must match field rows");
  if (!(dt > 0.0) || !(dz > 0.0))
    throw ValidationError("step_pde: dt and dz must be positive");
  if (!field.allFinite() || !inflow.allFinite())
    throw NumericFault("step_pde: non-finite field or inflow");

  TransportTables tables = make_tables(Lambda, static_cast<int>(field.cols()), dz);
  if (dt * tables.max_speed / dz > 1.0 + 1e-12)
    throw NumericFault("step_pde: CFL violation, dt*max_speed/dz = " +
                       std::to_string(dt * tables.max_speed / dz));
  return advance_field(field, tables, source, dt, dz, inflow, scheme);
}

SimulationTrace simulate(const PlantSpec& plant, const ObserverGains& gains,
                         const SimulationInputs& in,
                         const StabilityCertificate* certificate) {
  plant.validate();
  const int n_x = plant.nx(), n_chi = plant.nchi(), N = in.grid.cells;
  if (N < 2) throw ValidationError("simulate: need at least 2 cells");
  if (!(in.grid.cfl > 0.0) || in.grid.cfl > 1.0)
    throw ValidationError("simulate: cfl must lie in (0, 1]");
  if (!(in.grid.t_final > 0.0)) throw ValidationError("simulate: t_final must be positive");
  if (in.u.dim() != plant.nu())
    throw ValidationError("simulate: u signal dimension must match columns of B");
  if (in.w.dim() != plant.nw())
    throw ValidationError("simulate: w signal dimension must match columns of E");
  if (in.initial.chi0.size() != n_chi || in.initial.chihat0.size() != n_chi)
    throw ValidationError("simulate: chi0 and chihat0 must have the ODE dimension");
  if (!in.initial.x0 || !in.initial.xhat0)
    throw ValidationError("simulate: initial field profiles missing");
  if (gains.H.rows() != n_chi || gains.F.rows() != n_chi || gains.R.rows() != n_chi)
    throw ValidationError("simulate: gain shapes do not match the plant");

  const double dz = 1.0 / N;
  TransportTables tables = make_tables(plant.Lambda, N, dz);
  const double dt_raw = in.grid.cfl * dz / tables.max_speed;
  const int n_steps = static_cast<int>(std::ceil(in.grid.t_final / dt_raw - 1e-12));
  const double dt = in.grid.t_final / n_steps;

  const Matrix CM = plant.C * plant.M;
  const Matrix RB = gains.R * plant.B;
  auto source = [&plant](const Vector& x) -> Vector {
    return plant.S * plant.nonlinearity.f(plant.T * x);
  };

  Matrix x(n_x, N), xh(n_x, N);
  for (int i = 0; i < N; ++i) {
    double z = (i + 0.5) * dz;
    x.col(i) = in.initial.x0(z);
    xh.col(i) = in.initial.xhat0(z);
  }
  Vector chi = in.initial.chi0;
  Vector psi = in.initial.chihat0 - gains.H * (plant.C * in.initial.x0(0.0));

  // Lyapunov weights per cell, when a certificate is supplied
  std::vector<Vector> v_weight;       // detectable: diagonal weights
  std::vector<Vector> w_diag;         // non-detectable: field block diagonal
  std::vector<Matrix> w_cross;        // non-detectable: field/ODE coupling
  bool track_v = false, track_w = false;
  if (certificate) {
    certificate->validate();
    if (certificate->P.size() != n_x || certificate->Q.rows() != n_chi)
      throw ValidationError("simulate: certificate dimensions do not match the plant");
    if (certificate->mode == CertificateMode::Detectable) {
      track_v = true;
      v_weight.resize(N);
      for (int i = 0; i < N; ++i) {
        double z = (i + 0.5) * dz;
        Vector lam = tables.lam_center.col(i);
        v_weight[i] =
            (std::exp(-certificate->mu * z) * certificate->P.array() / lam.array())
                .matrix();
      }
    } else {
      track_w = true;
      w_diag.resize(N);
      w_cross.resize(N);
      for (int i = 0; i < N; ++i) {
        double z = (i + 0.5) * dz;
        Vector lam = tables.lam_center.col(i);
        Vector dinv = lam.cwiseInverse();
        w_diag[i] =
            (std::exp(-certificate->mu * z) * certificate->P.array() * dinv.array())
                .matrix();
        w_cross[i] = dinv.asDiagonal() * certificate->Y.transpose();
        Matrix pi(n_x + n_chi, n_x + n_chi);
        pi.topLeftCorner(n_x, n_x) = Matrix(w_diag[i].asDiagonal());
        pi.topRightCorner(n_x, n_chi) = w_cross[i];
        pi.bottomLeftCorner(n_chi, n_x) = w_cross[i].transpose();
        pi.bottomRightCorner(n_chi, n_chi) = certificate->Q;
        if (sym_eig_min(pi) <= 0.0)
          throw NumericFault(
              "simulate: cross-weighted Lyapunov matrix not positive definite at z=" +
              std::to_string(z));
      }
    }
  }

  SimulationTrace trace;
  trace.dz = dz;
  trace.dt = dt;
  trace.cells = N;
  trace.scheme = in.grid.scheme;
  trace.snapshot_stride = in.grid.snapshot_stride;
  trace.lyap_name = track_v ? "V" : track_w ? "W" : "";
  trace.chi.resize(n_chi, n_steps + 1);
  trace.chi_hat.resize(n_chi, n_steps + 1);
  trace.psi.resize(n_chi, n_steps + 1);

  auto record = [&](int step, double t) {
    Vector y1 = CM * chi;
    Vector chihat = psi + gains.H * y1;
    Matrix eps = x - xh;
    Vector eps_chi = chi - chihat;
    trace.t.push_back(t);
    trace.chi.col(step) = chi;
    trace.chi_hat.col(step) = chihat;
    trace.psi.col(step) = psi;
    double esq = 0.0;
    for (int i = 0; i < N; ++i) esq += eps.col(i).squaredNorm();
    esq = esq * dz + eps_chi.squaredNorm();
    trace.err_sq.push_back(esq);
    trace.eps_chi_sq.push_back(eps_chi.squaredNorm());
    if (track_v) {
      double v = 0.0;
      for (int i = 0; i < N; ++i)
        v += eps.col(i).dot(v_weight[i].cwiseProduct(eps.col(i)));
      v = v * dz + eps_chi.dot(certificate->Q * eps_chi);
      trace.lyap.push_back(v);
    } else if (track_w) {
      double wv = 0.0;
      for (int i = 0; i < N; ++i)
        wv += eps.col(i).dot(w_diag[i].cwiseProduct(eps.col(i))) +
              2.0 * eps.col(i).dot(w_cross[i] * eps_chi);
      wv = wv * dz + eps_chi.dot(certificate->Q * eps_chi);
      trace.lyap.push_back(wv);
    }
    if (!std::isfinite(esq))
      throw NumericFault("simulate: non-finite error norm at t=" + std::to_string(t));
    if (in.grid.snapshot_stride > 0 && step % in.grid.snapshot_stride == 0) {
      trace.snapshot_t.push_back(t);
      trace.x_snapshots.push_back(x);
      trace.xhat_snapshots.push_back(xh);
    }
  };

  for (int step = 0; step < n_steps; ++step) {
    const double t = step * dt;
    record(step, t);

    Vector y1 = CM * chi;
    Vector chihat = psi + gains.H * y1;
    Vector dy2 = plant.N * x.col(N - 1) - plant.N * xh.col(N - 1);

    Matrix x_next = advance_field(x, tables, source, dt, dz, plant.M * chi,
                                  in.grid.scheme);
    Matrix xh_next = advance_field(xh, tables, source, dt, dz, plant.M * chihat,
                                   in.grid.scheme);

    // classical RK4 on the stacked ODE pair; boundary traces frozen over the step
    auto deriv = [&](double ts, const Vector& chi_s, const Vector& psi_s,
                     Vector& dchi, Vector& dpsi) {
      Vector u_s = in.u.eval(ts);
      Vector w_s = in.w.eval(ts);
      dchi = plant.A * chi_s + plant.B * u_s + plant.E * w_s;
      dpsi = gains.F * psi_s + RB * u_s + gains.K * (CM * chi_s) + gains.L * dy2;
    };
    Vector k1c(n_chi), k1p(n_chi), k2c(n_chi), k2p(n_chi), k3c(n_chi), k3p(n_chi),
        k4c(n_chi), k4p(n_chi);
    deriv(t, chi, psi, k1c, k1p);
    deriv(t + 0.5 * dt, chi + 0.5 * dt * k1c, psi + 0.5 * dt * k1p, k2c, k2p);
    deriv(t + 0.5 * dt, chi + 0.5 * dt * k2c, psi + 0.5 * dt * k2p, k3c, k3p);
    deriv(t + dt, chi + dt * k3c, psi + dt * k3p, k4c, k4p);
    chi += dt / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
    psi += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    x = std::move(x_next);
    xh = std::move(xh_next);

    if (!x.allFinite() || !xh.allFinite() || !chi.allFinite() || !psi.allFinite())
      throw NumericFault("simulate: non-finite state at t=" +
                         std::to_string(t + dt));
  }
  record(n_steps, in.grid.t_final);
  trace.x_final = x;
  trace.xhat_final = xh;
  return trace;
}

double error_norm_sq(const Matrix& eps_field, const Vector& eps_chi, double dz) {
  double s = 0.0;
  for (int i = 0; i < eps_field.cols(); ++i) s += eps_field.col(i).squaredNorm();
  return s * dz + eps_chi.squaredNorm();
}

double evaluate_V(const Matrix& eps_field, const Vector& eps_chi, const Vector& P,
                  const Matrix& Q, double mu, const LambdaField& Lambda) {
  const int N = static_cast<int>(eps_field.cols());
  if (N == 0) throw ValidationError("evaluate_V: empty field");
  if (eps_field.rows() != P.size() || Lambda.size() != P.size())
    throw ValidationError("evaluate_V: P, Lambda, and field rows must agree");
  if (Q.rows() != eps_chi.size())
    throw ValidationError("evaluate_V: Q size must match eps_chi");
  const double dz = 1.0 / N;
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    double z = (i + 0.5) * dz;
    Vector w = (std::exp(-mu * z) * P.array() / Lambda.diag_at(z).array()).matrix();
    acc += eps_field.col(i).dot(w.cwiseProduct(eps_field.col(i)));
  }
  return acc * dz + eps_chi.dot(Q * eps_chi);
}

double evaluate_W(const Matrix& eps_field, const Vector& eps_chi, const Vector& P,
                  const Matrix& Q, const Matrix& Y, double mu,
                  const LambdaField& Lambda) {
  const int N = static_cast<int>(eps_field.cols());
  if (N == 0) throw ValidationError("evaluate_W: empty field");
  if (eps_field.rows() != P.size() || Lambda.size() != P.size())
    throw ValidationError("evaluate_W: P, Lambda, and field rows must agree");
  if (Q.rows() != eps_chi.size() || Y.rows() != eps_chi.size() ||
      Y.cols() != P.size())
    throw ValidationError("evaluate_W: Q and Y shapes must match the states");
  const double dz = 1.0 / N;
  const int n_x = static_cast<int>(P.size());
  const int n_chi = static_cast<int>(Q.rows());
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    double z = (i + 0.5) * dz;
    Vector dinv = Lambda.diag_at(z).cwiseInverse();
    Vector diag = (std::exp(-mu * z) * P.array() * dinv.array()).matrix();
    Matrix cross = dinv.asDiagonal() * Y.transpose();
    Matrix pi(n_x + n_chi, n_x + n_chi);
    pi.topLeftCorner(n_x, n_x) = Matrix(diag.asDiagonal());
    pi.topRightCorner(n_x, n_chi) = cross;
    pi.bottomLeftCorner(n_chi, n_x) = cross.transpose();
    pi.bottomRightCorner(n_chi, n_chi) = Q;
    if (sym_eig_min(pi) <= 0.0)
      throw NumericFault(
          "evaluate_W: cross-weighted Lyapunov matrix not positive definite at z=" +
          std::to_string(z));
    acc += eps_field.col(i).dot(diag.cwiseProduct(eps_field.col(i))) +
           2.0 * eps_field.col(i).dot(cross * eps_chi);
  }
  return acc * dz + eps_chi.dot(Q * eps_chi);
}

DecayDiagnostics decay_diagnostics(const std::vector<double>& series,
                                   const std::vector<double>& times) {
  if (series.size() != times.size())
    throw ValidationError("decay_diagnostics: series and times must have equal length");
  if (series.size() < 10)
    throw ValidationError("decay_diagnostics: need at least 10 samples");

  DecayDiagnostics d;
  for (size_t i = 0; i + 1 < series.size(); ++i)
    if (series[i + 1] > series[i] + 1e-3 * std::abs(series[i])) ++d.violation_count;
  d.terminal_initial_ratio = series.back() / series.front();

  // least-squares slope of log(series) vs time over the final half
  const size_t start = series.size() / 2;
  double st = 0, sy = 0, stt = 0, sty = 0;
  int m = 0;
  for (size_t i = start; i < series.size(); ++i) {
    if (!(series[i] > 0.0)) {
      ++d.nonpositive_count;
      continue;
    }
    double y = std::log(series[i]);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    ++m;
  }
  if (m >= 2) {
    double denom = m * stt - st * st;
    if (denom > 0.0) {
      d.fitted_rate = (m * sty - st * sy) / denom;
      d.rate_valid = true;
    }
  }
  return d;
}

}  // namespace uio
