#pragma once

#include <functional>
#include <string>
#include <vector>

#include "uio/certificate.hpp"
#include "uio/decoupling.hpp"
#include "uio/plant.hpp"

namespace uio {

enum class Scheme {
  Upwind1,         // first-order upwind in advective form
  LaxFriedrichs2,  // two-step (Richtmyer) second-order variant
};

std::string to_string(Scheme s);

struct GridSpec {
  int cells = 200;
  double t_final = 20.0;
  double cfl = 0.9;  // dt = cfl * dz / max transport speed, in (0, 1]
  Scheme scheme = Scheme::Upwind1;
  int snapshot_stride = 0;  // 0 disables field snapshots
};

/// One component of a vector-valued time signal.
struct SignalComponent {
  enum class Kind { Constant, Sinusoid, Table };
  Kind kind = Kind::Constant;
  double value = 0.0;  // Constant
  double amplitude = 0.0, frequency = 0.0, phase = 0.0;  // Sinusoid
  bool cosine = false;  // sinusoid flavor: amplitude*cos(f t + phase) instead of sin
  std::vector<double> t_samples, v_samples;  // Table, linear interp, clamped ends

  double eval(double t) const;
};

struct SignalSpec {
  std::vector<SignalComponent> components;

  static SignalSpec zero(int n);
  static SignalSpec sinusoid(double amplitude, double frequency, double phase = 0.0,
                             bool cosine = false);
  int dim() const { return static_cast<int>(components.size()); }
  Vector eval(double t) const;
};

struct InitialData {
  std::function<Vector(double)> x0;     // plant field profile over z
  Vector chi0;                          // plant ODE state
  std::function<Vector(double)> xhat0;  // observer field profile
  Vector chihat0;                       // observer ODE estimate
};

struct SimulationTrace {
  std::vector<double> t;
  std::vector<double> err_sq;       // ||eps_x||^2 + |eps_chi|^2 per step
  std::vector<double> eps_chi_sq;
  std::vector<double> lyap;         // V or W series; empty without a certificate
  std::string lyap_name;            // "V", "W", or ""
  Matrix chi, chi_hat, psi;         // n_chi x (steps+1)
  Matrix x_final, xhat_final;       // fields at the final time
  double dz = 0.0, dt = 0.0;
  Scheme scheme = Scheme::Upwind1;
  int cells = 0;
  int snapshot_stride = 0;
  std::vector<double> snapshot_t;
  std::vector<Matrix> x_snapshots, xhat_snapshots;
};

/// One explicit step of   d_t x + Lambda(z) d_z x + source(x) = 0   on the
/// cell-centered grid (cell i at z = (i + 1/2) dz). inflow supplies the ghost
/// state at z = 0; the outflow side extrapolates. Throws NumericFault on CFL
/// violation or non-finite data.
Matrix step_pde(const Matrix& field, const LambdaField& Lambda,
                const std::function<Vector(const Vector&)>& source, double dt,
                double dz, const Vector& inflow, Scheme scheme);

struct SimulationInputs {
  SignalSpec u, w;
  InitialData initial;
  GridSpec grid;
};

/// Co-simulates plant and observer: both fields advance with the same scheme,
/// the ODE pair (chi, psi) advances with classical RK4 using boundary traces
/// frozen at the step start, and chi_hat = psi + H y1 throughout. When a
/// certificate is supplied the matching functional (V or W) is recorded.
SimulationTrace simulate(const PlantSpec& plant, const ObserverGains& gains,
                         const SimulationInputs& inputs,
                         const StabilityCertificate* certificate = nullptr);

/// Midpoint-rule squared error norm: sum_i |eps_i|^2 dz + |eps_chi|^2.
double error_norm_sq(const Matrix& eps_field, const Vector& eps_chi, double dz);

/// Diagonal-weight functional: integral of exp(-mu z) eps' Lambda^{-1} P eps
/// plus eps_chi' Q eps_chi, by the midpoint rule on the cell grid.
double evaluate_V(const Matrix& eps_field, const Vector& eps_chi, const Vector& P,
                  const Matrix& Q, double mu, const LambdaField& Lambda);

/// Cross-weighted functional; requires the z-resolved weight matrix to be
/// positive definite at every cell (checked; NumericFault otherwise).
double evaluate_W(const Matrix& eps_field, const Vector& eps_chi, const Vector& P,
                  const Matrix& Q, const Matrix& Y, double mu,
                  const LambdaField& Lambda);

struct DecayDiagnostics {
  int violation_count = 0;  // steps increasing by more than 0.1% relative
  double terminal_initial_ratio = 0.0;
  double fitted_rate = 0.0;  // least-squares slope of log(series) over the final half
  bool rate_valid = false;
  int nonpositive_count = 0;  // entries where the log is undefined (reported, not fatal)
};

DecayDiagnostics decay_diagnostics(const std::vector<double>& series,
                                   const std::vector<double>& times);

}  // namespace uio
