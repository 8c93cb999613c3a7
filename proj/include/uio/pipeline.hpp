#pragma once

#include <string>

#include "uio/config.hpp"
#include "uio/simulation.hpp"
#include "uio/synthesis.hpp"

namespace uio {

// Process exit codes shared by the library pipeline and the CLI:
//   0 success, 2 invalid input or violated invariant, 3 design infeasible,
//   4 certificate sweep failure, 5 numeric fault (CFL, non-finite state).
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitVerifyFailed = 4;
inline constexpr int kExitNumericFault = 5;

struct RunReport {
  int exit_code = kExitOk;
  std::string text;
  SynthesisResult synthesis;
  VerificationReport verification;
  SimulationTrace trace;
};

/// Rank gate, detectability branch, grid search, independent sweep; writes
/// gains.json, certificate.json, and report.txt into output_dir.
RunReport run_design(const ProblemConfig& cfg, const std::string& output_dir);

/// Re-checks a stored gain/certificate pair against the configured plant.
/// Inconsistent gain algebra throws ValidationError; a failed sweep returns
/// exit code 4.
RunReport run_verify(const ProblemConfig& cfg, const std::string& gains_path,
                     const std::string& certificate_path);

/// Co-simulates the configured plant with stored gains (certificate optional,
/// enables the Lyapunov trace) and writes trace.csv plus report.txt.
RunReport run_simulate(const ProblemConfig& cfg, const std::string& gains_path,
                       const std::string& certificate_path,
                       const std::string& output_dir);

/// Design followed by simulation with the fresh certificate; the one-command
/// end-to-end path.
RunReport run_demo(const ProblemConfig& cfg, const std::string& output_dir);

/// Feasibility status for every point of the mu grid (and the first feasible
/// theta per mu in non-detectable mode). Never writes files.
RunReport run_sweep_mu(const ProblemConfig& cfg);

}  // namespace uio
