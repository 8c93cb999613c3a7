#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "uio/config.hpp"
#include "uio/errors.hpp"
#include "uio/pipeline.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string example;
  int cells = 0;
  double t_final = 0.0;
  double cfl = 0.0;
  std::string scheme;
  int snapshot_stride = -1;

  void attach(CLI::App* cmd, bool with_grid_overrides = true) {
    cmd->add_option("--config", config_path, "problem description (JSON)");
    cmd->add_option("--example", example, "builtin setup: example1 or example2");
    if (with_grid_overrides) {
      cmd->add_option("--cells", cells, "override grid.cells");
      cmd->add_option("--t-final", t_final, "override grid.t_final");
      cmd->add_option("--cfl", cfl, "override grid.cfl");
      cmd->add_option("--scheme", scheme,
                      "override grid.scheme (upwind1 | lax_friedrichs2)");
      cmd->add_option("--snapshot-stride", snapshot_stride,
                      "override grid.snapshot_stride (0 disables)");
    }
  }

  uio::ProblemConfig load() const {
    if (config_path.empty() && example.empty())
      throw uio::ValidationError("pass --config <file> or --example <name>");
    if (!config_path.empty() && !example.empty())
      throw uio::ValidationError("--config and --example are mutually exclusive");
    uio::ProblemConfig cfg = config_path.empty() ? uio::builtin_config(example)
                                                 : uio::load_config(config_path);
    if (cells > 0) cfg.grid.cells = cells;
    if (t_final > 0.0) cfg.grid.t_final = t_final;
    if (cfl > 0.0) cfg.grid.cfl = cfl;
    if (!scheme.empty()) {
      if (scheme == "upwind1")
        cfg.grid.scheme = uio::Scheme::Upwind1;
      else if (scheme == "lax_friedrichs2")
        cfg.grid.scheme = uio::Scheme::LaxFriedrichs2;
      else
        throw uio::ValidationError("--scheme must be upwind1 or lax_friedrichs2");
    }
    if (snapshot_stride >= 0) cfg.grid.snapshot_stride = snapshot_stride;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"design, certify, and simulate unknown-input observers for "
               "transport systems with boundary dynamics"};
  app.require_subcommand(1);

  CommonOpts design_opts, verify_opts, sim_opts, demo_opts, sweep_opts;
  std::string design_out = "uio_out", sim_out = "uio_out", demo_out;
  std::string verify_gains, verify_cert, sim_gains, sim_cert, demo_example;

  CLI::App* design = app.add_subcommand("design", "compute gains and a certificate");
  design_opts.attach(design, false);
  design->add_option("--output", design_out, "artifact directory");

  CLI::App* verify = app.add_subcommand("verify", "re-check stored gains and certificate");
  verify_opts.attach(verify, false);
  verify->add_option("--gains", verify_gains, "gains.json path")->required();
  verify->add_option("--certificate", verify_cert, "certificate.json path")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "co-simulate plant and observer");
  sim_opts.attach(simulate);
  simulate->add_option("--gains", sim_gains, "gains.json path")->required();
  simulate->add_option("--certificate", sim_cert,
                       "certificate.json path (enables the Lyapunov trace)");
  simulate->add_option("--output", sim_out, "artifact directory");

  CLI::App* demo = app.add_subcommand("demo", "design then simulate in one run");
  demo->add_option("name", demo_example, "builtin setup: example1 or example2");
  demo_opts.attach(demo);
  demo->add_option("--output", demo_out, "artifact directory");

  CLI::App* sweep = app.add_subcommand("sweep-mu", "feasibility across the mu grid");
  sweep_opts.attach(sweep, false);

  CLI11_PARSE(app, argc, argv);

  try {
    uio::RunReport report;
    if (design->parsed()) {
      report = uio::run_design(design_opts.load(), design_out);
    } else if (verify->parsed()) {
      report = uio::run_verify(verify_opts.load(), verify_gains, verify_cert);
    } else if (simulate->parsed()) {
      report = uio::run_simulate(sim_opts.load(), sim_gains, sim_cert, sim_out);
    } else if (demo->parsed()) {
      if (!demo_example.empty()) {
        if (!demo_opts.example.empty() || !demo_opts.config_path.empty())
          throw uio::ValidationError("demo takes either a name or --config, not both");
        demo_opts.example = demo_example;
      }
      if (demo_out.empty())
        demo_out = "uio_demo_" + (demo_opts.example.empty() ? std::string("custom")
                                                            : demo_opts.example);
      report = uio::run_demo(demo_opts.load(), demo_out);
    } else {
      report = uio::run_sweep_mu(sweep_opts.load());
    }
    std::cout << report.text;
    return report.exit_code;
  } catch (const uio::NumericFault& e) {
    std::cerr << "numeric fault: " << e.what() << "\n";
    return uio::kExitNumericFault;
  } catch (const uio::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return uio::kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return uio::kExitInvalid;
  }
}
