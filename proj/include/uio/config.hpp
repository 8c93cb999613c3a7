#pragma once

#include <string>

#include "json.hpp"
#include "uio/certificate.hpp"
#include "uio/decoupling.hpp"
#include "uio/plant.hpp"
#include "uio/simulation.hpp"
#include "uio/synthesis.hpp"

namespace uio {

struct ProblemConfig {
  std::string name = "custom";
  PlantSpec plant;
  SignalSpec u;
  SignalSpec w;
  InitialData initial;
  GridSpec grid;
  SynthesisOptions synthesis;
};

// Builtin problem setups, addressable from config files via {"base": "<name>"}.
nlohmann::json builtin_config_json(const std::string& name);
ProblemConfig builtin_config(const std::string& name);

ProblemConfig config_from_json(const nlohmann::json& doc);
ProblemConfig load_config(const std::string& path);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j, const std::string& what);

nlohmann::json gains_to_json(const ObserverGains& gains);
ObserverGains gains_from_json(const nlohmann::json& j);
void save_gains(const ObserverGains& gains, const std::string& path);
ObserverGains load_gains(const std::string& path);

nlohmann::json certificate_to_json(const StabilityCertificate& cert);
StabilityCertificate certificate_from_json(const nlohmann::json& j);
void save_certificate(const StabilityCertificate& cert, const std::string& path);
StabilityCertificate load_certificate(const std::string& path);

void write_trace_csv(const SimulationTrace& trace, const std::string& path);
void write_fields_csv(const SimulationTrace& trace, const std::string& path);

}  // namespace uio
