#pragma once

// JSON and CSV serialization. Complex numbers are two-element arrays
// [re, im]; matrices are row-major nested arrays.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "cmlax/flows.hpp"

namespace cmlax
{

using Json = nlohmann::json;

/// Parsed simulation / conversion config.
struct RunConfig
{
  Curve curve;
  int n = 0;
  int k = 0;
  std::optional<ParticleState> initial_particle;
  std::optional<QuiverDatum> initial_quiver;
  FlowSpec flow;
  std::vector<HamiltonianSpec> invariants;
  std::vector<Complex> z_grid;
  bool record_spectral = false;
  std::string output_directory = "out";
  std::string output_format = "csv";
  std::uint64_t seed = 0;

  PhasePoint initial() const;
};

namespace io
{

Json to_json(Complex z);
Json to_json(const CVector &v);
Json to_json(const CMatrix &m);
Json to_json(const Curve &c);
Json to_json(const QuiverDatum &d);
Json to_json(const ParticleState &s);
Json to_json(const PhasePoint &x);
Json to_json(const HamiltonianSpec &h);
Json to_json(const FlowSpec &f);
Json to_json(const SpectralRecord &r);
Json to_json(const Trajectory &t);
Json to_json(const RunConfig &c);

// Parsers throw ConfigError naming the offending field (`path`).
Complex complex_from_json(const Json &j, const std::string &path);
CVector vector_from_json(const Json &j, const std::string &path);
CMatrix matrix_from_json(const Json &j, const std::string &path);
Curve curve_from_json(const Json &j, const std::string &path);
QuiverDatum quiver_from_json(const Json &j, const Curve &curve, const std::string &path);
ParticleState particle_from_json(const Json &j, const Curve &curve, const std::string &path);
HamiltonianSpec hamiltonian_from_json(const Json &j, const std::string &path);
FlowSpec flow_from_json(const Json &j, const std::string &path);
RunConfig config_from_json(const Json &j);

/// Reads and parses a config file; ConfigError on I/O or syntax errors.
RunConfig load_config(const std::string &path);

/// Full-precision ("%.17g") float formatting for CSV.
std::string format_double(double x);

void write_trajectory_csv(std::ostream &os, const Trajectory &t);
void write_invariants_csv(std::ostream &os, const Trajectory &t);
void write_spectral_csv(std::ostream &os, const Trajectory &t);
void write_spectral_record_csv(std::ostream &os, const SpectralRecord &r);

/// Column names for a flattened phase point, in the order written to CSV.
std::vector<std::string> state_columns(const PhasePoint &x);

}  // namespace io

}  // namespace cmlax
