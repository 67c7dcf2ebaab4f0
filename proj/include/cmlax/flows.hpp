#pragma once

// Time evolution: exact matrix flows of the trace Hamiltonians, the
// eigenvalue projection method, and fixed-step RK4 Hamiltonian flows.

#include <cstdint>
#include <vector>

#include "cmlax/ham.hpp"

namespace cmlax
{

enum class FlowMethod
{
  Exact,
  RK4
};

struct FlowSpec
{
  HamiltonianSpec hamiltonian = HamiltonianSpec::trace(2);
  FlowMethod method = FlowMethod::RK4;
  double t_final = 1.0;
  double dt = 1.0e-3;
  int record_every = 1;
  /// Allowed drift of logged invariants; beyond 10x the run fails with StepError.
  double drift_tolerance = 1.0e-6;
  GradientOptions gradient{1.0e-6, 1.0e-4, true, {}};

  void validate() const;
};

struct TrajectoryOptions
{
  std::vector<HamiltonianSpec> invariants;
  std::vector<Complex> z_grid;
  std::uint64_t seed = 0;
  double moment_tolerance = 1.0e-7;
};

struct Trajectory
{
  std::vector<double> times;
  std::vector<PhasePoint> states;
  std::vector<HamiltonianSpec> invariants;
  std::vector<std::vector<Complex>> invariant_values;  // [time][invariant]
  std::vector<Complex> z_grid;
  std::vector<SpectralRecord> spectral;  // one per time when z_grid is set
  std::vector<double> moment_residuals;  // quiver runs only
  std::uint64_t seed = 0;
  bool drifted = false;

  double max_invariant_drift() const;
  double max_spectral_drift() const;
  double max_moment_residual() const;
};

namespace flows
{

/// X -> X + t Y^i; flow of (1/(i+1)) tr Y^{i+1}. i = 0 is the flow of tr Y.
QuiverDatum exact_flow_rational(const QuiverDatum &d, int i, double t);

/// X -> X exp(t Y^i), u -> exp(-t Y^i) u, v -> v exp(t Y^i).
QuiverDatum exact_flow_trig(const QuiverDatum &d, int i, double t);

QuiverDatum exact_flow(const QuiverDatum &d, int i, double t);

/// Eigenvalues of X(t) under the exact flow, sorted by (real, imag). Defined
/// through collisions.
std::vector<CVector> eigenvalue_projection(const QuiverDatum &d, int i,
                                           const std::vector<double> &times);

/// Hamiltonian vector field in canonical coordinates.
Canonical velocity(const HamiltonianSpec &h, const PhasePoint &x, const GradientOptions &opts);

Trajectory ode_flow(const PhasePoint &start, const FlowSpec &spec,
                    const TrajectoryOptions &options = {});

/// ode_flow of the zeta-shifted residue Hamiltonian ResidueAtB(i).
Trajectory spin_hierarchy_flow(const PhasePoint &start, int i, FlowSpec spec,
                               const TrajectoryOptions &options = {});

}  // namespace flows

}  // namespace cmlax
