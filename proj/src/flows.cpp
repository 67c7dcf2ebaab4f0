#include "cmlax/flows.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cmlax/errors.hpp"

namespace cmlax
{

namespace
{

CMatrix matrix_power(const CMatrix &m, int power)
{
  CMatrix out = CMatrix::Identity(m.rows(), m.cols());
  for (int e = 0; e < power; ++e)
  {
    out = out * m;
  }
  return out;
}

const QuiverDatum &require_quiver(const PhasePoint &x, const char *what)
{
  if (!std::holds_alternative<QuiverDatum>(x))
  {
    throw ConfigError(std::string(what) + " requires a quiver datum");
  }
  return std::get<QuiverDatum>(x);
}

void check_particle_separation(const ParticleState &s)
{
  for (int i = 0; i < s.n(); ++i)
  {
    for (int j = i + 1; j < s.n(); ++j)
    {
      const bool coincide =
        s.curve.variant == Variant::Trigonometric &&
        std::abs(std::exp(s.q(i)) - std::exp(s.q(j))) <= kCollisionTolerance;
      if (coincide || s.curve.distance_to_singular(s.q(i) - s.q(j)) <= kCollisionTolerance)
      {
        throw CollisionError("particle chart reached a collision");
      }
    }
  }
}

PhasePoint rebuild(const PhasePoint &like, const CVector &Q, const CVector &P)
{
  return std::visit([&](const auto &s) -> PhasePoint { return ham::from_canonical(s, Q, P); },
                    like);
}

class Recorder
{
public:
  Recorder(const TrajectoryOptions &options, Trajectory &out) : options_(options), out_(out)
  {
    out_.invariants = options.invariants;
    out_.z_grid = options.z_grid;
    out_.seed = options.seed;
  }

  void operator()(double t, const PhasePoint &x, const QuadratureOptions &quad)
  {
    out_.times.push_back(t);
    out_.states.push_back(x);
    std::vector<Complex> values;
    values.reserve(options_.invariants.size());
    for (const auto &h : options_.invariants)
    {
      values.push_back(ham::evaluate(h, x, quad));
    }
    out_.invariant_values.push_back(std::move(values));
    if (!options_.z_grid.empty())
    {
      out_.spectral.push_back(std::visit(
        [&](const auto &s) { return lax::spectral_record(s, options_.z_grid); }, x));
    }
    if (const auto *d = std::get_if<QuiverDatum>(&x))
    {
      out_.moment_residuals.push_back(phase::check_constraint(*d, 0.0).residual);
    }
  }

private:
  const TrajectoryOptions &options_;
  Trajectory &out_;
};

void finish(Trajectory &traj, const FlowSpec &spec, const TrajectoryOptions &options)
{
  const double drift = traj.max_invariant_drift();
  if (drift > 10.0 * spec.drift_tolerance)
  {
    throw StepError("invariant drift " + std::to_string(drift) + " exceeds 10x tolerance");
  }
  traj.drifted = drift > spec.drift_tolerance ||
                 (!traj.moment_residuals.empty() &&
                  traj.max_moment_residual() > options.moment_tolerance +
                                                 traj.moment_residuals.front());
}

}  // namespace

void FlowSpec::validate() const
{
  hamiltonian.validate();
  if (!(t_final >= 0.0))
  {
    throw ConfigError("flow: t_final must be non-negative");
  }
  if (!(dt > 0.0))
  {
    throw ConfigError("flow: dt must be positive");
  }
  if (record_every < 1)
  {
    throw ConfigError("flow: record_every must be positive");
  }
}

double Trajectory::max_invariant_drift() const
{
  double worst = 0.0;
  for (const auto &row : invariant_values)
  {
    for (std::size_t j = 0; j < row.size(); ++j)
    {
      worst = std::max(worst, std::abs(row[j] - invariant_values.front()[j]));
    }
  }
  return worst;
}

double Trajectory::max_spectral_drift() const
{
  double worst = 0.0;
  for (const auto &rec : spectral)
  {
    worst = std::max(worst, lax::max_drift(rec, spectral.front()));
  }
  return worst;
}

double Trajectory::max_moment_residual() const
{
  double worst = 0.0;
  for (const double r : moment_residuals)
  {
    worst = std::max(worst, r);
  }
  return worst;
}

namespace flows
{

QuiverDatum exact_flow_rational(const QuiverDatum &d, int i, double t)
{
  d.validate();
  if (d.curve.variant != Variant::Rational)
  {
    throw ConfigError("exact_flow_rational requires a rational datum");
  }
  QuiverDatum out = d;
  out.X += t * matrix_power(d.Y, i);
  return out;
}

QuiverDatum exact_flow_trig(const QuiverDatum &d, int i, double t)
{
  d.validate();
  if (d.curve.variant != Variant::Trigonometric)
  {
    throw ConfigError("exact_flow_trig requires a trigonometric datum");
  }
  const CMatrix generator = t * matrix_power(d.Y, i);
  const CMatrix forward = generator.exp();
  const CMatrix backward = (-generator).exp();
  QuiverDatum out = d;
  out.X = d.X * forward;
  out.u = backward * d.u;
  out.v = d.v * forward;
  return out;
}

QuiverDatum exact_flow(const QuiverDatum &d, int i, double t)
{
  return d.curve.variant == Variant::Trigonometric ? exact_flow_trig(d, i, t)
                                                    : exact_flow_rational(d, i, t);
}

std::vector<CVector> eigenvalue_projection(const QuiverDatum &d, int i,
                                           const std::vector<double> &times)
{
  std::vector<CVector> out;
  out.reserve(times.size());
  for (const double t : times)
  {
    const QuiverDatum moved = exact_flow(d, i, t);
    Eigen::ComplexEigenSolver<CMatrix> es(moved.X, false);
    CVector ev = es.eigenvalues();
    std::sort(ev.begin(), ev.end(), [](const Complex &a, const Complex &b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    out.push_back(std::move(ev));
  }
  return out;
}

Canonical velocity(const HamiltonianSpec &h, const PhasePoint &x, const GradientOptions &opts)
{
  return std::visit(
    [&](const auto &s) {
      const Canonical c = ham::to_canonical(s);
      const Gradient g = ham::gradient(h, s, opts);
      return Canonical{c.sign * g.dP, -c.sign * g.dQ, c.sign};
    },
    x);
}

Trajectory ode_flow(const PhasePoint &start, const FlowSpec &spec,
                    const TrajectoryOptions &options)
{
  spec.validate();
  Trajectory traj;
  Recorder record(options, traj);
  const auto steps = static_cast<long>(std::llround(spec.t_final / spec.dt));
  const QuadratureOptions &quad = spec.gradient.quadrature;

  if (spec.method == FlowMethod::Exact)
  {
    const QuiverDatum &d0 = require_quiver(start, "exact flow");
    if (spec.hamiltonian.kind != HamiltonianKind::Trace)
    {
      throw ConfigError("exact flow is only available for trace Hamiltonians");
    }
    for (long s = 0; s <= steps; ++s)
    {
      if (s % spec.record_every == 0 || s == steps)
      {
        const double t = static_cast<double>(s) * spec.dt;
        record(t, exact_flow(d0, spec.hamiltonian.degree - 1, t), quad);
      }
    }
    finish(traj, spec, options);
    return traj;
  }

  const bool particle = std::holds_alternative<ParticleState>(start);
  PhasePoint x = start;
  Canonical c = std::visit([](const auto &s) { return ham::to_canonical(s); }, start);
  CVector Q = c.Q;
  CVector P = c.P;
  auto field = [&](const CVector &q, const CVector &p) {
    const PhasePoint at = rebuild(start, q, p);
    if (particle)
    {
      check_particle_separation(std::get<ParticleState>(at));
    }
    return velocity(spec.hamiltonian, at, spec.gradient);
  };

  record(0.0, x, quad);
  const double dt = spec.dt;
  for (long s = 1; s <= steps; ++s)
  {
    const Canonical k1 = field(Q, P);
    const Canonical k2 = field(Q + 0.5 * dt * k1.Q, P + 0.5 * dt * k1.P);
    const Canonical k3 = field(Q + 0.5 * dt * k2.Q, P + 0.5 * dt * k2.P);
    const Canonical k4 = field(Q + dt * k3.Q, P + dt * k3.P);
    Q += dt / 6.0 * (k1.Q + 2.0 * k2.Q + 2.0 * k3.Q + k4.Q);
    P += dt / 6.0 * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P);
    if (s % spec.record_every == 0 || s == steps)
    {
      x = rebuild(start, Q, P);
      if (particle)
      {
        check_particle_separation(std::get<ParticleState>(x));
      }
      record(static_cast<double>(s) * dt, x, quad);
    }
  }
  finish(traj, spec, options);
  return traj;
}

Trajectory spin_hierarchy_flow(const PhasePoint &start, int i, FlowSpec spec,
                               const TrajectoryOptions &options)
{
  spec.hamiltonian = HamiltonianSpec::residue_at_b(i);
  spec.method = FlowMethod::RK4;
  return ode_flow(start, spec, options);
}

}  // namespace flows

}  // namespace cmlax
