#pragma once

// Hamiltonian functions on quiver data and on the particle chart, residue
// (Hitchin-type) Hamiltonians by contour quadrature, canonical coordinates
// and a finite-difference Poisson bracket.

#include <functional>
#include <string>
#include <variant>

#include "cmlax/lax.hpp"

namespace cmlax
{

enum class HamiltonianKind
{
  Trace,       // (1/i) tr Y^i
  ResidueAtB,  // 1/(i+1) Res_0 tr (eta + zeta I)^{i+1}
  ResidueAt,   // 1/(i+1) Res_x tr eta^{i+1}
  ParticleH2   // 1/2 sum p^2 + c sum_{i<j} f_ij f_ji U(q_i - q_j)
};

struct HamiltonianSpec
{
  HamiltonianKind kind = HamiltonianKind::Trace;
  int degree = 2;
  Complex pole{0.0, 0.0};

  static HamiltonianSpec trace(int i) { return {HamiltonianKind::Trace, i, {}}; }
  static HamiltonianSpec residue_at_b(int i) { return {HamiltonianKind::ResidueAtB, i, {}}; }
  static HamiltonianSpec residue_at(Complex x, int i)
  {
    return {HamiltonianKind::ResidueAt, i, x};
  }
  static HamiltonianSpec particle_h2() { return {HamiltonianKind::ParticleH2, 2, {}}; }

  /// Short label, e.g. "trace2", "resb3", "h2".
  std::string name() const;

  // Throws ConfigError for a non-positive degree.
  void validate() const;

  bool operator==(const HamiltonianSpec &) const = default;
};

using PhasePoint = std::variant<QuiverDatum, ParticleState>;

/// Sign c in front of the potential term of the particle Hamiltonian. With
/// Y_ij = f_ij / (q_j - q_i) one has Y_ij Y_ji = -f_ij f_ji / (q_i - q_j)^2,
/// so c = -1 makes particle_h2 equal (1/2) tr Y^2 on converted rational data.
inline constexpr double kPotentialSign = -1.0;

struct QuadratureOptions
{
  double radius = 0.1;
  int samples = 64;
  double tolerance = 1.0e-8;
};

/// Canonical coordinates of a phase point: Q_m is conjugate to P_m, and
/// Hamilton's equations read dQ/dt = sign * dH/dP, dP/dt = -sign * dH/dQ.
///
/// Rational quiver: Q = (X_ab, u_ia), P = (Y_ba, v_ai).
/// Trigonometric quiver: P = (Pc_ba, v_ai) with Y = -X Pc, sign = -1; this makes
/// X^{-1} Y X - Y + uv the equivariant moment map and sends the flow of
/// (1/(i+1)) tr Y^{i+1} to X -> exp(t Y^i) X.
/// Particle chart: Q = (q_i, a_ia), P = (p_i, b_ia), sign = +1.
struct Canonical
{
  CVector Q;
  CVector P;
  double sign = 1.0;
};

struct Gradient
{
  CVector dQ;
  CVector dP;
};

struct GradientOptions
{
  double step = 1.0e-5;
  double richardson_tolerance = 1.0e-4;
  bool use_closed_form = true;
  QuadratureOptions quadrature{};
};

namespace ham
{

Complex trace_hamiltonian(const QuiverDatum &d, int i);

Complex particle_h2(const ParticleState &s);

/// 1/(i+1) * (1/2 pi i) \oint tr L(z)^{i+1} dz around |z - z0| = radius,
/// by the trapezoidal rule. Throws QuadratureError if doubling the number of
/// samples moves the result by more than tolerance * (1 + |result|).
Complex residue_trace_power(const std::function<CMatrix(Complex)> &lax, Complex z0, int i,
                            const QuadratureOptions &opts = {});

/// 1/(i+1) Res_0 tr (eta + zeta I)^{i+1}.
Complex spin_hamiltonian(const QuiverDatum &d, int i, const QuadratureOptions &opts = {});
Complex spin_hamiltonian(const ParticleState &s, int i, const QuadratureOptions &opts = {});

/// 1/(i+1) Res_x tr eta^{i+1} for user-supplied multi-pole data.
Complex framed_hamiltonian(const MultiPoleLax &lax, Complex x, int i,
                           const QuadratureOptions &opts = {});

Complex evaluate(const HamiltonianSpec &h, const QuiverDatum &d,
                 const QuadratureOptions &opts = {});
Complex evaluate(const HamiltonianSpec &h, const ParticleState &s,
                 const QuadratureOptions &opts = {});
Complex evaluate(const HamiltonianSpec &h, const PhasePoint &x,
                 const QuadratureOptions &opts = {});

Canonical to_canonical(const QuiverDatum &d);
Canonical to_canonical(const ParticleState &s);
QuiverDatum from_canonical(const QuiverDatum &like, const CVector &Q, const CVector &P);
ParticleState from_canonical(const ParticleState &like, const CVector &Q, const CVector &P);

/// Gradient in canonical coordinates: closed form for Trace (quiver) and
/// ParticleH2 (particle chart) when allowed, Richardson-extrapolated central
/// differences otherwise. Throws StepError when h and h/2 disagree.
Gradient gradient(const HamiltonianSpec &h, const QuiverDatum &d, const GradientOptions &opts = {});
Gradient gradient(const HamiltonianSpec &h, const ParticleState &s,
                  const GradientOptions &opts = {});

/// {F, G} = sign * sum_m (dF/dQ_m dG/dP_m - dF/dP_m dG/dQ_m), finite-difference gradients.
Complex poisson_bracket(const HamiltonianSpec &f, const HamiltonianSpec &g, const PhasePoint &at,
                        const GradientOptions &opts = {});

}  // namespace ham

}  // namespace cmlax
