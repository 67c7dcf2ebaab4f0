#pragma once

// Phase-space points: unreduced quiver quadruples (X, Y, u, v) and the
// particle chart (q, p, spins), with moment maps and gauge action.

#include "cmlax/specfun.hpp"

namespace cmlax
{

inline constexpr double kCollisionTolerance = 1.0e-9;

/// Matrix quadruple (X, Y, u, v); u is n x k, v is k x n. Only rational and
/// trigonometric curves carry a matrix model.
struct QuiverDatum
{
  Curve curve;
  CMatrix X;
  CMatrix Y;
  CMatrix u;
  CMatrix v;

  int n() const { return static_cast<int>(X.rows()); }
  int k() const { return static_cast<int>(u.cols()); }

  // Throws ConfigError on shape mismatch or an elliptic curve.
  void validate() const;
};

/// Particle chart. Rows of `a` are the spin covectors, rows of `b` the spin
/// vectors; the contraction f_ij is the dot product of a_i and b_j.
struct ParticleState
{
  Curve curve;
  CVector q;
  CVector p;
  CMatrix a;
  CMatrix b;

  int n() const { return static_cast<int>(q.size()); }
  int k() const { return static_cast<int>(a.cols()); }

  CMatrix contractions() const { return a * b.transpose(); }

  void validate() const;
};

class GaugeElement
{
public:
  // Throws SingularMatrixError if |det g| <= tolerance.
  explicit GaugeElement(CMatrix g, double tolerance = 1.0e-12);

  const CMatrix &matrix() const { return g_; }
  const CMatrix &inverse() const { return g_inv_; }

private:
  CMatrix g_;
  CMatrix g_inv_;
};

struct ConstraintCheck
{
  bool on_shell;
  double residual;
};

namespace phase
{

/// [X,Y] + uv (rational) or X^{-1} Y X - Y + uv (trigonometric).
CMatrix moment_map(const QuiverDatum &d);

ConstraintCheck check_constraint(const QuiverDatum &d, double tol);

QuiverDatum gauge_transform(const QuiverDatum &d, const GaugeElement &g);

/// Rescales the spin vectors b_i so that <a_i, b_i> = 1.
/// Throws ConstraintError when some <a_i, b_i> vanishes (e.g. a_i = 0).
ParticleState normalize_spins(const ParticleState &s, double tol = 1.0e-12);

/// Diagonal-gauge (X, Y) built from the raw contractions, without spin
/// normalization. Y_ij = f_ij / (q_j - q_i) (rational) or
/// f_ij x_i / (x_i - x_j) with x = exp(q) (trigonometric).
std::pair<CMatrix, CMatrix> particle_matrices(const ParticleState &s,
                                              double collision_tol = kCollisionTolerance);

/// Diagonal-gauge quadruple. X = diag(q) (rational) or diag(exp q) (trigonometric).
QuiverDatum from_particles(const ParticleState &s,
                           double collision_tol = kCollisionTolerance);

/// Inverse of from_particles up to ordering and per-particle spin scaling.
/// Eigenvalues of X sorted by (real, imag); throws CollisionError when two
/// eigenvalues are closer than collision_tol.
ParticleState to_particles(const QuiverDatum &d, double collision_tol = kCollisionTolerance);

/// Zero diagonal, ones elsewhere.
CMatrix spinless_orbit_matrix(int n);

/// Classical spinless matrices: X = diag(q), Y_ii = p_i, Y_ij = 1/(q_i - q_j).
std::pair<CMatrix, CMatrix> spinless_coordinates(const CVector &q, const CVector &p);

/// Positions as seen by the eigenvalues of X: q (rational) or exp(q) (trigonometric).
Complex group_coordinate(Complex q, Variant v);

}  // namespace phase

}  // namespace cmlax
