#include "cmlax/phase.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cmlax/errors.hpp"

namespace cmlax
{

namespace
{

void require_quiver_variant(const Curve &curve)
{
  if (curve.variant == Variant::Elliptic)
  {
    throw ConfigError("the elliptic variant has no quiver model");
  }
}

CMatrix checked_inverse(const CMatrix &m, double tol, const char *what)
{
  Eigen::FullPivLU<CMatrix> lu(m);
  if (!lu.isInvertible() || std::abs(lu.determinant()) <= tol)
  {
    throw SingularMatrixError(std::string(what) + " is not invertible");
  }
  return lu.inverse();
}

}  // namespace

void QuiverDatum::validate() const
{
  require_quiver_variant(curve);
  const auto n = X.rows();
  if (X.cols() != n || Y.rows() != n || Y.cols() != n || u.rows() != n || v.cols() != n ||
      v.rows() != u.cols())
  {
    throw ConfigError("quiver datum: inconsistent matrix shapes");
  }
}

void ParticleState::validate() const
{
  const auto n = q.size();
  if (p.size() != n || a.rows() != n || b.rows() != n || a.cols() != b.cols())
  {
    throw ConfigError("particle state: inconsistent shapes");
  }
  if (curve.variant == Variant::Elliptic)
  {
    curve.require_lattice();
  }
}

GaugeElement::GaugeElement(CMatrix g, double tolerance) : g_(std::move(g))
{
  if (g_.rows() != g_.cols())
  {
    throw ConfigError("gauge element must be square");
  }
  g_inv_ = checked_inverse(g_, tolerance, "gauge element");
}

namespace phase
{

Complex group_coordinate(Complex q, Variant v)
{
  return v == Variant::Trigonometric ? std::exp(q) : q;
}

CMatrix moment_map(const QuiverDatum &d)
{
  d.validate();
  const CMatrix uv = d.u * d.v;
  if (d.curve.variant == Variant::Trigonometric)
  {
    const CMatrix x_inv = checked_inverse(d.X, 1.0e-14, "X");
    return x_inv * d.Y * d.X - d.Y + uv;
  }
  return d.X * d.Y - d.Y * d.X + uv;
}

ConstraintCheck check_constraint(const QuiverDatum &d, double tol)
{
  const CMatrix r = moment_map(d) - CMatrix::Identity(d.n(), d.n());
  const double residual = r.norm();
  return {residual <= tol, residual};
}

QuiverDatum gauge_transform(const QuiverDatum &d, const GaugeElement &g)
{
  d.validate();
  if (g.matrix().rows() != d.n())
  {
    throw ConfigError("gauge element dimension does not match the datum");
  }
  const CMatrix &gm = g.matrix();
  const CMatrix &gi = g.inverse();
  return {d.curve, gm * d.X * gi, gm * d.Y * gi, gm * d.u, d.v * gi};
}

ParticleState normalize_spins(const ParticleState &s, double tol)
{
  s.validate();
  ParticleState out = s;
  for (int i = 0; i < s.n(); ++i)
  {
    const Complex fii = s.a.row(i).cwiseProduct(s.b.row(i)).sum();
    if (std::abs(fii) <= tol)
    {
      if (s.a.row(i).norm() <= tol)
      {
        throw ConstraintError("spin covector a_" + std::to_string(i) +
                              " vanishes; <a_i, b_i> = 1 is unsatisfiable");
      }
      throw ConstraintError("<a_" + std::to_string(i) + ", b_" + std::to_string(i) +
                            "> vanishes; cannot rescale to 1");
    }
    out.b.row(i) /= fii;
  }
  return out;
}

std::pair<CMatrix, CMatrix> particle_matrices(const ParticleState &s, double collision_tol)
{
  s.validate();
  require_quiver_variant(s.curve);
  const Variant variant = s.curve.variant;
  const int n = s.n();

  CVector x(n);
  for (int i = 0; i < n; ++i)
  {
    x(i) = group_coordinate(s.q(i), variant);
  }
  for (int i = 0; i < n; ++i)
  {
    for (int j = i + 1; j < n; ++j)
    {
      if (std::abs(x(i) - x(j)) <= collision_tol)
      {
        throw CollisionError("positions " + std::to_string(i) + " and " + std::to_string(j) +
                             " collide");
      }
    }
  }

  const CMatrix f = s.contractions();
  CMatrix X = x.asDiagonal();
  CMatrix Y = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      if (i == j)
      {
        Y(i, i) = s.p(i);
      }
      else if (variant == Variant::Rational)
      {
        Y(i, j) = f(i, j) / (x(j) - x(i));
      }
      else
      {
        Y(i, j) = f(i, j) * x(i) / (x(i) - x(j));
      }
    }
  }
  return {X, Y};
}

QuiverDatum from_particles(const ParticleState &s, double collision_tol)
{
  s.validate();
  require_quiver_variant(s.curve);
  const ParticleState normalized = normalize_spins(s);
  auto [X, Y] = particle_matrices(normalized, collision_tol);
  return {s.curve, std::move(X), std::move(Y), normalized.a, normalized.b.transpose()};
}

ParticleState to_particles(const QuiverDatum &d, double collision_tol)
{
  d.validate();
  const int n = d.n();
  Eigen::ComplexEigenSolver<CMatrix> es(d.X, true);
  if (es.info() != Eigen::Success)
  {
    throw CollisionError("eigendecomposition of X failed");
  }
  const CVector lambda = es.eigenvalues();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (lambda(i).real() != lambda(j).real())
    {
      return lambda(i).real() < lambda(j).real();
    }
    return lambda(i).imag() < lambda(j).imag();
  });

  CMatrix V(n, n);
  CVector sorted(n);
  for (int c = 0; c < n; ++c)
  {
    sorted(c) = lambda(order[c]);
    CVector col = es.eigenvectors().col(order[c]);
    col.normalize();
    for (int r = 0; r < n; ++r)
    {
      if (std::abs(col(r)) > 1.0e-12)
      {
        col *= std::abs(col(r)) / col(r);
        break;
      }
    }
    V.col(c) = col;
  }
  for (int i = 0; i < n; ++i)
  {
    for (int j = i + 1; j < n; ++j)
    {
      if (std::abs(sorted(i) - sorted(j)) <= collision_tol)
      {
        throw CollisionError("eigenvalues of X collide (completed phase space boundary)");
      }
    }
  }

  const CMatrix V_inv = checked_inverse(V, 0.0, "eigenvector matrix");
  const CMatrix Yd = V_inv * d.Y * V;

  ParticleState s;
  s.curve = d.curve;
  s.q.resize(n);
  s.p.resize(n);
  for (int i = 0; i < n; ++i)
  {
    if (d.curve.variant == Variant::Trigonometric)
    {
      if (std::abs(sorted(i)) <= collision_tol)
      {
        throw SingularMatrixError("X is not invertible");
      }
      s.q(i) = std::log(sorted(i));
    }
    else
    {
      s.q(i) = sorted(i);
    }
    s.p(i) = Yd(i, i);
  }
  s.a = V_inv * d.u;
  s.b = (d.v * V).transpose();
  return s;
}

CMatrix spinless_orbit_matrix(int n)
{
  if (n < 1)
  {
    throw ConfigError("spinless_orbit_matrix: n must be positive");
  }
  return CMatrix::Ones(n, n) - CMatrix::Identity(n, n);
}

std::pair<CMatrix, CMatrix> spinless_coordinates(const CVector &q, const CVector &p)
{
  const auto n = q.size();
  CMatrix X = q.asDiagonal();
  CMatrix Y(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      Y(i, j) = i == j ? p(i) : 1.0 / (q(i) - q(j));
    }
  }
  return {X, Y};
}

}  // namespace phase

}  // namespace cmlax
