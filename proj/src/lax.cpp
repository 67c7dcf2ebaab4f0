#include "cmlax/lax.hpp"

#include <Eigen/Eigenvalues>

#include "cmlax/errors.hpp"

namespace cmlax
{

namespace
{

void require_nonzero_z(Complex z, const char *what)
{
  if (std::abs(z) < kPoleThreshold)
  {
    throw PoleError(std::string(what) + ": z at the pole b = 0");
  }
}

void require_finite(const CMatrix &m, const char *what)
{
  if (!m.allFinite())
  {
    throw PoleError(std::string(what) + ": non-finite Higgs value");
  }
}

}  // namespace

CMatrix MultiPoleLax::operator()(Complex z) const
{
  CMatrix out = constant;
  for (const auto &[pole, residue] : poles)
  {
    if (std::abs(z - pole) < kPoleThreshold)
    {
      throw PoleError("multi-pole Lax evaluated at a pole");
    }
    out += residue / (z - pole);
  }
  return out;
}

namespace lax
{

LaxSample rational_higgs(const QuiverDatum &d, Complex z)
{
  d.validate();
  if (d.curve.variant != Variant::Rational)
  {
    throw ConfigError("rational_higgs requires a rational datum");
  }
  require_nonzero_z(z, "rational_higgs");
  CMatrix value = (d.X * d.Y - d.Y * d.X) / z + d.Y;
  require_finite(value, "rational_higgs");
  return {z, std::move(value), d.curve, {Complex{0.0, 0.0}}};
}

LaxSample trig_higgs(const QuiverDatum &d, Complex z)
{
  d.validate();
  if (d.curve.variant != Variant::Trigonometric)
  {
    throw ConfigError("trig_higgs requires a trigonometric datum");
  }
  require_nonzero_z(z, "trig_higgs");
  Eigen::FullPivLU<CMatrix> lu(d.X);
  if (!lu.isInvertible())
  {
    throw SingularMatrixError("trig_higgs: X is not invertible");
  }
  CMatrix value = (lu.inverse() * d.Y * d.X - d.Y) / z + d.Y;
  require_finite(value, "trig_higgs");
  return {z, std::move(value), d.curve, {Complex{0.0, 0.0}}};
}

LaxSample kernel_higgs(const ParticleState &s, Complex z)
{
  s.validate();
  if (s.curve.distance_to_singular(z) < kPoleThreshold)
  {
    throw PoleError("kernel_higgs: z on the singular set");
  }
  const int n = s.n();
  for (int i = 0; i < n; ++i)
  {
    for (int j = i + 1; j < n; ++j)
    {
      if (s.curve.distance_to_singular(s.q(i) - s.q(j)) <= kCollisionTolerance)
      {
        throw CollisionError("kernel_higgs: positions collide");
      }
    }
  }
  const CMatrix f = s.contractions();
  CMatrix value(n, n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      value(i, j) = i == j ? s.p(i) : f(i, j) * specfun::lax_kernel(s.q(i) - s.q(j), z, s.curve);
    }
  }
  require_finite(value, "kernel_higgs");
  return {z, std::move(value), s.curve, {Complex{0.0, 0.0}}};
}

LaxSample elliptic_higgs(const ParticleState &s, Complex z)
{
  if (s.curve.variant != Variant::Elliptic)
  {
    throw ConfigError("elliptic_higgs requires an elliptic state");
  }
  return kernel_higgs(s, z);
}

LaxSample higgs(const QuiverDatum &d, Complex z)
{
  return d.curve.variant == Variant::Trigonometric ? trig_higgs(d, z) : rational_higgs(d, z);
}

LaxSample higgs(const ParticleState &s, Complex z)
{
  if (s.curve.variant != Variant::Rational)
  {
    return kernel_higgs(s, z);
  }
  auto [X, Y] = phase::particle_matrices(s);
  const QuiverDatum d{s.curve, std::move(X), std::move(Y), CMatrix::Zero(s.n(), 0),
                      CMatrix::Zero(0, s.n())};
  return higgs(d, z);
}

LaxSample twist_shift(const LaxSample &sample, TwistDirection direction)
{
  const Complex zeta = specfun::zeta_w(sample.z, sample.curve);
  LaxSample out = sample;
  const auto n = sample.value.rows();
  const Complex shift = direction == TwistDirection::ToTwisted ? zeta : -zeta;
  out.value += shift * CMatrix::Identity(n, n);
  return out;
}

std::vector<Complex> char_poly_coeffs(const CMatrix &m)
{
  const auto n = m.rows();
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1, Complex{0.0, 0.0});
  c[0] = 1.0;
  if (n == 0)
  {
    return c;
  }
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  const CVector lambda = es.eigenvalues();
  // Multiply out prod (k - lambda_j), descending powers of k.
  for (Eigen::Index j = 0; j < n; ++j)
  {
    for (Eigen::Index i = j + 1; i >= 1; --i)
    {
      c[static_cast<std::size_t>(i)] -= lambda(j) * c[static_cast<std::size_t>(i - 1)];
    }
  }
  return c;
}

SpectralRecord spectral_record(const QuiverDatum &d, const std::vector<Complex> &z_grid)
{
  SpectralRecord rec{z_grid, {}};
  rec.coeffs.reserve(z_grid.size());
  for (const Complex z : z_grid)
  {
    rec.coeffs.push_back(char_poly_coeffs(higgs(d, z)));
  }
  return rec;
}

SpectralRecord spectral_record(const ParticleState &s, const std::vector<Complex> &z_grid)
{
  SpectralRecord rec{z_grid, {}};
  rec.coeffs.reserve(z_grid.size());
  for (const Complex z : z_grid)
  {
    rec.coeffs.push_back(char_poly_coeffs(higgs(s, z)));
  }
  return rec;
}

double max_drift(const SpectralRecord &a, const SpectralRecord &b)
{
  if (a.coeffs.size() != b.coeffs.size())
  {
    throw ConfigError("spectral records on different grids");
  }
  double worst = 0.0;
  for (std::size_t g = 0; g < a.coeffs.size(); ++g)
  {
    for (std::size_t i = 0; i < a.coeffs[g].size(); ++i)
    {
      worst = std::max(worst, std::abs(a.coeffs[g][i] - b.coeffs[g][i]));
    }
  }
  return worst;
}

}  // namespace lax

}  // namespace cmlax
