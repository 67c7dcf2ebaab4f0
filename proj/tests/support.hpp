#pragma once

// Seeded phase-space samples built through the public API.

#include <random>

#include "cmlax/phase.hpp"
#include "oracles.hpp"

namespace support
{

using namespace cmlax;

inline double spacing(Variant v)
{
  return v == Variant::Rational ? 1.0 : v == Variant::Trigonometric ? 0.6 : 0.22;
}

inline ParticleState random_particles(std::mt19937_64 &rng, const Curve &curve, int n, int k)
{
  const double step = spacing(curve.variant);
  CVector q(n);
  CVector p(n);
  for (int i = 0; i < n; ++i)
  {
    q(i) = Complex(step * i + 0.1, 0.05 * i) + oracle::random_complex(rng, 0.2 * step);
    p(i) = oracle::random_complex(rng, 0.5);
  }
  CMatrix a = oracle::random_matrix(rng, n, k);
  CMatrix b = oracle::random_matrix(rng, n, k);
  for (int i = 0; i < n; ++i)
  {
    a(i, 0) += 1.5;
    b(i, 0) += 1.5;
  }
  return phase::normalize_spins(ParticleState{curve, q, p, a, b});
}

inline GaugeElement random_gauge(std::mt19937_64 &rng, int n, double scale = 0.3)
{
  return GaugeElement(CMatrix::Identity(n, n) + oracle::random_matrix(rng, n, n, scale));
}

// Wide, centred spacing and small momenta keep the spectrum of Y close to the
// momenta, so exp(t Y^i) stays well conditioned for i <= 3, |t| <= 1.
inline ParticleState moderate_particles(std::mt19937_64 &rng, const Curve &curve, int n, int k)
{
  const double step = curve.variant == Variant::Trigonometric ? 2.0 : spacing(curve.variant);
  CVector q(n);
  CVector p(n);
  for (int i = 0; i < n; ++i)
  {
    q(i) = Complex(step * (i - 0.5 * (n - 1)), 0.05 * i) + oracle::random_complex(rng, 0.1 * step);
    p(i) = oracle::random_complex(rng, 0.2);
  }
  CMatrix a = oracle::random_matrix(rng, n, k, 0.2);
  CMatrix b = oracle::random_matrix(rng, n, k, 0.2);
  for (int i = 0; i < n; ++i)
  {
    a(i, 0) += 1.0;
    b(i, 0) += 1.0;
  }
  return phase::normalize_spins(ParticleState{curve, q, p, a, b});
}

inline QuiverDatum moderate_on_shell(std::mt19937_64 &rng, const Curve &curve, int n, int k)
{
  const QuiverDatum d = phase::from_particles(moderate_particles(rng, curve, n, k));
  return phase::gauge_transform(d, random_gauge(rng, n, 0.3));
}

inline QuiverDatum random_on_shell(std::mt19937_64 &rng, const Curve &curve, int n, int k)
{
  const QuiverDatum d = phase::from_particles(random_particles(rng, curve, n, k));
  return phase::gauge_transform(d, random_gauge(rng, n));
}

// The two-particle rational example: X = diag(0, 1), Y = [[0, -1], [1, 0]], u v = [[1, -1], [-1, 1]].
inline QuiverDatum two_body_example()
{
  CMatrix X = CMatrix::Zero(2, 2);
  X(1, 1) = 1.0;
  CMatrix Y(2, 2);
  Y << 0.0, -1.0, 1.0, 0.0;
  CMatrix u(2, 1);
  u << 1.0, -1.0;
  CMatrix v(1, 2);
  v << 1.0, -1.0;
  return {Curve::rational(), X, Y, u, v};
}

}  // namespace support
