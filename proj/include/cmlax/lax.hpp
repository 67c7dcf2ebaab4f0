#pragma once

// Higgs (Lax) matrices with spectral parameter, the zeta twist, and
// characteristic-polynomial invariants.

#include <utility>
#include <vector>

#include "cmlax/phase.hpp"

namespace cmlax
{

/// A finite value of a Higgs field at one spectral-parameter point.
struct LaxSample
{
  Complex z;
  CMatrix value;
  Curve curve;
  std::vector<Complex> pole_set;
};

/// Monic characteristic-polynomial coefficients (descending degree) at each grid point.
struct SpectralRecord
{
  std::vector<Complex> z_grid;
  std::vector<std::vector<Complex>> coeffs;
};

/// eta(z) = constant + sum_j residue_j / (z - pole_j).
struct MultiPoleLax
{
  CMatrix constant;
  std::vector<std::pair<Complex, CMatrix>> poles;

  CMatrix operator()(Complex z) const;
};

enum class TwistDirection
{
  ToTwisted,
  ToUntwisted
};

namespace lax
{

/// [X,Y]/z + Y.
LaxSample rational_higgs(const QuiverDatum &d, Complex z);

/// (X^{-1} Y X - Y)/z + Y.
LaxSample trig_higgs(const QuiverDatum &d, Complex z);

/// p_i on the diagonal, f_ij s_{q_i - q_j}(z) off it, for any variant.
LaxSample kernel_higgs(const ParticleState &s, Complex z);

/// kernel_higgs restricted to elliptic states.
LaxSample elliptic_higgs(const ParticleState &s, Complex z);

/// Dispatches on the variant of the datum.
LaxSample higgs(const QuiverDatum &d, Complex z);

/// Rational: the matrix-model Higgs field of the diagonal-gauge matrices (no
/// spin normalization). Trigonometric/elliptic: kernel_higgs, the Lax matrix
/// of the 1/sin^2 and wp potentials.
LaxSample higgs(const ParticleState &s, Complex z);

/// Adds (ToTwisted) or subtracts (ToUntwisted) zeta(z) times the identity.
LaxSample twist_shift(const LaxSample &sample, TwistDirection direction);

std::vector<Complex> char_poly_coeffs(const CMatrix &m);
inline std::vector<Complex> char_poly_coeffs(const LaxSample &sample)
{
  return char_poly_coeffs(sample.value);
}

SpectralRecord spectral_record(const QuiverDatum &d, const std::vector<Complex> &z_grid);
SpectralRecord spectral_record(const ParticleState &s, const std::vector<Complex> &z_grid);

/// Largest coefficient difference between two records on the same grid.
double max_drift(const SpectralRecord &a, const SpectralRecord &b);

}  // namespace lax

}  // namespace cmlax
