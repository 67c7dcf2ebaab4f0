#pragma once

// Weierstrass functions over the lattice <1, tau>, their rational and
// trigonometric degenerations, the pair potential and the Lax kernel.

#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace cmlax
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class Variant
{
  Rational,
  Trigonometric,
  Elliptic
};

std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view s);

/// Distance below which an argument counts as sitting on a pole.
inline constexpr double kPoleThreshold = 1.0e-12;

class Lattice
{
public:
  static constexpr int kDefaultTruncation = 40;
  static constexpr double kDefaultTolerance = 1.0e-10;

  // Throws ConfigError unless Im(tau) > 0 and the discriminant is nonzero.
  explicit Lattice(Complex tau, int truncation_radius = kDefaultTruncation,
                   double tolerance = kDefaultTolerance);

  Complex tau() const { return tau_; }
  Complex g2() const { return g2_; }
  Complex g3() const { return g3_; }
  int truncation_radius() const { return truncation_radius_; }
  double tolerance() const { return tolerance_; }

  /// Eisenstein-summed G2; the coefficient of z in zeta and of z^2/2 in log(sigma/z).
  Complex eisenstein_g2() const { return eisenstein_g2_; }

  /// g2^3 - 27 g3^2, evaluated through the product (2 pi)^12 q prod (1 - q^n)^24.
  Complex discriminant() const { return discriminant_; }

  /// Representative of z modulo the lattice in the parallelogram centred at 0.
  Complex reduce(Complex z) const;

  /// Distance from z to the nearest lattice point.
  double distance_to_lattice(Complex z) const;

  bool operator==(const Lattice &other) const = default;

private:
  Complex tau_;
  int truncation_radius_;
  double tolerance_;
  Complex g2_;
  Complex g3_;
  Complex eisenstein_g2_;
  Complex discriminant_;
};

/// Choice of trigonometric degeneration. `Literal` uses zeta = 1/sin(z) and the
/// kernel 1/sin(z) - sin(q); `Cotangent` uses zeta = cot(z) and the kernel
/// cot(z) - cot(q). Only `Cotangent` gives a kernel vanishing at z = q.
enum class TrigConvention
{
  Literal,
  Cotangent
};

/// The curve a system lives on: variant, lattice for the elliptic case and
/// the trigonometric conventions.
struct Curve
{
  Variant variant = Variant::Rational;
  std::optional<Lattice> lattice;
  TrigConvention zeta_convention = TrigConvention::Literal;
  TrigConvention kernel_convention = TrigConvention::Cotangent;

  static Curve rational() { return {}; }
  static Curve trigonometric(TrigConvention zeta = TrigConvention::Literal,
                             TrigConvention kernel = TrigConvention::Cotangent)
  {
    return {Variant::Trigonometric, std::nullopt, zeta, kernel};
  }
  static Curve elliptic(Lattice lattice)
  {
    return {Variant::Elliptic, std::move(lattice), TrigConvention::Literal,
            TrigConvention::Cotangent};
  }

  // Throws ConfigError if an elliptic curve carries no lattice.
  const Lattice &require_lattice() const;

  /// Distance from q to the singular set of the potential (0, pi Z or the lattice).
  double distance_to_singular(Complex q) const;
};

namespace specfun
{

Complex wp(Complex z, const Lattice &lattice);
Complex wp_prime(Complex z, const Lattice &lattice);
Complex sigma_w(Complex z, const Lattice &lattice);

/// Weierstrass zeta for the elliptic curve, 1/z (rational), 1/sin(z) or cot(z)
/// (trigonometric, per curve.zeta_convention).
Complex zeta_w(Complex z, const Curve &curve);

/// Pair potential U(q): 1/q^2, 1/sin^2(q) or wp(q).
Complex potential(Complex q, const Curve &curve);
Complex potential_derivative(Complex q, const Curve &curve);

/// s_q(z): simple pole at z = 0 with residue 1, zero at z = q.
Complex lax_kernel(Complex q, Complex z, const Curve &curve);

}  // namespace specfun

}  // namespace cmlax
