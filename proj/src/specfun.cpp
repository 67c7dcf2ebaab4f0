#include "cmlax/specfun.hpp"

#include <cmath>
#include <numbers>

#include "cmlax/errors.hpp"

namespace cmlax
{

namespace
{

using std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

Complex expi2pi(Complex w)
{
  return std::exp(2.0 * pi * kI * w);
}

// pi^2 csc^2(pi w) written in x = exp(2 pi i w); symmetric under x -> 1/x.
Complex csc2_term(Complex w)
{
  Complex x = expi2pi(w);
  if (std::abs(x) > 1.0)
  {
    x = 1.0 / x;
  }
  const Complex d = 1.0 - x;
  return -4.0 * pi * pi * x / (d * d);
}

// d/dw of csc2_term.
Complex csc2_term_prime(Complex w)
{
  Complex x = expi2pi(w);
  double sign = 1.0;
  if (std::abs(x) > 1.0)
  {
    x = 1.0 / x;
    sign = -1.0;
  }
  const Complex d = 1.0 - x;
  return sign * (-8.0 * pi * pi * pi * kI) * x * (1.0 + x) / (d * d * d);
}

// pi cot(pi w).
Complex cot_term(Complex w)
{
  Complex x = expi2pi(w);
  if (std::abs(x) > 1.0)
  {
    x = 1.0 / x;
    return -pi * kI * (x + 1.0) / (x - 1.0);
  }
  return pi * kI * (x + 1.0) / (x - 1.0);
}

double sigma_divisor(long n, int power)
{
  double s = 0.0;
  for (long d = 1; d * d <= n; ++d)
  {
    if (n % d == 0)
    {
      s += std::pow(static_cast<double>(d), power);
      const long e = n / d;
      if (e != d)
      {
        s += std::pow(static_cast<double>(e), power);
      }
    }
  }
  return s;
}

void require_off_pole(double distance, const char *what)
{
  if (distance < kPoleThreshold)
  {
    throw PoleError(std::string(what) + ": argument on the singular set");
  }
}

double distance_to_pi_z(Complex q)
{
  const double m = std::round(q.real() / pi);
  return std::abs(q - m * pi);
}

}  // namespace

std::string_view to_string(Variant v)
{
  switch (v)
  {
    case Variant::Rational:
      return "rational";
    case Variant::Trigonometric:
      return "trigonometric";
    case Variant::Elliptic:
      return "elliptic";
  }
  return "rational";
}

Variant variant_from_string(std::string_view s)
{
  if (s == "rational")
  {
    return Variant::Rational;
  }
  if (s == "trigonometric")
  {
    return Variant::Trigonometric;
  }
  if (s == "elliptic")
  {
    return Variant::Elliptic;
  }
  throw ConfigError("unknown variant '" + std::string(s) + "'");
}

Lattice::Lattice(Complex tau, int truncation_radius, double tolerance)
  : tau_(tau), truncation_radius_(truncation_radius), tolerance_(tolerance)
{
  if (!(tau.imag() > 0.0))
  {
    throw ConfigError("lattice: Im(tau) must be positive");
  }
  if (truncation_radius < 1)
  {
    throw ConfigError("lattice: truncation_radius must be positive");
  }
  if (!(tolerance > 0.0))
  {
    throw ConfigError("lattice: tolerance must be positive");
  }

  const Complex q = expi2pi(tau);

  // Row sums over n = 1..R of the m-summed lattice.
  Complex g2_rows = pi * pi / 3.0;
  for (int n = 1; n <= truncation_radius_; ++n)
  {
    g2_rows += 2.0 * csc2_term(static_cast<double>(n) * tau);
  }
  eisenstein_g2_ = g2_rows;

  // Eisenstein q-expansions for G4, G6. Cutoff R^2 terms.
  Complex e4 = 1.0;
  Complex e6 = 1.0;
  Complex qn = 1.0;
  const long n_max = static_cast<long>(truncation_radius_) * truncation_radius_;
  for (long n = 1; n <= n_max; ++n)
  {
    qn *= q;
    if (std::abs(qn) * std::pow(static_cast<double>(n), 5) < 1.0e-30)
    {
      break;
    }
    e4 += 240.0 * sigma_divisor(n, 3) * qn;
    e6 -= 504.0 * sigma_divisor(n, 5) * qn;
  }
  g2_ = 4.0 * std::pow(pi, 4) / 3.0 * e4;
  g3_ = 8.0 * std::pow(pi, 6) / 27.0 * e6;

  Complex prod = 1.0;
  qn = 1.0;
  for (long n = 1; n <= n_max; ++n)
  {
    qn *= q;
    if (std::abs(qn) < 1.0e-30)
    {
      break;
    }
    prod *= std::pow(1.0 - qn, 24);
  }
  discriminant_ = std::pow(2.0 * pi, 12) * q * prod;
  if (!std::isfinite(std::abs(discriminant_)) || std::abs(discriminant_) == 0.0)
  {
    throw ConfigError("lattice: degenerate (vanishing discriminant)");
  }
}

Complex Lattice::reduce(Complex z) const
{
  const double y = z.imag() / tau_.imag();
  const double x = z.real() - y * tau_.real();
  return z - std::round(x) - std::round(y) * tau_;
}

double Lattice::distance_to_lattice(Complex z) const
{
  const Complex z0 = reduce(z);
  double best = std::abs(z0);
  for (int a = -1; a <= 1; ++a)
  {
    for (int b = -1; b <= 1; ++b)
    {
      best = std::min(best, std::abs(z0 - static_cast<double>(a) -
                                     static_cast<double>(b) * tau_));
    }
  }
  return best;
}

const Lattice &Curve::require_lattice() const
{
  if (!lattice)
  {
    throw ConfigError("elliptic variant requires a lattice");
  }
  return *lattice;
}

double Curve::distance_to_singular(Complex q) const
{
  switch (variant)
  {
    case Variant::Rational:
      return std::abs(q);
    case Variant::Trigonometric:
      return distance_to_pi_z(q);
    case Variant::Elliptic:
      return require_lattice().distance_to_lattice(q);
  }
  return 0.0;
}

namespace specfun
{

Complex wp(Complex z, const Lattice &lattice)
{
  require_off_pole(lattice.distance_to_lattice(z), "wp");
  const Complex z0 = lattice.reduce(z);
  const Complex s = std::sin(pi * z0);
  Complex sum = pi * pi / (s * s) - pi * pi / 3.0;
  for (int n = 1; n <= lattice.truncation_radius(); ++n)
  {
    const Complex nt = static_cast<double>(n) * lattice.tau();
    sum += csc2_term(z0 + nt) + csc2_term(-z0 + nt) - 2.0 * csc2_term(nt);
  }
  return sum;
}

Complex wp_prime(Complex z, const Lattice &lattice)
{
  require_off_pole(lattice.distance_to_lattice(z), "wp_prime");
  const Complex z0 = lattice.reduce(z);
  const Complex s = std::sin(pi * z0);
  Complex sum = -2.0 * pi * pi * pi * std::cos(pi * z0) / (s * s * s);
  for (int n = 1; n <= lattice.truncation_radius(); ++n)
  {
    const Complex nt = static_cast<double>(n) * lattice.tau();
    sum += csc2_term_prime(z0 + nt) - csc2_term_prime(-z0 + nt);
  }
  return sum;
}

Complex sigma_w(Complex z, const Lattice &lattice)
{
  Complex result = std::sin(pi * z) / pi * std::exp(0.5 * lattice.eisenstein_g2() * z * z);
  const Complex q = expi2pi(lattice.tau());
  const Complex xp = expi2pi(z);
  const Complex xm = expi2pi(-z);
  Complex qn = 1.0;
  for (int n = 1; n <= lattice.truncation_radius(); ++n)
  {
    qn *= q;
    const Complex d = 1.0 - qn;
    result *= (1.0 - xp * qn) * (1.0 - xm * qn) / (d * d);
  }
  return result;
}

Complex zeta_w(Complex z, const Curve &curve)
{
  switch (curve.variant)
  {
    case Variant::Rational:
      require_off_pole(std::abs(z), "zeta_w");
      return 1.0 / z;
    case Variant::Trigonometric:
      require_off_pole(distance_to_pi_z(z), "zeta_w");
      if (curve.zeta_convention == TrigConvention::Cotangent)
      {
        return std::cos(z) / std::sin(z);
      }
      return 1.0 / std::sin(z);
    case Variant::Elliptic:
    {
      const Lattice &lattice = curve.require_lattice();
      require_off_pole(lattice.distance_to_lattice(z), "zeta_w");
      Complex sum = cot_term(z) + lattice.eisenstein_g2() * z;
      for (int n = 1; n <= lattice.truncation_radius(); ++n)
      {
        const Complex nt = static_cast<double>(n) * lattice.tau();
        sum += cot_term(z + nt) - cot_term(-z + nt);
      }
      return sum;
    }
  }
  return 0.0;
}

Complex potential(Complex q, const Curve &curve)
{
  require_off_pole(curve.distance_to_singular(q), "potential");
  switch (curve.variant)
  {
    case Variant::Rational:
      return 1.0 / (q * q);
    case Variant::Trigonometric:
    {
      const Complex s = std::sin(q);
      return 1.0 / (s * s);
    }
    case Variant::Elliptic:
      return wp(q, *curve.lattice);
  }
  return 0.0;
}

Complex potential_derivative(Complex q, const Curve &curve)
{
  require_off_pole(curve.distance_to_singular(q), "potential_derivative");
  switch (curve.variant)
  {
    case Variant::Rational:
      return -2.0 / (q * q * q);
    case Variant::Trigonometric:
    {
      const Complex s = std::sin(q);
      return -2.0 * std::cos(q) / (s * s * s);
    }
    case Variant::Elliptic:
      return wp_prime(q, *curve.lattice);
  }
  return 0.0;
}

Complex lax_kernel(Complex q, Complex z, const Curve &curve)
{
  require_off_pole(curve.distance_to_singular(q), "lax_kernel (q)");
  require_off_pole(curve.distance_to_singular(z), "lax_kernel (z)");
  switch (curve.variant)
  {
    case Variant::Rational:
      return 1.0 / z - 1.0 / q;
    case Variant::Trigonometric:
      if (curve.kernel_convention == TrigConvention::Literal)
      {
        return 1.0 / std::sin(z) - std::sin(q);
      }
      return std::cos(z) / std::sin(z) - std::cos(q) / std::sin(q);
    case Variant::Elliptic:
    {
      const Lattice &lattice = *curve.lattice;
      return sigma_w(z - q, lattice) / (sigma_w(z, lattice) * sigma_w(-q, lattice));
    }
  }
  return 0.0;
}

}  // namespace specfun

}  // namespace cmlax
