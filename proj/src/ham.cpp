#include "cmlax/ham.hpp"

#include <numbers>

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

Complex trapezoid_residue(const std::function<CMatrix(Complex)> &lax, Complex z0, int power,
                          double radius, int samples)
{
  Complex sum{0.0, 0.0};
  for (int k = 0; k < samples; ++k)
  {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / samples;
    const Complex e = std::polar(1.0, theta);
    sum += matrix_power(lax(z0 + radius * e), power).trace() * e;
  }
  return sum * radius / static_cast<double>(samples);
}

template <typename State>
Gradient finite_difference_gradient(const HamiltonianSpec &h, const State &x,
                                    const GradientOptions &opts)
{
  const Canonical c = ham::to_canonical(x);
  const auto nq = c.Q.size();
  const auto np = c.P.size();
  Gradient g{CVector::Zero(nq), CVector::Zero(np)};

  auto eval = [&](const CVector &Q, const CVector &P) {
    return ham::evaluate(h, ham::from_canonical(x, Q, P), opts.quadrature);
  };
  auto derivative = [&](bool in_q, Eigen::Index m) {
    auto central = [&](double step) {
      CVector Qp = c.Q, Qm = c.Q, Pp = c.P, Pm = c.P;
      if (in_q)
      {
        Qp(m) += step;
        Qm(m) -= step;
      }
      else
      {
        Pp(m) += step;
        Pm(m) -= step;
      }
      return (eval(Qp, Pp) - eval(Qm, Pm)) / (2.0 * step);
    };
    const Complex d1 = central(opts.step);
    const Complex d2 = central(0.5 * opts.step);
    const Complex extrapolated = (4.0 * d2 - d1) / 3.0;
    if (std::abs(d1 - d2) > opts.richardson_tolerance * (1.0 + std::abs(extrapolated)))
    {
      throw StepError("finite-difference gradient of " + h.name() +
                      " not converged under step halving");
    }
    return extrapolated;
  };

  for (Eigen::Index m = 0; m < nq; ++m)
  {
    g.dQ(m) = derivative(true, m);
  }
  for (Eigen::Index m = 0; m < np; ++m)
  {
    g.dP(m) = derivative(false, m);
  }
  return g;
}

void require_degree(int i)
{
  if (i < 1)
  {
    throw ConfigError("Hamiltonian degree must be positive");
  }
}

}  // namespace

std::string HamiltonianSpec::name() const
{
  switch (kind)
  {
    case HamiltonianKind::Trace:
      return "trace" + std::to_string(degree);
    case HamiltonianKind::ResidueAtB:
      return "resb" + std::to_string(degree);
    case HamiltonianKind::ResidueAt:
      return "res" + std::to_string(degree) + "_at";
    case HamiltonianKind::ParticleH2:
      return "h2";
  }
  return "h";
}

void HamiltonianSpec::validate() const
{
  require_degree(degree);
}

namespace ham
{

Complex trace_hamiltonian(const QuiverDatum &d, int i)
{
  require_degree(i);
  return matrix_power(d.Y, i).trace() / static_cast<double>(i);
}

Complex particle_h2(const ParticleState &s)
{
  s.validate();
  const int n = s.n();
  const CMatrix f = s.contractions();
  Complex h = 0.5 * (s.p.array() * s.p.array()).sum();
  for (int i = 0; i < n; ++i)
  {
    for (int j = i + 1; j < n; ++j)
    {
      const Complex qij = s.q(i) - s.q(j);
      if (s.curve.distance_to_singular(qij) <= kCollisionTolerance)
      {
        throw CollisionError("particle_h2: positions collide");
      }
      h += kPotentialSign * f(i, j) * f(j, i) * specfun::potential(qij, s.curve);
    }
  }
  return h;
}

Complex residue_trace_power(const std::function<CMatrix(Complex)> &lax, Complex z0, int i,
                            const QuadratureOptions &opts)
{
  require_degree(i);
  if (!(opts.radius > 0.0) || opts.samples < 4)
  {
    throw ConfigError("residue_trace_power: invalid quadrature options");
  }
  const int power = i + 1;
  const Complex coarse = trapezoid_residue(lax, z0, power, opts.radius, opts.samples);
  const Complex fine = trapezoid_residue(lax, z0, power, opts.radius, 2 * opts.samples);
  if (std::abs(coarse - fine) > opts.tolerance * (1.0 + std::abs(fine)))
  {
    throw QuadratureError("residue quadrature not converged (increase samples)");
  }
  return coarse / static_cast<double>(power);
}

namespace
{

void require_regular_pole(const HamiltonianSpec &h, const Curve &curve)
{
  if (curve.distance_to_singular(h.pole) < kPoleThreshold)
  {
    throw PoleError("residue point lies on the singular set of the curve");
  }
}

}  // namespace

Complex spin_hamiltonian(const QuiverDatum &d, int i, const QuadratureOptions &opts)
{
  auto shifted = [&](Complex z) {
    return lax::twist_shift(lax::higgs(d, z), TwistDirection::ToTwisted).value;
  };
  return residue_trace_power(shifted, 0.0, i, opts);
}

Complex spin_hamiltonian(const ParticleState &s, int i, const QuadratureOptions &opts)
{
  auto shifted = [&](Complex z) {
    return lax::twist_shift(lax::higgs(s, z), TwistDirection::ToTwisted).value;
  };
  return residue_trace_power(shifted, 0.0, i, opts);
}

Complex framed_hamiltonian(const MultiPoleLax &lax, Complex x, int i,
                           const QuadratureOptions &opts)
{
  return residue_trace_power([&](Complex z) { return lax(z); }, x, i, opts);
}

Complex evaluate(const HamiltonianSpec &h, const QuiverDatum &d, const QuadratureOptions &opts)
{
  h.validate();
  switch (h.kind)
  {
    case HamiltonianKind::Trace:
      return trace_hamiltonian(d, h.degree);
    case HamiltonianKind::ResidueAtB:
      return spin_hamiltonian(d, h.degree, opts);
    case HamiltonianKind::ResidueAt:
      require_regular_pole(h, d.curve);
      return residue_trace_power([&](Complex z) { return lax::higgs(d, z).value; }, h.pole,
                                 h.degree, opts);
    case HamiltonianKind::ParticleH2:
      return particle_h2(phase::to_particles(d));
  }
  return 0.0;
}

Complex evaluate(const HamiltonianSpec &h, const ParticleState &s, const QuadratureOptions &opts)
{
  h.validate();
  switch (h.kind)
  {
    case HamiltonianKind::Trace:
    {
      if (s.curve.variant == Variant::Elliptic)
      {
        throw ConfigError("trace Hamiltonians need a matrix model (not elliptic)");
      }
      const auto [X, Y] = phase::particle_matrices(s);
      return matrix_power(Y, h.degree).trace() / static_cast<double>(h.degree);
    }
    case HamiltonianKind::ResidueAtB:
      return spin_hamiltonian(s, h.degree, opts);
    case HamiltonianKind::ResidueAt:
      require_regular_pole(h, s.curve);
      return residue_trace_power([&](Complex z) { return lax::higgs(s, z).value; }, h.pole,
                                 h.degree, opts);
    case HamiltonianKind::ParticleH2:
      return particle_h2(s);
  }
  return 0.0;
}

Complex evaluate(const HamiltonianSpec &h, const PhasePoint &x, const QuadratureOptions &opts)
{
  return std::visit([&](const auto &state) { return evaluate(h, state, opts); }, x);
}

Canonical to_canonical(const QuiverDatum &d)
{
  d.validate();
  const int n = d.n();
  const int k = d.k();
  Canonical c;
  c.Q.resize(n * n + n * k);
  c.P.resize(n * n + n * k);
  CMatrix momentum = d.Y;
  if (d.curve.variant == Variant::Trigonometric)
  {
    Eigen::FullPivLU<CMatrix> lu(d.X);
    if (!lu.isInvertible())
    {
      throw SingularMatrixError("canonical coordinates: X is not invertible");
    }
    momentum = -lu.solve(d.Y);
    c.sign = -1.0;
  }
  Eigen::Index m = 0;
  for (int a = 0; a < n; ++a)
  {
    for (int b = 0; b < n; ++b, ++m)
    {
      c.Q(m) = d.X(a, b);
      c.P(m) = momentum(b, a);
    }
  }
  for (int i = 0; i < n; ++i)
  {
    for (int al = 0; al < k; ++al, ++m)
    {
      c.Q(m) = d.u(i, al);
      c.P(m) = d.v(al, i);
    }
  }
  return c;
}

QuiverDatum from_canonical(const QuiverDatum &like, const CVector &Q, const CVector &P)
{
  const int n = like.n();
  const int k = like.k();
  QuiverDatum d{like.curve, CMatrix(n, n), CMatrix(n, n), CMatrix(n, k), CMatrix(k, n)};
  CMatrix momentum(n, n);
  Eigen::Index m = 0;
  for (int a = 0; a < n; ++a)
  {
    for (int b = 0; b < n; ++b, ++m)
    {
      d.X(a, b) = Q(m);
      momentum(b, a) = P(m);
    }
  }
  for (int i = 0; i < n; ++i)
  {
    for (int al = 0; al < k; ++al, ++m)
    {
      d.u(i, al) = Q(m);
      d.v(al, i) = P(m);
    }
  }
  d.Y = like.curve.variant == Variant::Trigonometric ? CMatrix(-d.X * momentum) : momentum;
  return d;
}

Canonical to_canonical(const ParticleState &s)
{
  s.validate();
  const int n = s.n();
  const int k = s.k();
  Canonical c;
  c.Q.resize(n + n * k);
  c.P.resize(n + n * k);
  c.Q.head(n) = s.q;
  c.P.head(n) = s.p;
  Eigen::Index m = n;
  for (int i = 0; i < n; ++i)
  {
    for (int al = 0; al < k; ++al, ++m)
    {
      c.Q(m) = s.a(i, al);
      c.P(m) = s.b(i, al);
    }
  }
  return c;
}

ParticleState from_canonical(const ParticleState &like, const CVector &Q, const CVector &P)
{
  const int n = like.n();
  const int k = like.k();
  ParticleState s{like.curve, Q.head(n), P.head(n), CMatrix(n, k), CMatrix(n, k)};
  Eigen::Index m = n;
  for (int i = 0; i < n; ++i)
  {
    for (int al = 0; al < k; ++al, ++m)
    {
      s.a(i, al) = Q(m);
      s.b(i, al) = P(m);
    }
  }
  return s;
}

Gradient gradient(const HamiltonianSpec &h, const QuiverDatum &d, const GradientOptions &opts)
{
  h.validate();
  if (!opts.use_closed_form || h.kind != HamiltonianKind::Trace)
  {
    return finite_difference_gradient(h, d, opts);
  }
  const int n = d.n();
  const int k = d.k();
  Gradient g{CVector::Zero(n * n + n * k), CVector::Zero(n * n + n * k)};
  const CMatrix y_pow = matrix_power(d.Y, h.degree - 1);
  CMatrix dq = CMatrix::Zero(n, n);
  CMatrix dp = y_pow;  // dp(a, b) = dH / d(momentum)_{ba}
  if (d.curve.variant == Variant::Trigonometric)
  {
    Eigen::FullPivLU<CMatrix> lu(d.X);
    if (!lu.isInvertible())
    {
      throw SingularMatrixError("gradient: X is not invertible");
    }
    const CMatrix momentum = -lu.solve(d.Y);
    dp = -y_pow * d.X;
    dq = (-momentum * y_pow).transpose();
  }
  Eigen::Index m = 0;
  for (int a = 0; a < n; ++a)
  {
    for (int b = 0; b < n; ++b, ++m)
    {
      g.dQ(m) = dq(a, b);
      g.dP(m) = dp(a, b);
    }
  }
  return g;
}

Gradient gradient(const HamiltonianSpec &h, const ParticleState &s, const GradientOptions &opts)
{
  h.validate();
  if (!opts.use_closed_form || h.kind != HamiltonianKind::ParticleH2)
  {
    return finite_difference_gradient(h, s, opts);
  }
  s.validate();
  const int n = s.n();
  const int k = s.k();
  const CMatrix f = s.contractions();
  CVector dq = CVector::Zero(n);
  CMatrix da = CMatrix::Zero(n, k);
  CMatrix db = CMatrix::Zero(n, k);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      if (i == j)
      {
        continue;
      }
      const Complex qij = s.q(i) - s.q(j);
      if (s.curve.distance_to_singular(qij) <= kCollisionTolerance)
      {
        throw CollisionError("particle gradient: positions collide");
      }
      const Complex u = specfun::potential(qij, s.curve);
      dq(i) += kPotentialSign * f(i, j) * f(j, i) * specfun::potential_derivative(qij, s.curve);
      da.row(i) += kPotentialSign * f(j, i) * u * s.b.row(j);
      db.row(i) += kPotentialSign * f(i, j) * u * s.a.row(j);
    }
  }
  Gradient g{CVector(n + n * k), CVector(n + n * k)};
  g.dQ.head(n) = dq;
  g.dP.head(n) = s.p;
  Eigen::Index m = n;
  for (int i = 0; i < n; ++i)
  {
    for (int al = 0; al < k; ++al, ++m)
    {
      g.dQ(m) = da(i, al);
      g.dP(m) = db(i, al);
    }
  }
  return g;
}

Complex poisson_bracket(const HamiltonianSpec &f, const HamiltonianSpec &g, const PhasePoint &at,
                        const GradientOptions &opts)
{
  GradientOptions fd = opts;
  fd.use_closed_form = false;
  return std::visit(
    [&](const auto &state) {
      const Canonical c = to_canonical(state);
      const Gradient gf = gradient(f, state, fd);
      const Gradient gg = gradient(g, state, fd);
      Complex sum{0.0, 0.0};
      for (Eigen::Index m = 0; m < gf.dQ.size(); ++m)
      {
        sum += gf.dQ(m) * gg.dP(m) - gf.dP(m) * gg.dQ(m);
      }
      return c.sign * sum;
    },
    at);
}

}  // namespace ham

}  // namespace cmlax
