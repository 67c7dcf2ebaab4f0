#pragma once

#include <stdexcept>
#include <string>

namespace cmlax
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point lies on (or within tolerance of) a singular set.
class PoleError : public Error
{
public:
  using Error::Error;
};

/// Two particle positions (or eigenvalues of X) coincide within tolerance.
class CollisionError : public Error
{
public:
  using Error::Error;
};

class SingularMatrixError : public Error
{
public:
  using Error::Error;
};

/// Spin data cannot satisfy the diagonal of the moment condition.
class ConstraintError : public Error
{
public:
  using Error::Error;
};

/// Contour quadrature did not converge under sample doubling.
class QuadratureError : public Error
{
public:
  using Error::Error;
};

/// Finite-difference extrapolation or invariant drift exceeded tolerance.
class StepError : public Error
{
public:
  using Error::Error;
};

/// Malformed or schema-invalid configuration / serialized data.
class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace cmlax
