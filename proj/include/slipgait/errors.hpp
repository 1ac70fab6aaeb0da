#ifndef SLIPGAIT_ERRORS_HPP_
#define SLIPGAIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace slipgait {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Inertia matrix is numerically unusable (conditioning beyond 1e12).
class SingularMass : public Error {
public:
  using Error::Error;
};

/// Normal-constraint operator J_n D^{-1} J_n^T fell below threshold.
class SingularContact : public Error {
public:
  using Error::Error;
};

/// Impact constraint operator J_i D^{-1} J_i^T is ill conditioned.
class SingularImpact : public Error {
public:
  using Error::Error;
};

/// Stacked decoupling matrix [M_s; M_h] is near singular.
class NearSingularDecoupling : public Error {
public:
  using Error::Error;
};

/// Slip channel row M_s has (near) zero norm.
class SlipChannelSingular : public Error {
public:
  using Error::Error;
};

/// Holonomic channel M_h lost row rank.
class HolonomicChannelSingular : public Error {
public:
  using Error::Error;
};

/// Bezier degree below the minimum required by relative degree two.
class DegreeTooLow : public Error {
public:
  using Error::Error;
};

/// Gait fitting targets are kinematically infeasible.
class InfeasibleTargets : public Error {
public:
  using Error::Error;
};

/// A hybrid step did not complete (carries the terminal reason).
class StepFailed : public Error {
public:
  using Error::Error;
};

/// Poincare section chart left its validity region.
class SectionMiss : public Error {
public:
  using Error::Error;
};

/// JSON document could not be parsed.
class ParseError : public Error {
public:
  using Error::Error;
};

/// A domain-type invariant is violated.
class ValidationError : public Error {
public:
  using Error::Error;
};

} // namespace slipgait

#endif // SLIPGAIT_ERRORS_HPP_
