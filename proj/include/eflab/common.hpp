#pragma once

#include <stdexcept>
#include <string>

namespace eflab {

inline constexpr const char* kToolName = "eflab";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

/// Invalid configuration: bad tolerances, malformed scenario, unknown tags.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A query outside the domain of the data it is applied to
/// (grid point outside a trajectory, φ evaluated where undefined).
class DomainError : public std::runtime_error {
  public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Not enough samples or blocks to produce the requested estimate.
class ResolutionError : public std::runtime_error {
  public:
    explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A right-hand side returned a non-finite value; carries the location.
class RhsEvaluationError : public std::runtime_error {
  public:
    RhsEvaluationError(double t, double y, const std::string& msg)
        : std::runtime_error(msg), t_(t), y_(y) {}
    double t() const { return t_; }
    double y() const { return y_; }

  private:
    double t_;
    double y_;
};

/// An operation was invoked on inputs violating its stated hypotheses
/// (e.g. sentinel exponents where finite ones are required).
class HypothesisError : public std::runtime_error {
  public:
    explicit HypothesisError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A constructor could not realize the requested object (e.g. no real
/// positive amplitude for a power-law solution).
class ConstructionError : public std::runtime_error {
  public:
    explicit ConstructionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace eflab
