#pragma once

#include <stdexcept>
#include <string>

namespace warpcurv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// metric not positive definite at the evaluation point
struct DegenerateMetricError : Error {
  DegenerateMetricError(const std::string& msg, double min_eig)
      : Error(msg), min_eigenvalue(min_eig) {}
  double min_eigenvalue;
};

// point outside the chart box, or a difference stencil cannot fit
struct DomainError : Error {
  using Error::Error;
};

struct DegeneratePlaneError : Error {
  using Error::Error;
};

// orthonormality residual of a warped-product frame too large
struct FrameError : Error {
  using Error::Error;
};

// transition profile parameters out of range
struct ProfileError : Error {
  using Error::Error;
};

// family construction: bad r, gluing incompatibility, isotopy endpoint violation, ...
struct FamilyError : Error {
  using Error::Error;
};

// heat-flow step rejected (CFL) or invalid curve
struct FlowError : Error {
  using Error::Error;
};

// non-finite samples encountered during the flow
struct BlowUpError : Error {
  using Error::Error;
};

// CLI / config validation, carries the offending key
struct ConfigError : Error {
  ConfigError(const std::string& msg, std::string bad_key)
      : Error(msg), key(std::move(bad_key)) {}
  std::string key;
};

}  // namespace warpcurv
