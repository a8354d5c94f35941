#pragma once

#include <stdexcept>
#include <string>

namespace subdiff {

// Requested accuracy could not be certified (series cap hit, quadrature
// failed to converge). Distinct from domain errors so callers can decide
// whether a degraded value is acceptable.
class accuracy_error : public std::runtime_error {
  public:
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace subdiff
