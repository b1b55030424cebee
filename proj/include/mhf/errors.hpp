#pragma once

#include <stdexcept>
#include <string>

namespace mhf {

/// Raised when an exact/exhaustive routine would exceed its configured size
/// cap. The CLI maps it to exit code 3.
class ResourceCapExceeded : public std::runtime_error {
 public:
  explicit ResourceCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mhf
