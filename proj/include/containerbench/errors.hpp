#pragma once

#include <stdexcept>
#include <string>

namespace cbench {

// Raised when an exhaustive routine would exceed its configured work cap.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an operation is called outside its documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace cbench
