#pragma once

#include <stdexcept>
#include <string>

namespace pflm {

/// A file is missing or cannot be read/written.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file exists but its contents violate the expected layout.
class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not meet its accuracy contract.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pflm
