#pragma once

#include <stdexcept>
#include <string>

namespace kcde {

/// Bad input data: unreadable files, malformed CSV/JSON, empty or degenerate
/// samples. Maps to CLI exit code 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical procedure failed hard (no usable result). Maps to CLI exit
/// code 3. Recoverable conditions (e.g. BGK falling back to the normal
/// reference rule) are reported through flags instead.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kcde
