#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace monoxplain {

enum class Errc {
  shape,
  not_differentiable,
  invalid_argument,
  precondition,
  no_explanation,
  too_large,
  invalid_instance,
  schema,
  shape_inconsistency,
  unknown_activation,
  unsupported_version,
  parse,
  column_mismatch,
  io,
  internal,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; `code()` tells the failure class apart.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace monoxplain
