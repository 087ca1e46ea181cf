#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcomp {

/// Parameters outside the regime where a formula is stated (e.g. P < 2K for
/// the hypergeometric overlap law). Distinct from plain invalid input.
class UnsupportedRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FieldError {
  std::string field;
  std::string message;
};

/// Aggregated validation failure: one entry per offending field.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<FieldError> errors)
      : std::invalid_argument(format(errors)), errors_(std::move(errors)) {}

  ValidationError(std::string field, std::string message)
      : ValidationError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  static std::string format(const std::vector<FieldError>& errors) {
    std::string out = "invalid configuration:";
    for (const auto& e : errors) out += " [" + e.field + ": " + e.message + "]";
    return out;
  }

  std::vector<FieldError> errors_;
};

}  // namespace qcomp
