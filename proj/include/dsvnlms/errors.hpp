#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dsvnlms {

/// A TermIndex whose order or lags fall outside the configured layout.
class InvalidTerm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on NaN/Inf samples before any state is touched.
class NumericInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The global robustness ratio has a zero denominator.
class UndefinedRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Index arithmetic would exceed std::size_t.
class IndexOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Invalid experiment or component configuration. `fields()` names every
/// offending field so callers can report them together.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> fields)
      : std::invalid_argument(join(fields)), fields_(std::move(fields)) {}

  const std::vector<std::string>& fields() const noexcept { return fields_; }

 private:
  static std::string join(const std::vector<std::string>& fields) {
    std::string msg = "invalid configuration:";
    for (const auto& f : fields) {
      msg += "\n  ";
      msg += f;
    }
    return msg;
  }

  std::vector<std::string> fields_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dsvnlms
