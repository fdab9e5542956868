#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace arboreal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: unparsable polynomial, non-prime modulus, etc.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotPrime : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class Undefined : public Error {
 public:
  using Error::Error;
};

/// Raised when a configured resource limit stops a computation early.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class TimeBudgetExceeded : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

class DegreeBudgetExceeded : public BudgetExceeded {
 public:
  DegreeBudgetExceeded(int degree, int cap)
      : BudgetExceeded("degree " + std::to_string(degree) + " exceeds cap " +
                       std::to_string(cap)),
        degree_(degree),
        cap_(cap) {}
  int degree() const { return degree_; }
  int cap() const { return cap_; }

 private:
  int degree_;
  int cap_;
};

/// A search with a hard cap (subset recombination, collision search) stopped without a verdict.
class Inconclusive : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

inline constexpr int kDefaultDegreeCap = 243;

/// Wall-clock deadline shared by long-running operations. Default: unlimited.
class Deadline {
 public:
  Deadline() = default;
  static Deadline after(double seconds) {
    Deadline d;
    if (seconds > 0) {
      d.end_ = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(seconds));
    }
    return d;
  }
  bool unlimited() const { return !end_.has_value(); }
  bool expired() const {
    return end_.has_value() && std::chrono::steady_clock::now() >= *end_;
  }
  void check(const char* what) const {
    if (expired()) throw TimeBudgetExceeded(std::string("time budget exhausted in ") + what);
  }

 private:
  std::optional<std::chrono::steady_clock::time_point> end_;
};

}  // namespace arboreal
