#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coherentfl {

// Invalid or inconsistent experiment configuration (bad dimensions, bad
// schema, powers that cannot form a frame, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Device pool cannot satisfy a scheduling request.
class SchedulingError : public std::runtime_error {
 public:
  explicit SchedulingError(const std::string& what) : std::runtime_error(what) {}
};

// Transmit powers exceed the frame budget; carries the measured excess.
class PowerConstraintError : public std::runtime_error {
 public:
  PowerConstraintError(const std::string& what, double excess)
      : std::runtime_error(what), excess_(excess) {}
  double excess() const { return excess_; }

 private:
  double excess_;
};

// Power budget too small for a nonnegative pilot power; carries the smallest
// feasible budget.
class InfeasibleBudgetError : public std::runtime_error {
 public:
  InfeasibleBudgetError(const std::string& what, double min_feasible_rho)
      : std::runtime_error(what), min_feasible_rho_(min_feasible_rho) {}
  double min_feasible_rho() const { return min_feasible_rho_; }

 private:
  double min_feasible_rho_;
};

// Malformed IDX payload; carries the byte offset where parsing failed.
class IdxParseError : public std::runtime_error {
 public:
  IdxParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace coherentfl
