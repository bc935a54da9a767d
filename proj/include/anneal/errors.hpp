#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace anneal {

// Invalid argument or state detected before any computation.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Input outside the mathematical domain of an operation (non-finite point,
// negative time, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Evaluation requested beyond a materialized table.
class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

// A size/work guard tripped (e.g. grid node budget).
class BudgetError : public std::length_error {
 public:
  explicit BudgetError(const std::string& what) : std::length_error(what) {}
};

// Non-finite value produced during numerics; carries the offending location.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::vector<double> where = {})
      : std::runtime_error(describe(what, where)), where_(std::move(where)) {}

  const std::vector<double>& where() const { return where_; }

 private:
  static std::string describe(const std::string& what,
                              const std::vector<double>& where) {
    if (where.empty()) return what;
    std::ostringstream os;
    os << what << " at (";
    for (std::size_t i = 0; i < where.size(); ++i) {
      if (i) os << ", ";
      os << where[i];
    }
    os << ")";
    return os.str();
  }

  std::vector<double> where_;
};

}  // namespace anneal
