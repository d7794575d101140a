#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gibbsdecomp {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad shapes, invalid tables, bad JSON fields.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An enumeration, transport or pair-search budget would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Conditioning on an event of probability zero.
class ZeroMassError : public Error {
 public:
  using Error::Error;
};

// A divergence that the caller required to be finite is +inf.
class InfiniteDivergence : public Error {
 public:
  using Error::Error;
};

// Iterative solver gave up. Carries the last achieved error and, for the
// tanh iteration, the visited iterates.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double achieved,
                 std::vector<std::vector<double>> trajectory = {})
      : Error(what), achieved_(achieved), trajectory_(std::move(trajectory)) {}

  double achieved() const noexcept { return achieved_; }
  const std::vector<std::vector<double>>& trajectory() const noexcept {
    return trajectory_;
  }

 private:
  double achieved_;
  std::vector<std::vector<double>> trajectory_;
};

}  // namespace gibbsdecomp
