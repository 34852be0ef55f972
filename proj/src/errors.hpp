#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace clusterkin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input violates its documented range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A linear system required by the semianalytic reduction has no unique
/// solution for this parameter set.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// The cubic for [R2] at a given [R1] did not have exactly one admissible
/// positive root.
class AssemblyError : public Error {
 public:
  AssemblyError(const std::string& what, int root_count)
      : Error(what), root_count_(root_count) {}
  int root_count() const noexcept { return root_count_; }

 private:
  int root_count_;
};

/// The ODE integrator could not continue. Carries the last accepted state.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double t, std::vector<double> last_state)
      : Error(what), t_(t), last_state_(std::move(last_state)) {}
  double time() const noexcept { return t_; }
  const std::vector<double>& last_state() const noexcept { return last_state_; }

 private:
  double t_;
  std::vector<double> last_state_;
};

/// An iterative solver stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_state)
      : Error(what), best_state_(std::move(best_state)) {}
  const std::vector<double>& best_state() const noexcept { return best_state_; }

 private:
  std::vector<double> best_state_;
};

}  // namespace clusterkin
