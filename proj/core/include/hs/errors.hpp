#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hs {

/// Base class for every error raised by the library. `exit_code()` is the
/// process status the command line tool maps the error to.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 4; }
  virtual const char* kind() const noexcept { return "internal"; }
};

/// Invalid scenario, schema violation or bad argument.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
  const char* kind() const noexcept override { return "config"; }
};

/// An iterative solve failed to reach its tolerance, or a discrete
/// invariant that must hold exactly was violated.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual = 0.0,
              std::vector<double> history = {})
      : Error(what), residual_(residual), history_(std::move(history)) {}

  int exit_code() const noexcept override { return 2; }
  const char* kind() const noexcept override { return "solver"; }
  double residual() const noexcept { return residual_; }
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  double residual_;
  std::vector<double> history_;
};

/// The truncated computational domain is too small: either the margin does
/// not contain the supersolution envelope, or a diffusive region reached the
/// far-field band during a run.
class EnvelopeError : public Error {
 public:
  explicit EnvelopeError(const std::string& what, double required_margin = 0.0)
      : Error(what), required_margin_(required_margin) {}

  int exit_code() const noexcept override { return 3; }
  const char* kind() const noexcept override { return "envelope"; }
  double required_margin() const noexcept { return required_margin_; }

 private:
  double required_margin_;
};

}  // namespace hs
