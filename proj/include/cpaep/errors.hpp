// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CPAEP_ERRORS_HPP
#define CPAEP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpaep
{

// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (w = 0 for the coupler,
// zero input energy, invalid waveform).
class DomainError : public Error
{
public:
  using Error::Error;
};

// A reflection-coefficient denominator vanished. `interface_index` is 1, 2 or 3 for
// the Z0|Z1, Z1|Z2 and Z2|load junctions.
class PoleError : public Error
{
public:
  PoleError(int interface_index, const std::string &what)
    : Error(what), interface_index_(interface_index)
  {
  }
  int interface_index() const noexcept { return interface_index_; }

private:
  int interface_index_;
};

class DegenerateGeometryError : public Error
{
public:
  using Error::Error;
};

// Newton or series iteration failed to converge. Carries the residual history.
class DivergenceError : public Error
{
public:
  DivergenceError(const std::string &what, std::vector<double> trace = {})
    : Error(what), trace_(std::move(trace))
  {
  }
  const std::vector<double> &trace() const noexcept { return trace_; }

private:
  std::vector<double> trace_;
};

// Converged, but the circuit parameters are not realizable.
class RejectedSolutionError : public Error
{
public:
  RejectedSolutionError(std::string constraint, const std::string &what)
    : Error(what), constraint_(std::move(constraint))
  {
  }
  const std::string &constraint() const noexcept { return constraint_; }

private:
  std::string constraint_;
};

class ContinuationBreakError : public Error
{
public:
  ContinuationBreakError(double last_good_parameter, const std::string &what)
    : Error(what), last_good_parameter_(last_good_parameter)
  {
  }
  double last_good_parameter() const noexcept { return last_good_parameter_; }

private:
  double last_good_parameter_;
};

// Spectral grid too coarse: the energy balance check failed.
class RefinementNeededError : public Error
{
public:
  RefinementNeededError(double imbalance, const std::string &what)
    : Error(what), imbalance_(imbalance)
  {
  }
  double imbalance() const noexcept { return imbalance_; }

private:
  double imbalance_;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace cpaep

#endif  // CPAEP_ERRORS_HPP
