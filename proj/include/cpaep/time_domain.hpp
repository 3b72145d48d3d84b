// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CPAEP_TIME_DOMAIN_HPP
#define CPAEP_TIME_DOMAIN_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cpaep/types.hpp"

namespace cpaep
{

// t^m e^{sigma t} e^{i omega_r t} on [0, T], zero outside, scaled to peak magnitude
// `amplitude`.
struct Waveform
{
  int m = 0;
  double omega_r = 0.0;  // rad/s
  double sigma = 0.0;    // 1/s, positive grows
  double T = 0.0;        // s
  std::size_t n_samples = 1024;
  double amplitude = 1.0;

  double dt() const { return T / static_cast<double>(n_samples - 1); }
  // Throws DomainError on m < 0, T <= 0, n_samples < 1024, sampling below 40 samples per
  // carrier period or sigma T > 40.
  void validate() const;
};

struct TimeSeries
{
  double t0 = 0.0;
  double dt = 0.0;
  Eigen::VectorXcd samples;

  Eigen::Index size() const { return samples.size(); }
  double time(Eigen::Index i) const { return t0 + static_cast<double>(i) * dt; }
  double end_time() const { return time(size() - 1); }
  // dt * sum |x|^2
  double energy() const;
};

// Symmetric real-frequency grid omega_k = k d_omega, k = -half_count..half_count.
struct SpectrumSpec
{
  double d_omega = 0.0;
  std::size_t half_count = 0;

  std::size_t size() const { return 2 * half_count + 1; }
  double omega(std::size_t i) const
  {
    return (static_cast<double>(i) - static_cast<double>(half_count)) * d_omega;
  }
};

struct Spectrum
{
  Eigen::VectorXd omega;
  Eigen::VectorXcd values;
  double d_omega = 0.0;

  // (1 / 2pi) * trapezoid of |F|^2 over the grid.
  double energy() const;
};

TimeSeries synthesize(const Waveform &w);

// Grid covering [-pi/dt, pi/dt] with spacing 2 pi / (pad * n * dt). With pad >= 1 the
// sum pair below is an exact discrete transform pair on the period pad * n * dt.
SpectrumSpec spectrum_for(double dt, std::size_t n, int pad = 8);

// F(w) = dt * sum_j x_j e^{-i w t_j}: the trapezoid rule on the zero-extended signal.
Spectrum forward_transform(const TimeSeries &ts, const SpectrumSpec &spec,
                           unsigned workers = 0);

// s(t_n) = (1/2pi) * trapezoid over the grid of H(w) F(w) e^{i w t_n}.
TimeSeries inverse_transform(const Spectrum &spectrum, double t0, double dt, std::size_t n,
                             unsigned workers = 0);

struct ScatterOptions
{
  int pad = 8;
  // Output window runs to T + round_trips_after * (2 (l1 + l2) / v).
  double round_trips_after = 10.0;
  std::optional<double> t_end;  // overrides the padding rule when set
  double tolerance = 1e-3;      // energy balance
  unsigned workers = 0;
};

struct ScatterResult
{
  TimeSeries output;
  // |E_out - E_in| / E_in between output and input spectra (0 for a lossless transfer).
  double spectral_imbalance = 0.0;
  // Energy returned before t = t0 (wrap-around of an unresolved response) over E_in.
  double acausal_leakage = 0.0;
};

using Transfer = std::function<cdouble(double omega)>;

// Applies a real-axis transfer function to `input`; output samples share t0 and dt.
// `lossless` turns on the spectral energy check. Throws RefinementNeededError when a
// check exceeds opts.tolerance.
ScatterResult apply_transfer(const TimeSeries &input, const Transfer &transfer,
                             double t_end, bool lossless, const ScatterOptions &opts = {});

ScatterResult scattered_field(const CircuitConfig &cfg, const TimeSeries &input,
                              const ScatterOptions &opts = {});

// f(t_n) = dt sum_{j <= n} |s_j|^2 / (dt sum |x|^2). Throws DomainError for zero input
// energy or mismatched time bases.
TimeSeries fractional_scattered_energy(const TimeSeries &input, const TimeSeries &scattered);

struct CaptureSummary
{
  double fraction_at_drive_end = 0.0;  // f(T)
  double fraction_at_window_end = 0.0;
  // max over t of (input energy so far - scattered energy so far) / E_in
  double peak_stored = 0.0;
  double peak_time = 0.0;
};

CaptureSummary summarize_capture(const TimeSeries &input, const TimeSeries &scattered,
                                 double drive_end);

struct TaylorMatch
{
  double gamma_in = 0.0;
  double gamma_cavity = 0.0;
  int order = 0;
  std::vector<double> coefficients;  // c_k of t^k
  double t_max = 0.0;
  double residual = 0.0;  // sup over [0, t_max] of the truncation error
};

// e^{-(G + G2) t} = sum_k c_k t^k with c_k = (-(G + G2))^k / k!, truncated at `order`.
TaylorMatch taylor_match(double gamma_in, double gamma_cavity, int order, double t_max = 0.0);

// Bounce expansion of r(w) with both round-trip series truncated after n_bounces terms.
// Throws DivergenceError where either geometric ratio has modulus >= 1.
cdouble geometric_series_reflection(const CircuitConfig &cfg, ComplexFrequency omega,
                                    int n_bounces);

}  // namespace cpaep

#endif  // CPAEP_TIME_DOMAIN_HPP
