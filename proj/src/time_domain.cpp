// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cpaep/time_domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpaep/circuit_model.hpp"
#include "cpaep/errors.hpp"
#include "parallel.hpp"

namespace cpaep
{

namespace
{

// Phasors are advanced by multiplication and recomputed exactly this often.
constexpr int resync_interval = 64;

// sum_k c_k z^k for z = e^{i theta}, k = 0..n-1.
cdouble phasor_sum(const cdouble *c, std::size_t n, double theta)
{
  const cdouble rot = std::polar(1.0, theta);
  cdouble z = 1.0;
  cdouble acc = 0.0;
  for (std::size_t k = 0; k < n; ++k)
  {
    if (k % resync_interval == 0)
    {
      z = std::polar(1.0, theta * static_cast<double>(k));
    }
    acc += c[k] * z;
    z *= rot;
  }
  return acc;
}

}  // namespace

void Waveform::validate() const
{
  if (m < 0)
  {
    throw DomainError("envelope order m must be non-negative");
  }
  if (!(T > 0.0) || !std::isfinite(T))
  {
    throw DomainError("window length T must be positive");
  }
  if (n_samples < 1024)
  {
    throw DomainError("waveform needs at least 1024 samples");
  }
  if (!std::isfinite(omega_r) || !std::isfinite(sigma))
  {
    throw DomainError("carrier and growth rate must be finite");
  }
  const double rate = 1.0 / dt();
  if (rate < 40.0 * std::abs(omega_r) / two_pi)
  {
    throw DomainError("sampling rate is below 40 samples per carrier period");
  }
  if (sigma * T > 40.0)
  {
    throw DomainError("sigma * T > 40: dynamic range of the growing window overflows");
  }
}

double TimeSeries::energy() const { return dt * samples.squaredNorm(); }

double Spectrum::energy() const
{
  if (values.size() == 0)
  {
    return 0.0;
  }
  const Eigen::Index n = values.size();
  double sum = values.squaredNorm() - 0.5 * (std::norm(values(0)) + std::norm(values(n - 1)));
  return sum * d_omega / two_pi;
}

TimeSeries synthesize(const Waveform &w)
{
  w.validate();
  TimeSeries ts;
  ts.dt = w.dt();
  ts.samples.resize(static_cast<Eigen::Index>(w.n_samples));
  for (Eigen::Index j = 0; j < ts.size(); ++j)
  {
    const double t = ts.time(j);
    const double env = (w.m == 0 ? 1.0 : std::pow(t, w.m)) * std::exp(w.sigma * t);
    ts.samples(j) = std::polar(env, w.omega_r * t);
  }
  const double peak = ts.samples.cwiseAbs().maxCoeff();
  if (!(peak > 0.0) || !std::isfinite(peak))
  {
    throw DomainError("waveform has no finite nonzero peak");
  }
  ts.samples *= w.amplitude / peak;
  return ts;
}

SpectrumSpec spectrum_for(double dt, std::size_t n, int pad)
{
  if (!(dt > 0.0) || n == 0 || pad < 1)
  {
    throw DomainError("spectrum grid needs dt > 0, n > 0 and pad >= 1");
  }
  const std::size_t m = static_cast<std::size_t>(pad) * n;
  const std::size_t half = (m + 1) / 2;
  return {two_pi / (static_cast<double>(2 * half) * dt), half};
}

Spectrum forward_transform(const TimeSeries &ts, const SpectrumSpec &spec, unsigned workers)
{
  Spectrum out;
  out.d_omega = spec.d_omega;
  out.omega.resize(static_cast<Eigen::Index>(spec.size()));
  out.values.resize(static_cast<Eigen::Index>(spec.size()));
  const std::size_t n = static_cast<std::size_t>(ts.size());
  detail::parallel_for(spec.size(), workers, [&](std::size_t i) {
    const double w = spec.omega(i);
    const cdouble start = std::polar(1.0, -w * ts.t0);
    out.omega(static_cast<Eigen::Index>(i)) = w;
    out.values(static_cast<Eigen::Index>(i)) =
      ts.dt * start * phasor_sum(ts.samples.data(), n, -w * ts.dt);
  });
  return out;
}

TimeSeries inverse_transform(const Spectrum &spectrum, double t0, double dt, std::size_t n,
                             unsigned workers)
{
  // Trapezoid weights: half at both ends of the grid.
  Eigen::VectorXcd weighted = spectrum.values;
  const Eigen::Index m = weighted.size();
  weighted(0) *= 0.5;
  weighted(m - 1) *= 0.5;
  const double w0 = spectrum.omega(0);

  TimeSeries out;
  out.t0 = t0;
  out.dt = dt;
  out.samples.resize(static_cast<Eigen::Index>(n));
  detail::parallel_for(n, workers, [&](std::size_t j) {
    const double t = t0 + static_cast<double>(j) * dt;
    const cdouble sum =
      phasor_sum(weighted.data(), static_cast<std::size_t>(m), spectrum.d_omega * t);
    out.samples(static_cast<Eigen::Index>(j)) =
      std::polar(spectrum.d_omega / two_pi, w0 * t) * sum;
  });
  return out;
}

ScatterResult apply_transfer(const TimeSeries &input, const Transfer &transfer,
                             double t_end, bool lossless, const ScatterOptions &opts)
{
  if (input.size() == 0 || !(input.dt > 0.0))
  {
    throw DomainError("input time series is empty");
  }
  const double e_in = input.energy();
  if (!(e_in > 0.0))
  {
    throw DomainError("input energy is zero");
  }
  const auto n_out =
    static_cast<std::size_t>(std::ceil((t_end - input.t0) / input.dt - 1e-9)) + 1;
  const std::size_t n_max = std::max<std::size_t>(n_out, static_cast<std::size_t>(input.size()));
  const SpectrumSpec spec = spectrum_for(input.dt, n_max, opts.pad);

  Spectrum spectrum = forward_transform(input, spec, opts.workers);
  const double e_spec_in = spectrum.energy();
  detail::parallel_for(spec.size(), opts.workers, [&](std::size_t i) {
    spectrum.values(static_cast<Eigen::Index>(i)) *= transfer(spec.omega(i));
  });

  ScatterResult result;
  if (lossless)
  {
    result.spectral_imbalance = std::abs(spectrum.energy() - e_spec_in) / e_in;
  }
  result.output = inverse_transform(spectrum, input.t0, input.dt, n_out, opts.workers);

  // Samples just before t0 sit at the end of the period; a resolved causal response
  // leaves them empty.
  const std::size_t period = 2 * spec.half_count;
  const std::size_t n_pre = std::min(period - n_out, n_out / 4 + 1);
  if (n_pre > 0)
  {
    const TimeSeries pre = inverse_transform(
      spectrum, input.t0 - static_cast<double>(n_pre) * input.dt, input.dt, n_pre, opts.workers);
    result.acausal_leakage = pre.energy() / e_in;
  }

  const double worst = std::max(result.spectral_imbalance, result.acausal_leakage);
  if (worst > opts.tolerance)
  {
    throw RefinementNeededError(
      worst, "spectral grid does not resolve the response (energy imbalance " +
               std::to_string(worst) + ")");
  }
  return result;
}

ScatterResult scattered_field(const CircuitConfig &cfg, const TimeSeries &input,
                              const ScatterOptions &opts)
{
  const double t_end =
    opts.t_end ? *opts.t_end : input.end_time() + opts.round_trips_after * cfg.round_trip_time();
  const bool lossless = std::holds_alternative<ShortLoad>(cfg.load) ||
                        (std::holds_alternative<FixedReflection>(cfg.load) &&
                         std::abs(std::abs(std::get<FixedReflection>(cfg.load).r3) - 1.0) < 1e-12);
  return apply_transfer(
    input, [&cfg](double w) { return total_reflection(cfg, {w, 0.0}); }, t_end, lossless, opts);
}

TimeSeries fractional_scattered_energy(const TimeSeries &input, const TimeSeries &scattered)
{
  if (input.dt != scattered.dt || input.t0 != scattered.t0)
  {
    throw DomainError("input and scattered series must share a time base");
  }
  const double e_in = input.energy();
  if (!(e_in > 0.0))
  {
    throw DomainError("input energy is zero");
  }
  TimeSeries out;
  out.t0 = scattered.t0;
  out.dt = scattered.dt;
  out.samples.resize(scattered.size());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < scattered.size(); ++j)
  {
    acc += scattered.dt * std::norm(scattered.samples(j));
    out.samples(j) = acc / e_in;
  }
  return out;
}

CaptureSummary summarize_capture(const TimeSeries &input, const TimeSeries &scattered,
                                 double drive_end)
{
  const TimeSeries f = fractional_scattered_energy(input, scattered);
  const double e_in = input.energy();
  CaptureSummary s;
  const auto i_end = std::clamp<Eigen::Index>(
    static_cast<Eigen::Index>(std::floor((drive_end - f.t0) / f.dt + 1e-9)), 0, f.size() - 1);
  s.fraction_at_drive_end = f.samples(i_end).real();
  s.fraction_at_window_end = f.samples(f.size() - 1).real();
  double fed = 0.0;
  for (Eigen::Index j = 0; j < f.size(); ++j)
  {
    if (j < input.size())
    {
      fed += input.dt * std::norm(input.samples(j));
    }
    const double stored = fed / e_in - f.samples(j).real();
    if (stored > s.peak_stored)
    {
      s.peak_stored = stored;
      s.peak_time = f.time(j);
    }
  }
  return s;
}

TaylorMatch taylor_match(double gamma_in, double gamma_cavity, int order, double t_max)
{
  if (order < 0)
  {
    throw DomainError("Taylor order must be non-negative");
  }
  TaylorMatch out{gamma_in, gamma_cavity, order, {}, t_max, 0.0};
  const double a = -(gamma_in + gamma_cavity);
  double c = 1.0;
  for (int k = 0; k <= order; ++k)
  {
    if (k > 0)
    {
      c *= a / k;
    }
    out.coefficients.push_back(c);
  }
  if (t_max > 0.0)
  {
    // The truncation error is the tail sum; summing it directly avoids cancellation.
    constexpr int n_grid = 2001;
    for (int i = 0; i < n_grid; ++i)
    {
      const double t = t_max * i / (n_grid - 1);
      double term = out.coefficients.back() * std::pow(t, order);
      double tail = 0.0;
      for (int k = order + 1; k < order + 400; ++k)
      {
        term *= a * t / k;
        tail += term;
        if (std::abs(term) <= 1e-18 * std::abs(tail))
        {
          break;
        }
      }
      out.residual = std::max(out.residual, std::abs(tail));
    }
  }
  return out;
}

cdouble geometric_series_reflection(const CircuitConfig &cfg, ComplexFrequency omega,
                                    int n_bounces)
{
  if (n_bounces < 0)
  {
    throw DomainError("bounce count must be non-negative");
  }
  const cdouble w = omega.value();
  const auto junction = feed_junction(cfg, w);
  if (n_bounces == 0)
  {
    return junction.rho_in;
  }
  const cdouble e1 = round_trip_factor(cfg.l1, cfg.v, w);
  const cdouble e2 = round_trip_factor(cfg.l2, cfg.v, w);
  const double r2 = (cfg.Z2 - cfg.Z1) / (cfg.Z2 + cfg.Z1);
  const cdouble r3 = load_reflection<cdouble>(cfg.load, cfg.Z2, w);

  const cdouble inner_ratio = r2 * r3 * e2;
  if (std::abs(inner_ratio) >= 1.0)
  {
    throw DivergenceError("segment-2 bounce series diverges: |r2 r3 e2| >= 1");
  }
  const cdouble gamma_closed = e1 * (r2 - r3 * e2) / (1.0 - inner_ratio);
  if (std::abs(junction.rho_back * gamma_closed) >= 1.0)
  {
    throw DivergenceError("segment-1 bounce series diverges: |rho' G| >= 1");
  }

  cdouble inner = 0.0;
  cdouble p = 1.0;
  for (int k = 0; k < n_bounces; ++k)
  {
    inner += p;
    p *= inner_ratio;
  }
  const cdouble gamma = e1 * (r2 + (1.0 - r2 * r2) * (-r3 * e2) * inner);

  cdouble outer = 0.0;
  cdouble q = 1.0;
  const cdouble outer_ratio = -junction.rho_back * gamma;
  for (int k = 0; k < n_bounces; ++k)
  {
    outer += q;
    q *= outer_ratio;
  }
  return junction.rho_in + junction.transmission * gamma * outer;
}

}  // namespace cpaep
