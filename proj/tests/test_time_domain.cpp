// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cpaep/circuit_model.hpp"
#include "cpaep/errors.hpp"
#include "cpaep/time_domain.hpp"
#include "oracles.hpp"

using namespace cpaep;
using oracle::rel_err;

namespace
{

// Drive matched to an EP: carrier Re(w_ep), rate +/-|Im(w_ep)|, window 12 / Gamma2.
Waveform ep_drive(const EPSolution &ep, int m, bool growing)
{
  const double gamma = ep.omega_ep.growth_rate();
  Waveform w;
  w.m = m;
  w.omega_r = ep.omega_ep.re;
  w.sigma = growing ? gamma : -gamma;
  w.T = 12.0 / gamma;
  return w;
}

CaptureSummary capture(const EPSolution &ep, const Waveform &w, double round_trips = 10.0)
{
  const TimeSeries in = synthesize(w);
  ScatterOptions opts;
  opts.round_trips_after = round_trips;
  const auto out = scattered_field(ep.circuit, in, opts);
  return summarize_capture(in, out.output, w.T);
}

TimeSeries sampled(const oracle::GaussianPulse &p, double dt, std::size_t n)
{
  TimeSeries ts;
  ts.dt = dt;
  ts.samples.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < ts.size(); ++j)
  {
    ts.samples(j) = p(ts.time(j));
  }
  return ts;
}

std::vector<cdouble> as_vector(const TimeSeries &ts)
{
  return {ts.samples.data(), ts.samples.data() + ts.size()};
}

double fitted_slope(const std::vector<double> &x, const std::vector<double> &y)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST(Synthesize, PureTone)
{
  Waveform w;
  w.omega_r = two_pi * 5e9;
  w.T = 4e-9;
  w.amplitude = 2.5;
  const auto ts = synthesize(w);
  ASSERT_EQ(ts.size(), 1024);
  for (Eigen::Index j = 0; j < ts.size(); ++j)
  {
    const cdouble want = std::polar(2.5, w.omega_r * ts.time(j));
    EXPECT_LT(std::abs(ts.samples(j) - want), 1e-12);
  }
}

TEST(Synthesize, GrowingDriveAtEpRate)
{
  const Waveform w = ep_drive(oracle::main_ep(), 0, true);
  const auto ts = synthesize(w);
  const double last = ts.end_time();
  for (Eigen::Index j = 0; j < ts.size(); ++j)
  {
    const double t = ts.time(j);
    const cdouble want = std::polar(std::exp(w.sigma * (t - last)), w.omega_r * t);
    EXPECT_LT(std::abs(ts.samples(j) - want), 1e-12);
  }
  EXPECT_NEAR(w.sigma, two_pi * 0.834e9, 0.005 * two_pi * 0.834e9);
}

TEST(Synthesize, LinearEnvelopeDecay)
{
  const double gamma = two_pi * 1.47e9;
  Waveform w;
  w.m = 1;
  w.omega_r = two_pi * 5.13e9;
  w.sigma = -gamma;
  w.T = 12.0 / gamma;
  w.n_samples = 4096;
  const auto ts = synthesize(w);
  double peak = 0.0;
  for (Eigen::Index j = 0; j < ts.size(); ++j)
  {
    peak = std::max(peak, ts.time(j) * std::exp(-gamma * ts.time(j)));
  }
  for (Eigen::Index j = 0; j < ts.size(); j += 7)
  {
    const double t = ts.time(j);
    const cdouble want = std::polar(t * std::exp(-gamma * t) / peak, w.omega_r * t);
    EXPECT_LT(std::abs(ts.samples(j) - want), 1e-12);
  }
  // Continuous peak at t = 1/gamma.
  EXPECT_NEAR(ts.samples.cwiseAbs().maxCoeff(), 1.0, 1e-15);
}

TEST(Synthesize, Guards)
{
  Waveform ok;
  ok.omega_r = two_pi * 5e9;
  ok.T = 4e-9;
  EXPECT_NO_THROW(synthesize(ok));

  Waveform w = ok;
  w.m = -1;
  EXPECT_THROW(synthesize(w), DomainError);
  w = ok;
  w.T = 0.0;
  EXPECT_THROW(synthesize(w), DomainError);
  w = ok;
  w.n_samples = 1000;
  EXPECT_THROW(synthesize(w), DomainError);
  w = ok;
  w.T = 20e-9;  // 51 GS/s against a 40 x 5 GHz requirement
  EXPECT_THROW(synthesize(w), DomainError);
  w = ok;
  w.sigma = 41.0 / w.T;
  EXPECT_THROW(synthesize(w), DomainError);
  w.sigma = 39.0 / w.T;
  EXPECT_NO_THROW(synthesize(w));
}

TEST(ForwardTransform, DeltaHasFlatSpectrum)
{
  TimeSeries ts;
  ts.dt = 1e-12;
  ts.samples = Eigen::VectorXcd::Zero(1024);
  ts.samples(300) = 1.0;
  const auto spec = forward_transform(ts, spectrum_for(ts.dt, 1024));
  for (Eigen::Index k = 0; k < spec.values.size(); ++k)
  {
    EXPECT_NEAR(std::abs(spec.values(k)), ts.dt, 1e-12 * ts.dt);
  }
}

TEST(ForwardTransform, WindowedToneMatchesClosedForm)
{
  const SpectrumSpec grid = spectrum_for(4e-9 / 1023.0, 1024);
  Waveform w;
  w.T = 4e-9;
  w.omega_r = 80.0 * grid.d_omega;  // on the grid, 5 GHz
  const auto ts = synthesize(w);
  const auto spec = forward_transform(ts, grid);
  const double dt = ts.dt;
  const double n = static_cast<double>(ts.size());
  double peak = 0.0;
  double peak_omega = 0.0;
  for (Eigen::Index k = 0; k < spec.values.size(); ++k)
  {
    const double dw = w.omega_r - spec.omega(k);
    // dt * sum_j e^{i dw t_j} as a geometric sum.
    const cdouble q = std::polar(1.0, dw * dt);
    const cdouble want = std::abs(1.0 - q) < 1e-14 ? cdouble(n * dt)
                                                   : dt * (1.0 - std::pow(q, n)) / (1.0 - q);
    EXPECT_LT(std::abs(spec.values(k) - want), 1e-9 * n * dt) << k;
    if (std::abs(spec.values(k)) > peak)
    {
      peak = std::abs(spec.values(k));
      peak_omega = spec.omega(k);
    }
  }
  EXPECT_DOUBLE_EQ(peak_omega, w.omega_r);
  EXPECT_LT(rel_err(peak, w.T * w.amplitude), 1e-3);
}

TEST(ForwardTransform, Parseval)
{
  const auto ts = synthesize(ep_drive(oracle::main_ep(), 1, true));
  const auto spec = forward_transform(ts, spectrum_for(ts.dt, ts.size()));
  EXPECT_LT(rel_err(spec.energy(), ts.energy()), 1e-6);
}

TEST(ApplyTransfer, IdentityReturnsInput)
{
  const auto ts = synthesize(ep_drive(oracle::main_ep(), 0, true));
  const auto out = apply_transfer(ts, [](double) { return cdouble(1.0); }, ts.end_time(), true);
  ASSERT_EQ(out.output.size(), ts.size());
  EXPECT_LT(oracle::relative_l2(as_vector(out.output), as_vector(ts)), 1e-8);
}

TEST(ApplyTransfer, AgreesWithRefinedSimpsonQuadrature)
{
  const CircuitConfig &cfg = oracle::main_ep().circuit;
  const Transfer r = [&cfg](double w) { return total_reflection(cfg, {w, 0.0}); };
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> tc(1.2e-9, 1.8e-9), tau(0.2e-9, 0.25e-9),
    fc(4e9, 6e9);
  const double dt = 5e-12;
  const std::size_t n_in = 601;
  for (int trial = 0; trial < 3; ++trial)
  {
    const oracle::GaussianPulse p{tc(rng), tau(rng), two_pi * fc(rng)};
    const TimeSeries in = sampled(p, dt, n_in);
    const double t_end = in.end_time() + 10.0 * cfg.round_trip_time();
    const auto out = apply_transfer(in, r, t_end, true);
    const auto spec =
      spectrum_for(dt, std::max<std::size_t>(out.output.size(), n_in), ScatterOptions{}.pad);
    std::vector<double> t_out;
    for (Eigen::Index j = 0; j < out.output.size(); ++j)
    {
      t_out.push_back(out.output.time(j));
    }
    const auto ref = oracle::simpson_scattered(r, p, in.end_time(), dt, spec.d_omega,
                                               spec.omega(spec.size() - 1), t_out, 4);
    EXPECT_LT(oracle::relative_l2(as_vector(out.output), ref), 1e-6) << trial;
  }
}

TEST(ApplyTransfer, GainFailsEnergyCheck)
{
  const auto ts = synthesize(ep_drive(oracle::main_ep(), 0, false));
  EXPECT_THROW(apply_transfer(ts, [](double) { return cdouble(2.0); }, ts.end_time(), true),
               RefinementNeededError);
}

TEST(ApplyTransfer, AcausalResponseFailsLeakageCheck)
{
  const oracle::GaussianPulse p{1.5e-9, 0.2e-9, two_pi * 5e9};
  const TimeSeries in = sampled(p, 5e-12, 601);
  const double advance = 2e-9;
  const Transfer ahead = [advance](double w) { return std::polar(1.0, w * advance); };
  EXPECT_THROW(apply_transfer(in, ahead, in.end_time(), true), RefinementNeededError);
}

TEST(ApplyTransfer, PureDelayShiftsByWholeSamples)
{
  const oracle::GaussianPulse p{1.0e-9, 0.15e-9, two_pi * 5e9};
  const TimeSeries in = sampled(p, 5e-12, 601);
  const int lag = 137;
  const double tau = lag * in.dt;
  const Transfer delay = [tau](double w) { return std::polar(1.0, -w * tau); };
  const auto out = apply_transfer(in, delay, in.end_time() + tau, true);
  for (Eigen::Index j = 0; j < in.size(); ++j)
  {
    EXPECT_LT(std::abs(out.output.samples(j + lag) - in.samples(j)), 1e-9);
  }
}

TEST(ScatteredField, Linearity)
{
  const auto &ep = oracle::main_ep();
  const Waveform w = ep_drive(ep, 0, true);
  const TimeSeries x = synthesize(w);
  const TimeSeries y = sampled({1.0e-9, 0.2e-9, two_pi * 4.5e9}, x.dt, x.size());
  const cdouble a(0.7, -0.2), b(-1.3, 0.4);
  TimeSeries xy = x;
  xy.samples = a * x.samples + b * y.samples;
  const auto sx = scattered_field(ep.circuit, x).output;
  const auto sy = scattered_field(ep.circuit, y).output;
  const auto sxy = scattered_field(ep.circuit, xy).output;
  TimeSeries combo = sx;
  combo.samples = a * sx.samples + b * sy.samples;
  EXPECT_LT(oracle::relative_l2(as_vector(sxy), as_vector(combo)), 1e-10);
}

TEST(ScatteredField, ResponseDoesNotLeadInput)
{
  const auto &ep = oracle::main_ep();
  const TimeSeries in = sampled({1.0e-9, 0.15e-9, ep.omega_ep.re}, 5e-12, 601);
  const auto out = scattered_field(ep.circuit, in);
  EXPECT_LT(out.acausal_leakage, 1e-6);
  // Lag of the cross-correlation maximum.
  const Eigen::Index n = in.size();
  double best = -1.0;
  Eigen::Index best_lag = 0;
  for (Eigen::Index lag = -n / 2; lag < n / 2; ++lag)
  {
    cdouble c = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
    {
      const Eigen::Index k = j + lag;
      if (k >= 0 && k < out.output.size())
      {
        c += out.output.samples(k) * std::conj(in.samples(j));
      }
    }
    if (std::abs(c) > best)
    {
      best = std::abs(c);
      best_lag = lag;
    }
  }
  EXPECT_GE(best_lag, 0);
}

TEST(FractionalEnergy, MonotoneAndNormalized)
{
  const auto &ep = oracle::main_ep();
  const TimeSeries in = synthesize(ep_drive(ep, 0, false));
  const auto out = scattered_field(ep.circuit, in).output;
  const auto f = fractional_scattered_energy(in, out);
  for (Eigen::Index j = 1; j < f.size(); ++j)
  {
    EXPECT_GE(f.samples(j).real(), f.samples(j - 1).real());
  }
  EXPECT_LE(f.samples(f.size() - 1).real(), 1.0 + 1e-3);
}

TEST(FractionalEnergy, Errors)
{
  const TimeSeries in = synthesize(ep_drive(oracle::main_ep(), 0, true));
  TimeSeries zero = in;
  zero.samples.setZero();
  EXPECT_THROW(fractional_scattered_energy(zero, in), DomainError);
  TimeSeries shifted = in;
  shifted.dt *= 2.0;
  EXPECT_THROW(fractional_scattered_energy(in, shifted), DomainError);
  EXPECT_THROW(apply_transfer(zero, [](double) { return cdouble(1.0); }, 1e-9, true),
               DomainError);
}

TEST(Capture, GrowingDriveIsAbsorbed)
{
  const auto &ep = oracle::main_ep();
  EXPECT_LE(capture(ep, ep_drive(ep, 0, true)).fraction_at_drive_end, 1e-3);
}

TEST(Capture, LinearGrowingDriveIsAbsorbed)
{
  const auto &ep = oracle::main_ep();
  EXPECT_LE(capture(ep, ep_drive(ep, 1, true)).fraction_at_drive_end, 1e-3);
}

TEST(Capture, NaturalWaveMostlyAbsorbed)
{
  const auto &ep = oracle::main_ep();
  EXPECT_LE(capture(ep, ep_drive(ep, 0, false)).fraction_at_drive_end, 0.10);
}

TEST(Capture, SecondaryNaturalWaveScattersFewPercent)
{
  const auto &ep = oracle::secondary_ep();
  EXPECT_NEAR(capture(ep, ep_drive(ep, 0, false)).fraction_at_drive_end, 0.045, 0.02);
}

TEST(Capture, MatchedDrivesScatterLessThanNaturalWave)
{
  const auto &ep = oracle::main_ep();
  const double grow = capture(ep, ep_drive(ep, 0, true)).fraction_at_drive_end;
  const double grow1 = capture(ep, ep_drive(ep, 1, true)).fraction_at_drive_end;
  const double natural = capture(ep, ep_drive(ep, 0, false)).fraction_at_drive_end;
  EXPECT_LT(grow, natural);
  EXPECT_LT(grow1, natural);
}

TEST(Capture, EnergyReturnsAfterRingDown)
{
  const auto &ep = oracle::main_ep();
  for (bool growing : {false, true})
  {
    const auto s = capture(ep, ep_drive(ep, 0, growing), 40.0);
    EXPECT_NEAR(s.fraction_at_window_end, 1.0, 1e-3) << growing;
  }
}

TEST(Taylor, LinearAndQuadraticCoefficients)
{
  const double g = two_pi * 0.834e9, g2 = two_pi * 0.9e9;
  const double a = g + g2;
  const auto t1 = taylor_match(g, g2, 1);
  ASSERT_EQ(t1.coefficients.size(), 2u);
  EXPECT_EQ(t1.coefficients[0], 1.0);
  EXPECT_DOUBLE_EQ(t1.coefficients[1], -a);
  const auto t2 = taylor_match(g, g2, 2);
  ASSERT_EQ(t2.coefficients.size(), 3u);
  EXPECT_EQ(t2.coefficients[0], 1.0);
  EXPECT_DOUBLE_EQ(t2.coefficients[1], -a);
  EXPECT_DOUBLE_EQ(t2.coefficients[2], 0.5 * a * a);
}

TEST(Taylor, MatchedRatesAreExact)
{
  const double g = two_pi * 0.834e9;
  const auto t = taylor_match(g, -g, 4, 1e-9);
  EXPECT_EQ(t.coefficients, (std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0}));
  EXPECT_EQ(t.residual, 0.0);
}

TEST(Taylor, ResidualScalesAsNextOrder)
{
  const double g = two_pi * 0.834e9, g2 = two_pi * 0.834e9;
  const double a = g + g2;
  for (int m = 0; m <= 3; ++m)
  {
    std::vector<double> x, y;
    for (int i = 0; i <= 10; ++i)
    {
      const double t_max = std::pow(10.0, -3.0 + 0.1 * i) / a;
      x.push_back(t_max);
      y.push_back(taylor_match(g, g2, m, t_max).residual);
    }
    EXPECT_NEAR(fitted_slope(x, y), m + 1.0, 0.1) << m;
  }
}

TEST(GeometricSeries, ZeroBouncesIsFeedReflection)
{
  const CircuitConfig &cfg = oracle::main_ep().circuit;
  const ComplexFrequency w = ComplexFrequency::from_hz(4.3e9, 0.0);
  const cdouble wc = w.value() * cfg.coupler.capacitance;
  const double x = w.re / cfg.coupler.omega_d;
  const cdouble kappa(0.0, 1.0 - x * x);
  const cdouble rho = (kappa + wc * (cfg.Z1 - cfg.Z0)) / (wc * (cfg.Z1 + cfg.Z0) - kappa);
  EXPECT_LT(std::abs(geometric_series_reflection(cfg, w, 0) - rho), 1e-15);
}

TEST(GeometricSeries, ConvergesToClosedForm)
{
  const CircuitConfig &cfg = oracle::main_ep().circuit;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i)
  {
    const ComplexFrequency w = ComplexFrequency::from_hz(2e9 + 8e9 * i / 99.0, 0.0);
    worst = std::max(worst,
                     std::abs(geometric_series_reflection(cfg, w, 200) - total_reflection(cfg, w)));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(GeometricSeries, MatchedSecondJunctionLeavesOneRoundTrip)
{
  CircuitConfig cfg = oracle::main_ep().circuit;
  cfg.Z2 = cfg.Z1;
  for (double f : {3e9, 5e9, 7e9})
  {
    const ComplexFrequency w = ComplexFrequency::from_hz(f, 0.0);
    const cdouble e12 = std::exp(cdouble(0.0, -2.0) * w.re * (cfg.l1 + cfg.l2) / cfg.v);
    const auto fj = feed_junction(cfg, w.value());
    const cdouble gamma = e12;  // -r3 e1 e2 with r3 = -1
    const cdouble want = fj.rho_in + fj.transmission * gamma / (1.0 + fj.rho_back * gamma);
    EXPECT_LT(std::abs(geometric_series_reflection(cfg, w, 300) - want), 1e-10);
    EXPECT_LT(std::abs(total_reflection(cfg, w) - want), 1e-12);
  }
}

TEST(GeometricSeries, DivergesOutsideConvergenceRegion)
{
  const CircuitConfig &cfg = oracle::main_ep().circuit;
  EXPECT_THROW(geometric_series_reflection(cfg, ComplexFrequency::from_hz(5e9, 3e9), 50),
               DivergenceError);
}
