// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations used by the tests. Nothing here calls the library's
// transform or reflection code paths it is compared against.

#ifndef CPAEP_TESTS_ORACLES_HPP
#define CPAEP_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "cpaep/ep_solver.hpp"
#include "cpaep/types.hpp"

namespace cpaep::oracle
{

using cld = std::complex<long double>;

inline CircuitConfig main_geometry()
{
  CircuitConfig c;
  c.Z0 = 50.0;
  c.Z1 = 100.0;
  c.l1 = 0.0215;
  c.l2 = 0.0276;
  c.coupler.omega_d = two_pi * 5e9;
  return c;
}

inline CircuitConfig secondary_geometry()
{
  CircuitConfig c = main_geometry();
  c.Z1 = 80.0;
  c.l1 = 0.0195;
  c.l2 = 0.0175;
  return c;
}

inline const EPSolution &main_ep()
{
  static const EPSolution sol =
    find_ep(main_geometry(), ComplexFrequency::from_hz(4.7e9, -0.8e9));
  return sol;
}

inline const EPSolution &secondary_ep()
{
  static const EPSolution sol =
    find_ep(secondary_geometry(), ComplexFrequency::from_hz(5.13e9, -1.47e9));
  return sol;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Numerator r1 (1 - r2 r3 e2) + e1 (r2 - r3 e2) of the multiple-reflection sum, evaluated
// from the interface coefficients in extended precision, and its largest term.
struct Numerator
{
  cld value;
  long double scale;
};

inline Numerator bounce_numerator(const CircuitConfig &cfg, cdouble w, cdouble r1, cdouble r2,
                                  cdouble r3)
{
  const cld wl(w.real(), w.imag());
  const cld e1 = std::exp(cld(0, -2) * wl * (long double)(cfg.l1 / cfg.v));
  const cld e2 = std::exp(cld(0, -2) * wl * (long double)(cfg.l2 / cfg.v));
  const cld a = cld(r1) * (1.0L - cld(r2) * cld(r3) * e2);
  const cld b = e1 * (cld(r2) - cld(r3) * e2);
  return {a + b, std::max(std::abs(a), std::abs(b))};
}

// Z_k + Z1 + Z0 times w C: the factor that clears r1's denominator and Z_k's 1/w.
inline cld clearing_factor(const CircuitConfig &cfg, cdouble w)
{
  const cld wl(w.real(), w.imag());
  const long double C = cfg.coupler.capacitance;
  const long double wd = cfg.coupler.omega_d;
  const cld zk = cld(0, 1) * (1.0L - wl * wl / (wd * wd)) / (wl * C);
  return (zk + (long double)(cfg.Z1 + cfg.Z0)) * wl * C;
}

// Fourth-order central difference of f at w along the real axis.
inline cdouble fd4(const std::function<cdouble(cdouble)> &f, cdouble w, double h)
{
  return (-f(w + 2.0 * h) + 8.0 * f(w + h) - 8.0 * f(w - h) + f(w - 2.0 * h)) / (12.0 * h);
}

// Composite Simpson weights for n (odd) points spaced h.
inline std::vector<double> simpson_weights(std::size_t n, double h)
{
  std::vector<double> wts(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
  {
    wts[i] = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    wts[i] *= h / 3.0;
  }
  return wts;
}

// Gaussian pulse exp(-(t - tc)^2 / (2 tau^2)) e^{i wc t}.
struct GaussianPulse
{
  double tc, tau, wc;
  cdouble operator()(double t) const
  {
    const double u = (t - tc) / tau;
    return std::polar(std::exp(-0.5 * u * u), wc * t);
  }
};

// s(t_n) = (1/2pi) int_{-W}^{W} r(w) F(w) e^{i w t_n} dw with
// F(w) = int_0^{t_in} x(t) e^{-i w t} dt, both by composite Simpson on grids `density`
// times finer than (dt, d_omega).
inline std::vector<cdouble> simpson_scattered(const std::function<cdouble(double)> &transfer,
                                              const GaussianPulse &x, double t_in, double dt,
                                              double d_omega, double w_max,
                                              const std::vector<double> &t_out, int density)
{
  const double ht = dt / density;
  std::size_t nt = static_cast<std::size_t>(std::llround(t_in / ht)) + 1;
  if (nt % 2 == 0)
  {
    ++nt;
  }
  const double hw = d_omega / density;
  std::size_t nw = 2 * static_cast<std::size_t>(std::llround(w_max / hw)) + 1;
  if (nw % 2 == 0)
  {
    ++nw;
  }
  const double w0 = -0.5 * static_cast<double>(nw - 1) * hw;
  const auto wt = simpson_weights(nt, ht);
  const auto ww = simpson_weights(nw, hw);

  std::vector<cdouble> xs(nt);
  for (std::size_t j = 0; j < nt; ++j)
  {
    xs[j] = x(j * ht) * wt[j];
  }
  std::vector<cdouble> g(nw);
  for (std::size_t k = 0; k < nw; ++k)
  {
    const double w = w0 + k * hw;
    cdouble f = 0.0;
    for (std::size_t j = 0; j < nt; ++j)
    {
      f += xs[j] * std::polar(1.0, -w * (j * ht));
    }
    g[k] = transfer(w) * f * ww[k];
  }
  std::vector<cdouble> out;
  for (double t : t_out)
  {
    cdouble s = 0.0;
    for (std::size_t k = 0; k < nw; ++k)
    {
      s += g[k] * std::polar(1.0, (w0 + k * hw) * t);
    }
    out.push_back(s / two_pi);
  }
  return out;
}

inline double relative_l2(const std::vector<cdouble> &a, const std::vector<cdouble> &b)
{
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace cpaep::oracle

#endif  // CPAEP_TESTS_ORACLES_HPP
