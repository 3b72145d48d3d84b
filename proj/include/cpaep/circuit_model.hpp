// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CPAEP_CIRCUIT_MODEL_HPP
#define CPAEP_CIRCUIT_MODEL_HPP

#include <algorithm>
#include <complex>
#include <type_traits>
#include <variant>

#include "cpaep/dual.hpp"
#include "cpaep/types.hpp"

// Frequency-domain model of the one-port: coupler impedance, interface reflections,
// the reflection numerator g(w) and its time-reversed partner h(w), r = g/h.
//
// With k = w/v, e1 = e^{-2ikl1}, e2 = e^{-2ikl2}, A = 1 - r2 r3 e2, B = r2 - r3 e2 and
// kappa = wC Z_k:
//
//   g = (kappa + wC (Z1 - Z0)) A + (kappa + wC (Z1 + Z0)) e1 B
//   h = (wC (Z1 + Z0) - kappa) A + (wC (Z1 - Z0) - kappa) e1 B
//
// g is the numerator r1 A + e1 B of the multiple-reflection sum with r1's
// denominator and Z_k's 1/w pole cleared. For |r3| = 1 loads h(w) equals
// -r3 e1 e2 conj(g(conj w)), so |r| = 1 on the real axis and every zero w0 of r is
// paired with a pole at conj(w0).
//
// Every formula is templated on the scalar so it runs unchanged on complex<double>
// and on Dual<> numbers for exact derivatives.

namespace cpaep
{

namespace detail
{
inline cdouble value_of(const cdouble &x) { return x; }
template <typename T>
cdouble value_of(const Dual<T> &x)
{
  return value_of(x.val);
}

template <typename Scalar>
Scalar lift(const cdouble &x)
{
  return Scalar(x);
}

template <typename Scalar>
Scalar horner(const std::vector<cdouble> &coeffs, const Scalar &x)
{
  Scalar acc = lift<Scalar>(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
  {
    acc = acc * x + *it;
  }
  return acc;
}
}  // namespace detail

inline constexpr cdouble imag_unit{0.0, 1.0};

// kappa = w C Z_k = j (1 - w^2 / w_d^2). Independent of C for a fixed resonance.
template <typename Scalar>
Scalar coupler_kappa(const Coupler &coupler, const Scalar &omega)
{
  const double wd2 = coupler.omega_d * coupler.omega_d;
  return imag_unit * (1.0 - omega * omega / wd2);
}

// Z_k = j (1 - w^2 L C) / (w C).
template <typename Scalar>
Scalar coupler_impedance(const Coupler &coupler, const Scalar &omega)
{
  return coupler_kappa(coupler, omega) / (omega * coupler.capacitance);
}

// e^{-2 i w l / v}: round-trip phase and delay of a segment of length l.
template <typename Scalar>
Scalar round_trip_factor(double length, double v, const Scalar &omega)
{
  using std::exp;
  return exp(omega * (cdouble(0.0, -2.0) * (length / v)));
}

template <typename Scalar>
Scalar load_reflection(const LoadModel &load, double Z2, const Scalar &omega)
{
  if (std::holds_alternative<ShortLoad>(load))
  {
    return detail::lift<Scalar>(-1.0);
  }
  if (const auto *fixed = std::get_if<FixedReflection>(&load))
  {
    return detail::lift<Scalar>(fixed->r3);
  }
  const auto &rational = std::get<RationalImpedance>(load);
  const Scalar zl = detail::horner(rational.numerator, omega) /
                    detail::horner(rational.denominator, omega);
  return (zl - Z2) / (zl + Z2);
}

template <typename Scalar>
ReflectionTriple<Scalar> interface_reflections_raw(const CircuitConfig &cfg,
                                                   const Scalar &omega)
{
  const Scalar zk = coupler_impedance(cfg.coupler, omega);
  return {(zk + (cfg.Z1 - cfg.Z0)) / (zk + (cfg.Z1 + cfg.Z0)),
          detail::lift<Scalar>((cfg.Z2 - cfg.Z1) / (cfg.Z2 + cfg.Z1)),
          load_reflection<Scalar>(cfg.load, cfg.Z2, omega)};
}

template <typename Scalar>
struct ReflectionParts
{
  Scalar g;
  Scalar h;
  // max |term| of g; the natural magnitude against which |g| is judged.
  double g_scale;
  double h_scale;
};

template <typename Scalar>
ReflectionParts<Scalar> reflection_parts(const CircuitConfig &cfg, const Scalar &omega)
{
  const Scalar kappa = coupler_kappa(cfg.coupler, omega);
  const Scalar wc = omega * cfg.coupler.capacitance;
  const Scalar e1 = round_trip_factor(cfg.l1, cfg.v, omega);
  const Scalar e2 = round_trip_factor(cfg.l2, cfg.v, omega);
  const double r2 = (cfg.Z2 - cfg.Z1) / (cfg.Z2 + cfg.Z1);
  const Scalar r3 = load_reflection<Scalar>(cfg.load, cfg.Z2, omega);
  const Scalar a = 1.0 - r2 * r3 * e2;
  const Scalar e1b = e1 * (r2 - r3 * e2);

  const Scalar g0 = (kappa + wc * (cfg.Z1 - cfg.Z0)) * a;
  const Scalar g1 = (kappa + wc * (cfg.Z1 + cfg.Z0)) * e1b;
  const Scalar h0 = (wc * (cfg.Z1 + cfg.Z0) - kappa) * a;
  const Scalar h1 = (wc * (cfg.Z1 - cfg.Z0) - kappa) * e1b;
  using detail::value_of;
  return {g0 + g1, h0 + h1, std::max(std::abs(value_of(g0)), std::abs(value_of(g1))),
          std::max(std::abs(value_of(h0)), std::abs(value_of(h1)))};
}

// Feed-side junction seen by the bounce expansion:
// r = rho_in + tt' G / (1 + rho_back G), G the reflection looking into segment 1.
template <typename Scalar>
struct FeedJunction
{
  Scalar rho_in;
  Scalar rho_back;
  Scalar transmission;  // t t'
};

template <typename Scalar>
FeedJunction<Scalar> feed_junction(const CircuitConfig &cfg, const Scalar &omega)
{
  const Scalar kappa = coupler_kappa(cfg.coupler, omega);
  const Scalar wc = omega * cfg.coupler.capacitance;
  const Scalar den = wc * (cfg.Z1 + cfg.Z0) - kappa;
  return {(kappa + wc * (cfg.Z1 - cfg.Z0)) / den, (wc * (cfg.Z1 - cfg.Z0) - kappa) / den,
          (4.0 * cfg.Z0 * cfg.Z1) * wc * wc / (den * den)};
}

// --- Evaluations at a ComplexFrequency with domain checks. ---

// Throws DomainError at w = 0.
cdouble coupler_impedance(const Coupler &coupler, ComplexFrequency omega);

// r1, r2, r3 exactly as the interface formulas. Throws PoleError naming the junction
// whose denominator vanishes.
ReflectionTriple<cdouble> interface_reflections(const CircuitConfig &cfg,
                                                ComplexFrequency omega);

struct ReflectionEvaluation
{
  cdouble value;
  // |h| / h_scale; below near_pole_tolerance the point is flagged.
  double relative_denominator = 0.0;
  bool near_pole = false;
};

inline constexpr double near_pole_tolerance = 1e-10;

ReflectionEvaluation evaluate_reflection(const CircuitConfig &cfg, ComplexFrequency omega);

// r(w) = g(w) / h(w).
cdouble total_reflection(const CircuitConfig &cfg, ComplexFrequency omega);

cdouble numerator_g(const CircuitConfig &cfg, ComplexFrequency omega);
cdouble denominator_h(const CircuitConfig &cfg, ComplexFrequency omega);
double numerator_scale(const CircuitConfig &cfg, ComplexFrequency omega);

// Exact complex derivative dg/dw by forward-mode differentiation.
cdouble dg_domega(const CircuitConfig &cfg, ComplexFrequency omega);
cdouble d2g_domega2(const CircuitConfig &cfg, ComplexFrequency omega);

}  // namespace cpaep

#endif  // CPAEP_CIRCUIT_MODEL_HPP
