// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CPAEP_TYPES_HPP
#define CPAEP_TYPES_HPP

#include <complex>
#include <numbers>
#include <variant>
#include <vector>

namespace cpaep
{

using cdouble = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Default propagation speed of both line segments, m/s.
inline constexpr double default_wave_speed = 3.0e8;

// A point in the complex angular-frequency plane, rad/s.
//
// Time dependence is e^{i w t} throughout, so a drive that grows as e^{G t} sits at
// im = -G and the reflection zeros that capture growing drives lie in Im(w) < 0.
struct ComplexFrequency
{
  double re = 0.0;
  double im = 0.0;

  constexpr cdouble value() const { return {re, im}; }
  static constexpr ComplexFrequency from(cdouble w) { return {w.real(), w.imag()}; }
  // Both parts given in Hz (cycles/s), i.e. w = 2 pi (re_hz + i im_hz).
  static constexpr ComplexFrequency from_hz(double re_hz, double im_hz)
  {
    return {two_pi * re_hz, two_pi * im_hz};
  }
  // Growth rate G of the matching drive e^{G t}; positive below the real axis.
  constexpr double growth_rate() const { return -im; }
};

// Series LC coupler. The inductance follows from the resonance w_d = 1/sqrt(LC).
struct Coupler
{
  double capacitance = 0.0;  // F
  double omega_d = 0.0;      // rad/s

  double inductance() const { return 1.0 / (omega_d * omega_d * capacitance); }
  void validate() const;
};

struct ShortLoad
{
};

struct FixedReflection
{
  cdouble r3{-1.0, 0.0};
};

// Z_L(w) = sum_k num[k] w^k / sum_k den[k] w^k, coefficients in ascending order.
struct RationalImpedance
{
  std::vector<cdouble> numerator;
  std::vector<cdouble> denominator{1.0};
};

using LoadModel = std::variant<ShortLoad, FixedReflection, RationalImpedance>;

// One-port stack: feed line Z0 | coupler | segment (Z1, l1) | segment (Z2, l2) | load.
struct CircuitConfig
{
  double Z0 = 50.0;  // ohm
  double Z1 = 0.0;   // ohm
  double Z2 = 0.0;   // ohm
  double l1 = 0.0;   // m
  double l2 = 0.0;   // m
  double v = default_wave_speed;
  Coupler coupler;
  LoadModel load = ShortLoad{};

  void validate() const;
  // Time for one round trip through both segments.
  double round_trip_time() const { return 2.0 * (l1 + l2) / v; }
};

template <typename Scalar>
struct ReflectionTriple
{
  Scalar r1;
  Scalar r2;
  Scalar r3;
};

}  // namespace cpaep

#endif  // CPAEP_TYPES_HPP
