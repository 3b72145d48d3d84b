// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cpaep/circuit_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cpaep/errors.hpp"

namespace cpaep
{

namespace
{
bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require_nonzero(ComplexFrequency omega)
{
  if (omega.re == 0.0 && omega.im == 0.0)
  {
    throw DomainError("coupler impedance is singular at w = 0");
  }
}

// Denominators smaller than this relative to their terms count as poles.
constexpr double pole_epsilon = 1e-14;
}  // namespace

void Coupler::validate() const
{
  if (!positive_finite(capacitance))
  {
    throw ConfigError("coupler capacitance must be positive and finite");
  }
  if (!positive_finite(omega_d))
  {
    throw ConfigError("coupler resonance w_d must be positive and finite");
  }
}

void CircuitConfig::validate() const
{
  if (!positive_finite(Z0) || !positive_finite(Z1) || !positive_finite(Z2))
  {
    throw ConfigError("line impedances Z0, Z1, Z2 must be positive and finite");
  }
  if (!std::isfinite(l1) || !std::isfinite(l2) || l1 < 0.0 || l2 < 0.0)
  {
    throw ConfigError("segment lengths l1, l2 must be non-negative and finite");
  }
  if (!positive_finite(v))
  {
    throw ConfigError("wave speed must be positive and finite");
  }
  coupler.validate();
  if (const auto *rational = std::get_if<RationalImpedance>(&load))
  {
    if (rational->numerator.empty() || rational->denominator.empty())
    {
      throw ConfigError("rational load needs non-empty numerator and denominator");
    }
  }
}

cdouble coupler_impedance(const Coupler &coupler, ComplexFrequency omega)
{
  require_nonzero(omega);
  return coupler_impedance(coupler, omega.value());
}

ReflectionTriple<cdouble> interface_reflections(const CircuitConfig &cfg,
                                                ComplexFrequency omega)
{
  require_nonzero(omega);
  const cdouble w = omega.value();
  const cdouble zk = coupler_impedance(cfg.coupler, w);

  const cdouble d1 = zk + (cfg.Z1 + cfg.Z0);
  if (std::abs(d1) <= pole_epsilon * (std::abs(zk) + cfg.Z1 + cfg.Z0))
  {
    throw PoleError(1, "r1 denominator Z_k + Z1 + Z0 vanishes");
  }
  const double d2 = cfg.Z2 + cfg.Z1;
  if (d2 == 0.0)
  {
    throw PoleError(2, "r2 denominator Z2 + Z1 vanishes");
  }

  cdouble r3;
  if (const auto *rational = std::get_if<RationalImpedance>(&cfg.load))
  {
    const cdouble den = detail::horner(rational->denominator, w);
    if (den == 0.0)
    {
      throw PoleError(3, "load impedance denominator vanishes");
    }
    const cdouble zl = detail::horner(rational->numerator, w) / den;
    const cdouble d3 = zl + cfg.Z2;
    if (std::abs(d3) <= pole_epsilon * (std::abs(zl) + cfg.Z2))
    {
      throw PoleError(3, "r3 denominator Z_L + Z2 vanishes");
    }
    r3 = (zl - cfg.Z2) / d3;
  }
  else
  {
    r3 = load_reflection<cdouble>(cfg.load, cfg.Z2, w);
  }
  return {(zk + (cfg.Z1 - cfg.Z0)) / d1, (cfg.Z2 - cfg.Z1) / d2, r3};
}

ReflectionEvaluation evaluate_reflection(const CircuitConfig &cfg, ComplexFrequency omega)
{
  const auto parts = reflection_parts(cfg, omega.value());
  ReflectionEvaluation out;
  out.relative_denominator =
    parts.h_scale > 0.0 ? std::abs(parts.h) / parts.h_scale : std::abs(parts.h);
  if (out.relative_denominator < near_pole_tolerance)
  {
    out.near_pole = true;
    out.value = cdouble(std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity());
    return out;
  }
  out.value = parts.g / parts.h;
  return out;
}

cdouble total_reflection(const CircuitConfig &cfg, ComplexFrequency omega)
{
  const auto parts = reflection_parts(cfg, omega.value());
  return parts.g / parts.h;
}

cdouble numerator_g(const CircuitConfig &cfg, ComplexFrequency omega)
{
  return reflection_parts(cfg, omega.value()).g;
}

cdouble denominator_h(const CircuitConfig &cfg, ComplexFrequency omega)
{
  return reflection_parts(cfg, omega.value()).h;
}

double numerator_scale(const CircuitConfig &cfg, ComplexFrequency omega)
{
  return reflection_parts(cfg, omega.value()).g_scale;
}

cdouble dg_domega(const CircuitConfig &cfg, ComplexFrequency omega)
{
  return reflection_parts(cfg, make_variable(omega.value())).g.der;
}

cdouble d2g_domega2(const CircuitConfig &cfg, ComplexFrequency omega)
{
  using D = Dual<cdouble>;
  const Dual<D> w{D(omega.value(), 1.0), D(1.0, 0.0)};
  return reflection_parts(cfg, w).g.der.der;
}

}  // namespace cpaep
