// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cpaep/ep_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cpaep/circuit_model.hpp"
#include "cpaep/errors.hpp"
#include "parallel.hpp"

namespace cpaep
{

namespace
{

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

void validate_geometry(const CircuitConfig &fixed)
{
  auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!ok(fixed.Z0) || !ok(fixed.Z1))
  {
    throw ConfigError("Z0 and Z1 must be positive and finite");
  }
  if (!std::isfinite(fixed.l1) || !std::isfinite(fixed.l2) || fixed.l1 < 0.0 ||
      fixed.l2 < 0.0)
  {
    throw ConfigError("segment lengths must be non-negative and finite");
  }
  if (!ok(fixed.v) || !ok(fixed.coupler.omega_d))
  {
    throw ConfigError("wave speed and coupler resonance must be positive");
  }
  if (std::holds_alternative<RationalImpedance>(fixed.load))
  {
    throw ConfigError("the EP reduction needs a load reflection that does not depend on Z2 "
                      "(short or fixed reflection)");
  }
}

cdouble load_r3(const CircuitConfig &cfg, const cdouble &w)
{
  return load_reflection<cdouble>(cfg.load, cfg.Z2, w);
}

double norm2(const Eigen::Vector2d &v) { return v.norm(); }

// Normalized EP residual w g'(w) / max|term| on the branch circuit at w.
std::optional<Eigen::Vector2d> ep_residual(const CircuitConfig &fixed, cdouble w,
                                           Branch branch)
{
  const auto bc = circuit_on_branch(fixed, ComplexFrequency::from(w), branch);
  if (!bc)
  {
    return std::nullopt;
  }
  const auto parts = reflection_parts(bc->circuit, make_variable(w));
  const cdouble f = w * parts.g.der / parts.g_scale;
  if (!std::isfinite(f.real()) || !std::isfinite(f.imag()))
  {
    return std::nullopt;
  }
  return Eigen::Vector2d(f.real(), f.imag());
}

struct Derivs
{
  cdouble g, g1, g2;
  double scale;
};

Derivs g_derivatives(const CircuitConfig &cfg, cdouble w)
{
  using D = Dual<cdouble>;
  const Dual<D> x{D(w, 1.0), D(1.0, 0.0)};
  const auto p = reflection_parts(cfg, x);
  return {p.g.val.val, p.g.val.der, p.g.der.der, p.g_scale};
}

// Newton on g from w; returns the last iterate.
cdouble newton_on_g(const CircuitConfig &cfg, cdouble w, int max_iterations)
{
  for (int it = 0; it < max_iterations; ++it)
  {
    const auto p = reflection_parts(cfg, make_variable(w));
    if (p.g.der == 0.0)
    {
      break;
    }
    const cdouble step = p.g.val / p.g.der;
    w -= step;
    if (std::abs(step) < 1e-15 * std::abs(w))
    {
      break;
    }
  }
  return w;
}

// Newton on h; nullopt when it does not converge.
std::optional<cdouble> newton_on_h(const CircuitConfig &cfg, cdouble w)
{
  for (int it = 0; it < 60; ++it)
  {
    const auto p = reflection_parts(cfg, make_variable(w));
    if (p.h.der == 0.0)
    {
      return std::nullopt;
    }
    const cdouble step = p.h.val / p.h.der;
    w -= step;
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    {
      return std::nullopt;
    }
    if (std::abs(step) < 1e-13 * std::abs(w))
    {
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(Branch b)
{
  switch (b)
  {
  case Branch::Auto:
    return "auto";
  case Branch::Plus:
    return "plus";
  case Branch::Minus:
    return "minus";
  }
  return "auto";
}

Branch branch_from_string(const std::string &s)
{
  if (s == "auto")
  {
    return Branch::Auto;
  }
  if (s == "plus")
  {
    return Branch::Plus;
  }
  if (s == "minus")
  {
    return Branch::Minus;
  }
  throw ConfigError("branch must be one of auto, plus, minus (got '" + s + "')");
}

cdouble r2_from_g_zero(const CircuitConfig &cfg, ComplexFrequency omega)
{
  const cdouble w = omega.value();
  const cdouble e1 = round_trip_factor(cfg.l1, cfg.v, w);
  const cdouble e2 = round_trip_factor(cfg.l2, cfg.v, w);
  const cdouble r1 = interface_reflections_raw(cfg, w).r1;
  const cdouble r3 = load_r3(cfg, w);
  const cdouble den = e1 - r3 * r1 * e2;
  if (std::abs(den) < 1e-14 * (std::abs(e1) + std::abs(r3 * r1 * e2)))
  {
    throw DegenerateGeometryError("e1 - r3 r1 e2 vanishes; r2 is undetermined");
  }
  return (r3 * e1 * e2 - r1) / den;
}

const CapacitanceCandidate *CapacitanceBranches::find(Branch b) const
{
  for (const auto &c : candidates)
  {
    if (c.branch == b)
    {
      return &c;
    }
  }
  return nullptr;
}

CapacitanceBranches capacitance_branches(const CircuitConfig &cfg, ComplexFrequency omega)
{
  validate_geometry(cfg);
  const cdouble w = omega.value();
  if (w == 0.0)
  {
    throw DomainError("capacitance branches are undefined at w = 0");
  }
  const cdouble kappa = coupler_kappa(cfg.coupler, w);
  const cdouble e1 = round_trip_factor(cfg.l1, cfg.v, w);
  const cdouble e2 = round_trip_factor(cfg.l2, cfg.v, w);
  const cdouble r3 = load_r3(cfg, w);
  const double zp = cfg.Z1 + cfg.Z0;
  const double zm = cfg.Z1 - cfg.Z0;

  // r2 = N / D with N = n1 x + n0, D = d1 x + d0 and C = x * c_ref.
  const double c_ref = 1.0 / (std::abs(w) * zp);
  const cdouble n1 = (r3 * e1 * e2 * zp - zm) * w * c_ref;
  const cdouble n0 = (r3 * e1 * e2 - 1.0) * kappa;
  const cdouble d1 = (e1 * zp - r3 * e2 * zm) * w * c_ref;
  const cdouble d0 = (e1 - r3 * e2) * kappa;

  const double a = std::imag(n1 * std::conj(d1));
  const double b = std::imag(n1 * std::conj(d0) + n0 * std::conj(d1));
  const double c = std::imag(n0 * std::conj(d0));

  CapacitanceBranches out;
  std::vector<std::pair<Branch, double>> roots;
  const double coeff_scale = std::abs(a) + std::abs(b) + std::abs(c);
  if (std::abs(a) <= 1e-14 * coeff_scale)
  {
    out.discriminant = 1.0;
    if (b != 0.0)
    {
      roots.emplace_back(Branch::Plus, -c / b);
    }
  }
  else
  {
    const double disc = b * b - 4.0 * a * c;
    out.discriminant = disc / std::max(b * b, std::abs(4.0 * a * c));
    out.coalescing = std::abs(out.discriminant) < 1e-12;
    if (disc >= 0.0 || out.coalescing)
    {
      const double sq = std::sqrt(std::max(disc, 0.0));
      roots.emplace_back(Branch::Plus, (-b + sq) / (2.0 * a));
      roots.emplace_back(Branch::Minus, (-b - sq) / (2.0 * a));
    }
  }

  for (auto [branch, x] : roots)
  {
    // One Newton step on the quadratic removes cancellation error.
    const double dq = 2.0 * a * x + b;
    if (dq != 0.0 && !out.coalescing)
    {
      x -= ((a * x + b) * x + c) / dq;
    }
    if (!(x > 0.0) || !std::isfinite(x))
    {
      continue;
    }
    const cdouble r2 = (n1 * x + n0) / (d1 * x + d0);
    if (!std::isfinite(r2.real()) || std::abs(r2.imag()) > 1e-9 * std::max(1.0, std::abs(r2)))
    {
      continue;
    }
    out.candidates.push_back({branch, x * c_ref, r2});
  }
  return out;
}

std::optional<BranchCircuit> circuit_on_branch(const CircuitConfig &fixed,
                                               ComplexFrequency omega, Branch branch)
{
  const auto branches = capacitance_branches(fixed, omega);
  const CapacitanceCandidate *pick = nullptr;
  if (branch == Branch::Auto)
  {
    const auto *minus = branches.find(Branch::Minus);
    if (minus != nullptr && std::abs(minus->r2.real()) < 1.0)
    {
      pick = minus;
    }
    else
    {
      pick = branches.find(Branch::Plus);
    }
  }
  else
  {
    pick = branches.find(branch);
  }
  if (pick == nullptr || pick->r2.real() == 1.0)
  {
    return std::nullopt;
  }
  BranchCircuit out;
  out.circuit = fixed;
  out.circuit.coupler.capacitance = pick->C;
  const double r2 = pick->r2.real();
  out.circuit.Z2 = fixed.Z1 * (1.0 + r2) / (1.0 - r2);
  out.branch = pick->branch;
  out.r2 = pick->r2;
  out.discriminant = branches.discriminant;
  out.coalescing = branches.coalescing;
  return out;
}

EPSolution find_ep(const CircuitConfig &fixed, ComplexFrequency seed, Branch branch,
                   const SolverOptions &opts)
{
  validate_geometry(fixed);
  cdouble w = seed.value();
  std::vector<double> trace;
  auto residual = [&](cdouble at) { return ep_residual(fixed, at, branch); };

  auto f = residual(w);
  if (!f)
  {
    throw DivergenceError("no realizable capacitance on the requested branch at the seed",
                          trace);
  }
  trace.push_back(norm2(*f));

  bool converged = false;
  int iterations = 0;
  while (!converged)
  {
    if (iterations >= opts.max_iterations)
    {
      throw DivergenceError("EP Newton iteration did not converge in " +
                              std::to_string(opts.max_iterations) + " iterations",
                            trace);
    }
    ++iterations;

    // Central differences: C and Z2 follow w through Re/Im, so the map is not analytic.
    const double h = 1e-6 * std::abs(w);
    Eigen::Matrix2d jac;
    const cdouble dirs[2] = {cdouble(h, 0.0), cdouble(0.0, h)};
    for (int k = 0; k < 2; ++k)
    {
      const auto fp = residual(w + dirs[k]);
      const auto fm = residual(w - dirs[k]);
      if (!fp || !fm)
      {
        throw DivergenceError("branch disappears next to the iterate; Jacobian undefined",
                              trace);
      }
      jac.col(k) = (*fp - *fm) / (2.0 * h);
    }
    const Eigen::Vector2d step = jac.partialPivLu().solve(-*f);
    if (!step.allFinite())
    {
      throw DivergenceError("singular Jacobian in EP Newton iteration", trace);
    }
    const cdouble dw(step(0), step(1));

    double lambda = 1.0;
    bool accepted = false;
    std::optional<Eigen::Vector2d> ft;
    for (int halving = 0; halving <= opts.max_halvings; ++halving, lambda *= 0.5)
    {
      ft = residual(w + lambda * dw);
      if (ft && (norm2(*ft) < norm2(*f) || norm2(*ft) < 1e-14))
      {
        accepted = true;
        break;
      }
    }
    if (!accepted)
    {
      // At the rounding floor the residual stops decreasing; a tiny step is convergence.
      if (std::abs(dw) < 1e3 * opts.tolerance * std::abs(w))
      {
        converged = true;
        break;
      }
      throw DivergenceError("damped EP Newton step failed to reduce the residual", trace);
    }
    w += lambda * dw;
    f = ft;
    trace.push_back(norm2(*f));
    converged = std::abs(lambda * dw) < opts.tolerance * std::abs(w);
  }

  const auto bc = circuit_on_branch(fixed, ComplexFrequency::from(w), branch);
  if (!bc)
  {
    throw DivergenceError("branch lost at the converged point", trace);
  }

  EPSolution sol;
  sol.omega_ep = ComplexFrequency::from(w);
  sol.C = bc->circuit.coupler.capacitance;
  sol.Z2 = bc->circuit.Z2;
  sol.r2 = bc->r2.real();
  sol.r2_imag = bc->r2.imag();
  sol.branch = bc->branch;
  sol.discriminant = bc->discriminant;
  sol.coalescing_branches = bc->coalescing;
  sol.iterations = iterations;
  sol.trace = trace;
  sol.circuit = bc->circuit;
  const auto parts = reflection_parts(bc->circuit, make_variable(w));
  sol.residual_g = std::abs(parts.g.val) / parts.g_scale;
  sol.residual_dg = std::abs(w * parts.g.der) / parts.g_scale;
  sol.q_factor = q_factor(sol.omega_ep);

  if (!(sol.C > 0.0))
  {
    throw RejectedSolutionError("C > 0", "EP requires a non-positive coupler capacitance");
  }
  if (!(sol.Z2 > 0.0) || !std::isfinite(sol.Z2))
  {
    throw RejectedSolutionError("Z2 > 0", "EP requires a non-positive segment impedance Z2 (r2 = " +
                                            std::to_string(sol.r2) + ")");
  }
  if (!(std::abs(sol.r2) < 1.0))
  {
    throw RejectedSolutionError("|r2| < 1", "EP requires |r2| >= 1");
  }
  if (sol.residual_g > opts.residual_g_tolerance || sol.residual_dg > opts.residual_dg_tolerance)
  {
    throw DivergenceError("EP iteration stalled with residuals above tolerance", trace);
  }
  return sol;
}

ComplexFrequency coarse_seed(const CircuitConfig &fixed, double re_min, double re_max,
                             double im_min, double im_max, int n, Branch branch)
{
  validate_geometry(fixed);
  double best = std::numeric_limits<double>::infinity();
  ComplexFrequency out{0.5 * (re_min + re_max), 0.5 * (im_min + im_max)};
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const double re = re_min + (re_max - re_min) * (i + 0.5) / n;
      const double im = im_min + (im_max - im_min) * (j + 0.5) / n;
      const auto f = ep_residual(fixed, cdouble(re, im), branch);
      if (f && f->norm() < best)
      {
        best = f->norm();
        out = {re, im};
      }
    }
  }
  if (!std::isfinite(best))
  {
    throw DivergenceError("no realizable branch anywhere on the seed grid");
  }
  return out;
}

double q_factor(ComplexFrequency omega)
{
  if (omega.im == 0.0)
  {
    return std::numeric_limits<double>::infinity();
  }
  return omega.re / (2.0 * std::abs(omega.im));
}

double q_factor(const EPSolution &sol) { return q_factor(sol.omega_ep); }

SweepGrid sweep_reflection(const CircuitConfig &cfg, const SweepSpec &spec, unsigned workers)
{
  if (spec.nx < 1 || spec.ny < 1)
  {
    throw ConfigError("sweep grid needs nx, ny >= 1");
  }
  if ((spec.nx > 1 && !(spec.re_max > spec.re_min)) ||
      (spec.ny > 1 && !(spec.im_max > spec.im_min)))
  {
    throw ConfigError("sweep ranges must be strictly increasing");
  }
  SweepGrid grid;
  auto axis = [](double lo, double hi, int n) {
    return n == 1 ? Eigen::VectorXd::Constant(1, 0.5 * (lo + hi))
                  : Eigen::VectorXd::LinSpaced(n, lo, hi).eval();
  };
  grid.re = axis(spec.re_min, spec.re_max, spec.nx);
  grid.im = axis(spec.im_min, spec.im_max, spec.ny);
  grid.abs_r.resize(spec.ny, spec.nx);

  detail::parallel_for(static_cast<std::size_t>(spec.ny), workers, [&](std::size_t row) {
    for (int col = 0; col < spec.nx; ++col)
    {
      const auto ev = evaluate_reflection(cfg, {grid.re(col), grid.im(row)});
      grid.abs_r(row, col) = ev.near_pole ? nan_value : std::abs(ev.value);
    }
  });

  // Poles between grid points: confirm local maxima by a root find on the denominator.
  const double dx = spec.nx > 1 ? grid.re(1) - grid.re(0) : std::abs(grid.re(0)) * 1e-3;
  const double dy = spec.ny > 1 ? grid.im(1) - grid.im(0) : std::abs(grid.re(0)) * 1e-3;
  Eigen::MatrixXd flagged = grid.abs_r;
  for (Eigen::Index row = 0; row < grid.abs_r.rows(); ++row)
  {
    for (Eigen::Index col = 0; col < grid.abs_r.cols(); ++col)
    {
      const double v = grid.abs_r(row, col);
      if (std::isnan(v) || v < 10.0)
      {
        continue;
      }
      bool peak = true;
      for (Eigen::Index i = std::max<Eigen::Index>(row - 1, 0);
           i <= std::min<Eigen::Index>(row + 1, grid.abs_r.rows() - 1) && peak; ++i)
      {
        for (Eigen::Index j = std::max<Eigen::Index>(col - 1, 0);
             j <= std::min<Eigen::Index>(col + 1, grid.abs_r.cols() - 1); ++j)
        {
          if (grid.abs_r(i, j) > v)
          {
            peak = false;
            break;
          }
        }
      }
      if (!peak)
      {
        continue;
      }
      const auto root = newton_on_h(cfg, cdouble(grid.re(col), grid.im(row)));
      if (root && std::abs(root->real() - grid.re(col)) <= 0.5 * dx &&
          std::abs(root->imag() - grid.im(row)) <= 0.5 * dy)
      {
        flagged(row, col) = nan_value;
      }
    }
  }
  grid.abs_r = flagged;
  grid.pole_cells = static_cast<int>(grid.abs_r.array().isNaN().count());

  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index row = 0; row < grid.abs_r.rows(); ++row)
  {
    for (Eigen::Index col = 0; col < grid.abs_r.cols(); ++col)
    {
      const double v = grid.abs_r(row, col);
      if (!std::isnan(v) && v < best)
      {
        best = v;
        grid.min_row = row;
        grid.min_col = col;
      }
    }
  }
  return grid;
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
{
  if (x.size() != y.size() || x.size() < 2)
  {
    throw DomainError("slope fit needs at least two matching points");
  }
  Eigen::MatrixXd a(x.size(), 2);
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    a(i, 0) = std::log(x[i]);
    a(i, 1) = 1.0;
    b(i) = std::log(y[i]);
  }
  return a.colPivHouseholderQr().solve(b)(0);
}

std::vector<double> radial_slopes(const CircuitConfig &cfg, ComplexFrequency omega_ep,
                                  double rel_min, double rel_max, int n_directions,
                                  int n_points)
{
  const cdouble w0 = omega_ep.value();
  const double scale = std::abs(w0);
  std::vector<double> slopes;
  for (int d = 0; d < n_directions; ++d)
  {
    const double theta = two_pi * d / n_directions;
    const cdouble dir = std::polar(1.0, theta);
    std::vector<double> rho, mag;
    for (int k = 0; k < n_points; ++k)
    {
      const double rel =
        rel_min * std::pow(rel_max / rel_min, static_cast<double>(k) / (n_points - 1));
      rho.push_back(rel * scale);
      mag.push_back(std::abs(total_reflection(cfg, ComplexFrequency::from(w0 + rel * scale * dir))));
    }
    slopes.push_back(loglog_slope(rho, mag));
  }
  return slopes;
}

ComplexFrequency polish_critical_point(const CircuitConfig &cfg, ComplexFrequency start,
                                       int max_iterations)
{
  cdouble w = start.value();
  for (int it = 0; it < max_iterations; ++it)
  {
    const auto d = g_derivatives(cfg, w);
    if (d.g2 == 0.0)
    {
      break;
    }
    const cdouble step = d.g1 / d.g2;
    w -= step;
    if (std::abs(step) < 1e-15 * std::abs(w))
    {
      break;
    }
  }
  return ComplexFrequency::from(w);
}

std::vector<double> linspace(double a, double b, int n)
{
  std::vector<double> out;
  if (n == 1)
  {
    out.push_back(a);
    return out;
  }
  for (int i = 0; i < n; ++i)
  {
    out.push_back(a + (b - a) * i / (n - 1));
  }
  return out;
}

RootLocus track_coalescence(const CircuitConfig &cfg, ComplexFrequency start,
                            const std::vector<double> &ratios)
{
  cfg.validate();
  RootLocus locus;
  cdouble center = start.value();
  std::optional<std::pair<cdouble, cdouble>> previous;
  double previous_jump = 0.0;
  double previous_sep = 0.0;

  for (const double ratio : ratios)
  {
    if (!std::isfinite(ratio) || ratio < 0.0)
    {
      throw ContinuationBreakError(locus.ratios.empty() ? std::nan("") : locus.ratios.back(),
                                   "invalid length ratio");
    }
    CircuitConfig step_cfg = cfg;
    step_cfg.l1 = ratio * cfg.l2;
    center = polish_critical_point(step_cfg, ComplexFrequency::from(center)).value();

    // Quadratic model about the critical point of g, then Newton on g for each root.
    const auto d = g_derivatives(step_cfg, center);
    const cdouble sq = std::sqrt(d.g1 * d.g1 - 2.0 * d.g * d.g2);
    cdouble a = center + (-d.g1 + sq) / d.g2;
    cdouble b = center + (-d.g1 - sq) / d.g2;
    if (std::abs(a - b) > 1e-5 * std::abs(center))
    {
      a = newton_on_g(step_cfg, a, 40);
      b = newton_on_g(step_cfg, b, 40);
    }

    const double res = std::max(std::abs(numerator_g(step_cfg, ComplexFrequency::from(a))),
                                std::abs(numerator_g(step_cfg, ComplexFrequency::from(b)))) /
                       d.scale;
    const double last_good = locus.ratios.empty() ? ratio : locus.ratios.back();
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) ||
        !std::isfinite(b.imag()) || !(res < 1e-8))
    {
      throw ContinuationBreakError(last_good,
                                   "root lost at ratio " + std::to_string(ratio));
    }

    if (previous)
    {
      const auto [pa, pb] = *previous;
      if (std::abs(a - pa) + std::abs(b - pb) > std::abs(a - pb) + std::abs(b - pa))
      {
        std::swap(a, b);
      }
      const double jump = std::max(std::abs(a - pa), std::abs(b - pb));
      const double sep = std::abs(a - b);
      const double local = std::max({previous_jump, 0.5 * (sep + previous_sep),
                                     1e-9 * std::abs(center)});
      if (jump > 5.0 * local)
      {
        throw ContinuationBreakError(last_good,
                                     "root jumped " + std::to_string(jump / local) +
                                       "x the local step at ratio " + std::to_string(ratio));
      }
      previous_jump = jump;
    }
    previous = std::make_pair(a, b);
    previous_sep = std::abs(a - b);

    locus.ratios.push_back(ratio);
    locus.roots.emplace_back(ComplexFrequency::from(a), ComplexFrequency::from(b));
    locus.separations.push_back(std::abs(a - b));
    locus.residuals.push_back(res);
  }
  return locus;
}

double splitting_exponent(const RootLocus &locus, double ratio_ep)
{
  std::vector<double> x, y;
  for (std::size_t i = 0; i < locus.ratios.size(); ++i)
  {
    const double detune = std::abs(locus.ratios[i] - ratio_ep);
    if (detune > 1e-12 * std::abs(ratio_ep) && locus.separations[i] > 0.0)
    {
      x.push_back(detune);
      y.push_back(locus.separations[i]);
    }
  }
  return loglog_slope(x, y);
}

std::vector<LengthSearchResult> search_lengths(const CircuitConfig &fixed,
                                               const std::vector<double> &l1_values,
                                               const std::vector<double> &l2_values,
                                               ComplexFrequency seed, double target_re,
                                               Branch branch, unsigned workers)
{
  const std::size_t n = l1_values.size() * l2_values.size();
  std::vector<std::optional<LengthSearchResult>> slots(n);
  detail::parallel_for(n, workers, [&](std::size_t idx) {
    CircuitConfig c = fixed;
    c.l1 = l1_values[idx / l2_values.size()];
    c.l2 = l2_values[idx % l2_values.size()];
    try
    {
      slots[idx] = LengthSearchResult{c.l1, c.l2, find_ep(c, seed, branch)};
    }
    catch (const Error &)
    {
    }
  });
  std::vector<LengthSearchResult> out;
  for (auto &s : slots)
  {
    if (s)
    {
      out.push_back(std::move(*s));
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const auto &x, const auto &y) {
    return std::abs(x.solution.omega_ep.re - target_re) <
           std::abs(y.solution.omega_ep.re - target_re);
  });
  return out;
}

}  // namespace cpaep
