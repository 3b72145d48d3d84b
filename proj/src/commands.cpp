// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cpaep/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>

#include "cpaep/circuit_model.hpp"
#include "cpaep/errors.hpp"
#include "cpaep/time_domain.hpp"

namespace cpaep
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

// Search box for the default seed, Hz.
constexpr double seed_re_min_hz = 1e9, seed_re_max_hz = 10e9;
constexpr double seed_im_min_hz = -3e9, seed_im_max_hz = -0.05e9;

json frequency_json(ComplexFrequency w)
{
  return {{"re_rad_per_s", w.re},
          {"im_rad_per_s", w.im},
          {"re_hz", w.re / two_pi},
          {"im_hz", w.im / two_pi},
          {"growth_rate_per_s", w.growth_rate()}};
}

json number_or_null(double x)
{
  return std::isfinite(x) ? json(x) : json(nullptr);
}

void write_json(const fs::path &path, const json &doc)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

class CsvWriter
{
public:
  CsvWriter(const fs::path &path, const std::string &header) : out_(path)
  {
    if (!out_)
    {
      throw Error("cannot write " + path.string());
    }
    out_ << header << '\n';
  }
  void row(std::initializer_list<double> values)
  {
    bool first = true;
    for (double v : values)
    {
      if (!first)
      {
        out_ << ',';
      }
      out_ << format_number(v);
      first = false;
    }
    out_ << '\n';
  }

private:
  std::ofstream out_;
};

void write_series(const fs::path &path, const TimeSeries &ts)
{
  CsvWriter csv(path, "t_s,re,im,abs");
  for (Eigen::Index j = 0; j < ts.size(); ++j)
  {
    const cdouble x = ts.samples(j);
    csv.row({ts.time(j), x.real(), x.imag(), std::abs(x)});
  }
}

ComplexFrequency seed_for(const RunConfig &rc)
{
  if (rc.solver.seed)
  {
    return *rc.solver.seed;
  }
  return coarse_seed(rc.circuit, two_pi * seed_re_min_hz, two_pi * seed_re_max_hz,
                     two_pi * seed_im_min_hz, two_pi * seed_im_max_hz, 24, rc.solver.branch);
}

void prepare(const fs::path &out) { fs::create_directories(out); }

}  // namespace

std::string format_number(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

int exit_code_for_current_exception()
{
  try
  {
    throw;
  }
  catch (const ConfigError &)
  {
    return exit_config;
  }
  catch (const nlohmann::json::exception &)
  {
    return exit_config;
  }
  catch (const RefinementNeededError &)
  {
    return exit_accuracy;
  }
  catch (const DivergenceError &)
  {
    return exit_solver;
  }
  catch (const RejectedSolutionError &)
  {
    return exit_solver;
  }
  catch (const DegenerateGeometryError &)
  {
    return exit_solver;
  }
  catch (const ContinuationBreakError &)
  {
    return exit_solver;
  }
  catch (...)
  {
    return exit_other;
  }
}

ResolvedCircuit resolve_circuit(const RunConfig &rc)
{
  ResolvedCircuit out;
  if (rc.fully_specified())
  {
    rc.circuit.validate();
    out.circuit = rc.circuit;
    const ComplexFrequency seed =
      rc.solver.seed ? *rc.solver.seed
                     : ComplexFrequency::from_hz(0.5 * (seed_re_min_hz + seed_re_max_hz),
                                                 0.5 * (seed_im_min_hz + seed_im_max_hz));
    out.omega_ep = polish_critical_point(out.circuit, seed);
    return out;
  }
  EPSolution sol = find_ep(rc.circuit, seed_for(rc), rc.solver.branch, rc.solver.options);
  out.circuit = sol.circuit;
  out.omega_ep = sol.omega_ep;
  out.solution = std::move(sol);
  return out;
}

json ep_solution_to_json(const EPSolution &sol)
{
  json trace = json::array();
  for (double t : sol.trace)
  {
    trace.push_back(t);
  }
  return {{"sign_convention", "exp(i w t); growing drives have Im(w) < 0"},
          {"omega_ep", frequency_json(sol.omega_ep)},
          {"C", sol.C},
          {"Z2", sol.Z2},
          {"r2", sol.r2},
          {"r2_imag", sol.r2_imag},
          {"branch", to_string(sol.branch)},
          {"residual_g", sol.residual_g},
          {"residual_dg", sol.residual_dg},
          {"q_factor", number_or_null(sol.q_factor)},
          {"discriminant", sol.discriminant},
          {"possible_higher_order_ep", sol.coalescing_branches},
          {"iterations", sol.iterations},
          {"residual_trace", trace},
          {"circuit", circuit_to_json(sol.circuit)}};
}

json cmd_ep_find(const RunConfig &rc, const fs::path &out)
{
  prepare(out);
  const EPSolution sol = find_ep(rc.circuit, seed_for(rc), rc.solver.branch, rc.solver.options);
  const json doc = ep_solution_to_json(sol);
  write_json(out / "ep_solution.json", doc);
  return doc;
}

json cmd_ep_sweep(const RunConfig &rc, const fs::path &out)
{
  prepare(out);
  const ResolvedCircuit rcirc = resolve_circuit(rc);
  SweepSpec spec;
  if (rc.sweep.spec)
  {
    spec = *rc.sweep.spec;
  }
  else
  {
    const double half = 0.1 * std::abs(rcirc.omega_ep.value());
    spec = {rcirc.omega_ep.re - half, rcirc.omega_ep.re + half, rcirc.omega_ep.im - half,
            rcirc.omega_ep.im + half, rc.sweep.nx, rc.sweep.ny};
  }
  const SweepGrid grid = sweep_reflection(rcirc.circuit, spec);

  {
    CsvWriter csv(out / "sweep.csv", "re_omega_hz,im_omega_hz,abs_r");
    for (Eigen::Index row = 0; row < grid.abs_r.rows(); ++row)
    {
      for (Eigen::Index col = 0; col < grid.abs_r.cols(); ++col)
      {
        csv.row({grid.re(col) / two_pi, grid.im(row) / two_pi, grid.abs_r(row, col)});
      }
    }
  }

  // The exponent is fitted around the zero of g' nearest the grid minimum.
  const ComplexFrequency center = polish_critical_point(rcirc.circuit, grid.min_location());
  const auto slopes =
    radial_slopes(rcirc.circuit, center, rc.sweep.fit_min_rel, rc.sweep.fit_max_rel);
  const double mean = std::accumulate(slopes.begin(), slopes.end(), 0.0) / slopes.size();
  json summary = {
    {"grid_min", frequency_json(grid.min_location())},
    {"grid_min_abs_r", number_or_null(grid.min_value())},
    {"nx", grid.abs_r.cols()},
    {"ny", grid.abs_r.rows()},
    {"pole_cells", grid.pole_cells},
    {"refined_center", frequency_json(center)},
    {"abs_r_at_center", std::abs(total_reflection(rcirc.circuit, center))},
    {"fit_range_rel", {rc.sweep.fit_min_rel, rc.sweep.fit_max_rel}},
    {"radial_slopes", slopes},
    {"exponent", mean},
    {"exponent_min", *std::min_element(slopes.begin(), slopes.end())},
    {"exponent_max", *std::max_element(slopes.begin(), slopes.end())}};
  if (grid.pole_cells > 0)
  {
    summary["warnings"] = {std::to_string(grid.pole_cells) + " grid cells lie on poles of r"};
  }
  write_json(out / "sweep_summary.json", summary);
  return summary;
}

json cmd_coalesce(const RunConfig &rc, const fs::path &out)
{
  prepare(out);
  const ResolvedCircuit rcirc = resolve_circuit(rc);
  const double ratio_ep = rcirc.circuit.l1 / rcirc.circuit.l2;
  const double lo = rc.coalesce.ratio_min.value_or(ratio_ep - 0.05);
  const double hi = rc.coalesce.ratio_max.value_or(ratio_ep + 0.05);
  const RootLocus locus =
    track_coalescence(rcirc.circuit, rcirc.omega_ep, linspace(lo, hi, rc.coalesce.n_steps));

  {
    CsvWriter csv(out / "locus.csv", "ratio,re_root_hz,im_root_hz");
    for (std::size_t i = 0; i < locus.ratios.size(); ++i)
    {
      const auto &[a, b] = locus.roots[i];
      csv.row({locus.ratios[i], a.re / two_pi, a.im / two_pi});
      csv.row({locus.ratios[i], b.re / two_pi, b.im / two_pi});
    }
  }

  const double scale = std::abs(rcirc.omega_ep.value());
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < locus.ratios.size(); ++i)
  {
    if (std::abs(locus.ratios[i] - ratio_ep) < std::abs(locus.ratios[nearest] - ratio_ep))
    {
      nearest = i;
    }
  }
  json exponent = nullptr;
  try
  {
    exponent = splitting_exponent(locus, ratio_ep);
  }
  catch (const DomainError &)
  {
  }
  const json summary = {
    {"ratio_ep", ratio_ep},
    {"omega_ep", frequency_json(rcirc.omega_ep)},
    {"ratio_range", {lo, hi}},
    {"n_steps", locus.ratios.size()},
    {"splitting_exponent", exponent},
    {"min_separation_rel", *std::min_element(locus.separations.begin(), locus.separations.end()) / scale},
    {"separation_rel_nearest_ep", locus.separations[nearest] / scale},
    {"max_root_residual", *std::max_element(locus.residuals.begin(), locus.residuals.end())}};
  write_json(out / "coalesce_summary.json", summary);
  return summary;
}

json cmd_simulate(const RunConfig &rc, const fs::path &out)
{
  prepare(out);
  const ResolvedCircuit rcirc = resolve_circuit(rc);
  const double gamma_cavity = rcirc.omega_ep.growth_rate();
  const WaveformSection &ws = rc.waveform;

  Waveform w;
  w.m = ws.m;
  w.omega_r = ws.f_carrier_hz ? two_pi * *ws.f_carrier_hz : rcirc.omega_ep.re;
  const double gamma = ws.gamma_hz ? two_pi * *ws.gamma_hz : gamma_cavity;
  w.sigma = ws.decaying ? -gamma : gamma;
  w.T = ws.window_s ? *ws.window_s : 12.0 / gamma_cavity;
  w.n_samples = ws.n_samples;
  TimeSeries input;
  try
  {
    input = synthesize(w);
  }
  catch (const DomainError &e)
  {
    throw ConfigError(std::string("waveform: ") + e.what());
  }

  ScatterOptions opts;
  opts.pad = rc.simulation.pad;
  opts.round_trips_after = rc.simulation.round_trips_after;
  opts.tolerance = rc.simulation.tolerance;
  const ScatterResult res = scattered_field(rcirc.circuit, input, opts);
  const TimeSeries fraction = fractional_scattered_energy(input, res.output);
  const CaptureSummary cap = summarize_capture(input, res.output, w.T);

  write_series(out / "input.csv", input);
  write_series(out / "scattered.csv", res.output);
  {
    CsvWriter csv(out / "energy.csv", "t_s,fraction");
    for (Eigen::Index j = 0; j < fraction.size(); ++j)
    {
      csv.row({fraction.time(j), fraction.samples(j).real()});
    }
  }

  const json summary = {
    {"omega_ep", frequency_json(rcirc.omega_ep)},
    {"waveform",
     {{"m", w.m},
      {"carrier_hz", w.omega_r / two_pi},
      {"sigma_per_s", w.sigma},
      {"window_s", w.T},
      {"n_samples", w.n_samples},
      {"dt_s", input.dt}}},
    {"output_end_s", res.output.end_time()},
    {"final_fraction", cap.fraction_at_drive_end},
    {"fraction_at_output_end", cap.fraction_at_window_end},
    {"peak_stored_fraction", cap.peak_stored},
    {"peak_stored_time_s", cap.peak_time},
    {"spectral_imbalance", res.spectral_imbalance},
    {"acausal_leakage", res.acausal_leakage}};
  write_json(out / "simulate_summary.json", summary);
  return summary;
}

json cmd_taylor(const RunConfig &rc, const fs::path &out)
{
  prepare(out);
  const TaylorSection &ts = rc.taylor;
  double gamma_in = 0.0, gamma_cavity = 0.0;
  if (ts.gamma_in_hz && ts.gamma_cavity_hz)
  {
    gamma_in = two_pi * *ts.gamma_in_hz;
    gamma_cavity = two_pi * *ts.gamma_cavity_hz;
  }
  else
  {
    const double g = resolve_circuit(rc).omega_ep.growth_rate();
    gamma_in = ts.gamma_in_hz ? two_pi * *ts.gamma_in_hz : g;
    gamma_cavity = ts.gamma_cavity_hz ? two_pi * *ts.gamma_cavity_hz : g;
  }
  const double t_max = ts.t_max_s ? *ts.t_max_s : 1.0 / gamma_cavity;
  const TaylorMatch tm = taylor_match(gamma_in, gamma_cavity, ts.order, t_max);

  std::cout << "e^{-(G+G2)t} ~ sum_k c_k t^k with G = " << format_number(gamma_in)
            << " 1/s, G2 = " << format_number(gamma_cavity) << " 1/s\n";
  for (std::size_t k = 0; k < tm.coefficients.size(); ++k)
  {
    std::cout << "c_" << k << " = " << format_number(tm.coefficients[k]) << '\n';
  }
  std::cout << "sup residual on [0, " << format_number(t_max)
            << " s] = " << format_number(tm.residual) << '\n';

  const json summary = {{"gamma_in_per_s", gamma_in},
                        {"gamma_cavity_per_s", gamma_cavity},
                        {"order", tm.order},
                        {"coefficients", tm.coefficients},
                        {"t_max_s", t_max},
                        {"residual", tm.residual}};
  write_json(out / "taylor.json", summary);
  return summary;
}

}  // namespace cpaep
