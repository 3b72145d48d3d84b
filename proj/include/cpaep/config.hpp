// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CPAEP_CONFIG_HPP
#define CPAEP_CONFIG_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpaep/ep_solver.hpp"
#include "cpaep/types.hpp"

// Run configuration read from strict-schema JSON. Every key carries its unit in its
// name; unknown keys are errors.
//
//   circuit:    Z0_ohm, Z1_ohm, Z2_ohm?, l1_m, l2_m, v_m_per_s?,
//               coupler {C_f?, f_d_hz},
//               load {kind: short | reflection (r3_re, r3_im) |
//                     impedance (numerator, denominator: [[re, im], ...] ascending in w)}
//   solver?:    seed_re_hz, seed_im_hz, branch, tol, max_iter
//   sweep?:     re_min_hz, re_max_hz, im_min_hz, im_max_hz, nx, ny, fit_min_rel, fit_max_rel
//   coalesce?:  ratio_min, ratio_max, n_steps
//   waveform?:  m, envelope (growing | decaying), f_carrier_hz?, gamma_hz?, window_s?,
//               n_samples
//   simulation?: pad, round_trips_after, tolerance
//   taylor?:    order, gamma_in_hz?, gamma_cavity_hz?, t_max_s?
//
// Omitted C_f or Z2_ohm means "solve for the EP". Frequencies in *_hz keys are w / 2pi;
// imaginary parts follow the e^{iwt} convention (growing drives have negative im).

namespace cpaep
{

struct SolverSection
{
  std::optional<ComplexFrequency> seed;
  Branch branch = Branch::Auto;
  SolverOptions options;
};

struct SweepSection
{
  std::optional<SweepSpec> spec;  // default: box around the EP
  int nx = 101, ny = 101;
  double fit_min_rel = 1e-4;
  double fit_max_rel = 1e-2;
};

struct CoalesceSection
{
  std::optional<double> ratio_min, ratio_max;  // default: EP ratio -/+ 0.05
  int n_steps = 21;
};

struct WaveformSection
{
  int m = 0;
  bool decaying = false;
  std::optional<double> f_carrier_hz;  // default Re(w_EP) / 2pi
  std::optional<double> gamma_hz;      // default |Im(w_EP)| / 2pi
  std::optional<double> window_s;      // default 12 / G2
  std::size_t n_samples = 1024;
};

struct SimulationSection
{
  int pad = 8;
  double round_trips_after = 10.0;
  double tolerance = 1e-3;
};

struct TaylorSection
{
  int order = 2;
  std::optional<double> gamma_in_hz;
  std::optional<double> gamma_cavity_hz;
  std::optional<double> t_max_s;
};

struct RunConfig
{
  CircuitConfig circuit;
  bool has_capacitance = false;
  bool has_Z2 = false;
  SolverSection solver;
  SweepSection sweep;
  CoalesceSection coalesce;
  WaveformSection waveform;
  SimulationSection simulation;
  TaylorSection taylor;

  bool fully_specified() const { return has_capacitance && has_Z2; }
};

// Applies "a.b.c=value" overrides; value is parsed as JSON, else taken as a string.
void apply_overrides(nlohmann::json &doc, const std::vector<std::string> &overrides);

// Throws ConfigError naming the offending field (or line and column for syntax errors).
RunConfig parse_run_config(const nlohmann::json &doc);
RunConfig load_run_config(const std::string &path, const std::vector<std::string> &overrides = {});

// The "circuit" block alone; round-trips with circuit_to_json.
CircuitConfig parse_circuit(const nlohmann::json &block);
nlohmann::json circuit_to_json(const CircuitConfig &cfg);

}  // namespace cpaep

#endif  // CPAEP_CONFIG_HPP
