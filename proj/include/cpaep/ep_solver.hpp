// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CPAEP_EP_SOLVER_HPP
#define CPAEP_EP_SOLVER_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cpaep/types.hpp"

namespace cpaep
{

// Root of the a +/- sqrt(b) capacitance quadratic. Auto picks minus when that root is
// realizable (C > 0, |r2| < 1) and plus otherwise.
enum class Branch
{
  Auto,
  Plus,
  Minus
};

std::string to_string(Branch b);
Branch branch_from_string(const std::string &s);

// r2 that zeroes g at w for the coupler in `cfg` (cfg.Z2 is ignored):
// r2 = (r3 e1 e2 - r1) / (e1 - r3 r1 e2). Throws DegenerateGeometryError when the
// denominator vanishes.
cdouble r2_from_g_zero(const CircuitConfig &cfg, ComplexFrequency omega);

struct CapacitanceCandidate
{
  Branch branch = Branch::Plus;
  double C = 0.0;
  cdouble r2;  // complex r2 at this C; its imaginary part is ~0 by construction
};

struct CapacitanceBranches
{
  // Discriminant of a C^2 + b C + c = 0 after normalization (b^2 - 4ac) / b^2.
  double discriminant = 0.0;
  // |discriminant| below 1e-12: the two roots coincide (possible higher-order EP).
  bool coalescing = false;
  // Only real, positive C values, plus branch first.
  std::vector<CapacitanceCandidate> candidates;

  const CapacitanceCandidate *find(Branch b) const;
};

// Capacitances making r2 real at w for the geometry in `cfg` (cfg.coupler.capacitance
// and cfg.Z2 are ignored). Im(N conj D) = 0 with N, D linear in C gives a real
// quadratic. Each returned candidate satisfies |Im r2| < 1e-9.
CapacitanceBranches capacitance_branches(const CircuitConfig &cfg, ComplexFrequency omega);

// The circuit realizing the EP reduction at w on a branch: C from the quadratic,
// Z2 = Z1 (1 + r2) / (1 - r2). Empty when the branch has no positive root.
struct BranchCircuit
{
  CircuitConfig circuit;
  Branch branch = Branch::Plus;
  cdouble r2;
  double discriminant = 0.0;
  bool coalescing = false;
};
std::optional<BranchCircuit> circuit_on_branch(const CircuitConfig &fixed,
                                               ComplexFrequency omega, Branch branch);

struct SolverOptions
{
  double tolerance = 1e-12;  // relative step in w
  int max_iterations = 100;
  int max_halvings = 20;
  double residual_g_tolerance = 1e-10;
  double residual_dg_tolerance = 1e-8;
};

struct EPSolution
{
  ComplexFrequency omega_ep;
  double C = 0.0;
  double Z2 = 0.0;
  double r2 = 0.0;
  double r2_imag = 0.0;
  Branch branch = Branch::Plus;
  double residual_g = 0.0;   // |g| / max|term|
  double residual_dg = 0.0;  // |w dg/dw| / max|term|
  double q_factor = 0.0;
  double discriminant = 0.0;
  bool coalescing_branches = false;
  int iterations = 0;
  std::vector<double> trace;  // residual norm per iterate
  CircuitConfig circuit;      // fully specified circuit at the EP
};

// Newton solve of dg/dw = 0 in (Re w, Im w) with C and Z2 slaved to w through the
// branch. `fixed` supplies Z0, Z1, l1, l2, v, w_d and the load.
// Throws DivergenceError (with trace) or RejectedSolutionError.
EPSolution find_ep(const CircuitConfig &fixed, ComplexFrequency seed,
                   Branch branch = Branch::Auto, const SolverOptions &opts = {});

// Seed from the minimum of the normalized EP residual on a coarse grid.
ComplexFrequency coarse_seed(const CircuitConfig &fixed, double re_min, double re_max,
                             double im_min, double im_max, int n = 24,
                             Branch branch = Branch::Auto);

// Re(w) / (2 |Im(w)|); +inf when Im(w) = 0.
double q_factor(ComplexFrequency omega);
double q_factor(const EPSolution &sol);

// ---------------------------------------------------------------- sweep

struct SweepSpec
{
  double re_min = 0.0, re_max = 0.0;  // rad/s
  double im_min = 0.0, im_max = 0.0;  // rad/s
  int nx = 1, ny = 1;
};

struct SweepGrid
{
  Eigen::VectorXd re;      // nx
  Eigen::VectorXd im;      // ny
  Eigen::MatrixXd abs_r;   // ny x nx, NaN at flagged poles
  int pole_cells = 0;
  Eigen::Index min_row = 0, min_col = 0;

  ComplexFrequency min_location() const { return {re(min_col), im(min_row)}; }
  double min_value() const { return abs_r(min_row, min_col); }
};

SweepGrid sweep_reflection(const CircuitConfig &cfg, const SweepSpec &spec,
                           unsigned workers = 0);

// Log-log slope of |r(w_ep + rho e^{i theta})| against rho for n_directions angles,
// rho log-spaced over [rel_min, rel_max] * |w_ep|.
std::vector<double> radial_slopes(const CircuitConfig &cfg, ComplexFrequency omega_ep,
                                  double rel_min, double rel_max, int n_directions = 8,
                                  int n_points = 21);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

// Newton on dg/dw from a starting point with the circuit held fixed.
ComplexFrequency polish_critical_point(const CircuitConfig &cfg, ComplexFrequency start,
                                       int max_iterations = 60);

// ---------------------------------------------------------------- coalescence

struct RootLocus
{
  std::vector<double> ratios;  // l1 / l2
  std::vector<std::pair<ComplexFrequency, ComplexFrequency>> roots;
  std::vector<double> separations;  // |w+ - w-|
  std::vector<double> residuals;    // max |g|/scale of the pair
};

// Zeros of r near `start` as l1 = ratio * l2 varies with l2, C and Z2 held at the
// values in `cfg`. Each step continues from the previous pair.
// Throws ContinuationBreakError when a root jumps more than 5x the local step.
RootLocus track_coalescence(const CircuitConfig &cfg, ComplexFrequency start,
                            const std::vector<double> &ratios);

std::vector<double> linspace(double a, double b, int n);

// Fitted exponent p of |w+ - w-| ~ |ratio - ratio_ep|^p (points with zero detuning
// are skipped).
double splitting_exponent(const RootLocus &locus, double ratio_ep);

// ---------------------------------------------------------------- length search

struct LengthSearchResult
{
  double l1 = 0.0;
  double l2 = 0.0;
  EPSolution solution;
};

// Solves find_ep over an (l1, l2) grid from `seed` and returns the realizable
// solutions, sorted by |Re(w_ep) - target_re| (rad/s).
std::vector<LengthSearchResult> search_lengths(const CircuitConfig &fixed,
                                               const std::vector<double> &l1_values,
                                               const std::vector<double> &l2_values,
                                               ComplexFrequency seed, double target_re,
                                               Branch branch = Branch::Auto,
                                               unsigned workers = 0);

}  // namespace cpaep

#endif  // CPAEP_EP_SOLVER_HPP
