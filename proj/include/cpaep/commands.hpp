// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CPAEP_COMMANDS_HPP
#define CPAEP_COMMANDS_HPP

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "cpaep/config.hpp"
#include "cpaep/ep_solver.hpp"

// Subcommand bodies behind the command-line front end. Each writes its artifacts into
// `out` and returns the summary it also writes as JSON.

namespace cpaep
{

// Exit codes of the command-line tool.
enum ExitCode : int
{
  exit_ok = 0,
  exit_other = 1,
  exit_config = 2,
  exit_solver = 3,
  exit_accuracy = 4
};

// Maps the exception currently being handled to an exit code.
int exit_code_for_current_exception();

struct ResolvedCircuit
{
  CircuitConfig circuit;
  ComplexFrequency omega_ep;
  std::optional<EPSolution> solution;  // set when the EP was solved for
};

// A fully specified circuit plus its EP: solved with find_ep when C or Z2 is missing,
// otherwise located as the critical point of g nearest the seed.
ResolvedCircuit resolve_circuit(const RunConfig &rc);

nlohmann::json ep_solution_to_json(const EPSolution &sol);

nlohmann::json cmd_ep_find(const RunConfig &rc, const std::filesystem::path &out);
nlohmann::json cmd_ep_sweep(const RunConfig &rc, const std::filesystem::path &out);
nlohmann::json cmd_coalesce(const RunConfig &rc, const std::filesystem::path &out);
nlohmann::json cmd_simulate(const RunConfig &rc, const std::filesystem::path &out);
nlohmann::json cmd_taylor(const RunConfig &rc, const std::filesystem::path &out);

// "%.12e"
std::string format_number(double x);

}  // namespace cpaep

#endif  // CPAEP_COMMANDS_HPP
