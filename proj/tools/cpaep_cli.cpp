// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

// cpaep: locate CPA exceptional points and simulate waveform capture.
//
//   cpaep ep-find  --config cfg.json [--out DIR] [--override KEY=VALUE ...]
//   cpaep ep-sweep | coalesce | simulate | taylor  (same flags)

#include <iostream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "cpaep/commands.hpp"
#include "cpaep/config.hpp"

namespace
{

struct Common
{
  std::string config;
  std::string out = ".";
  std::vector<std::string> overrides;
};

CLI::App *add_command(CLI::App &app, const std::string &name, const std::string &help,
                      Common &common)
{
  CLI::App *sub = app.add_subcommand(name, help);
  sub->add_option("--config", common.config, "JSON run configuration")->required();
  sub->add_option("--out", common.out, "output directory");
  sub->add_option("--override", common.overrides, "dot-path override KEY=VALUE")
    ->take_all();
  return sub;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Virtual CPA exceptional points of a two-segment cavity"};
  app.require_subcommand(1);
  Common common;
  using Handler = nlohmann::json (*)(const cpaep::RunConfig &, const std::filesystem::path &);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
    {"ep-find", "solve for the EP and write ep_solution.json", cpaep::cmd_ep_find},
    {"ep-sweep", "|r| over a complex-frequency grid (sweep.csv)", cpaep::cmd_ep_sweep},
    {"coalesce", "zero pair versus l1/l2 (locus.csv)", cpaep::cmd_coalesce},
    {"simulate", "scattered field and energy fraction (input, scattered, energy CSV)",
     cpaep::cmd_simulate},
    {"taylor", "print exponential-ratio Taylor coefficients", cpaep::cmd_taylor}};
  std::vector<std::pair<CLI::App *, Handler>> subs;
  for (const auto &[name, help, fn] : commands)
  {
    subs.emplace_back(add_command(app, name, help, common), fn);
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : cpaep::exit_config;
  }

  try
  {
    const cpaep::RunConfig rc = cpaep::load_run_config(common.config, common.overrides);
    for (const auto &[sub, fn] : subs)
    {
      if (sub->parsed())
      {
        const nlohmann::json summary = fn(rc, common.out);
        if (sub->get_name() != "taylor")
        {
          std::cout << summary.dump(2) << '\n';
        }
      }
    }
  }
  catch (const std::exception &e)
  {
    const int code = cpaep::exit_code_for_current_exception();
    std::cerr << "error: " << e.what() << '\n';
    return code;
  }
  return cpaep::exit_ok;
}
