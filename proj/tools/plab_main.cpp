#include <iostream>

#include "CLI11.hpp"
#include "plab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"plab: parabolic evolution laboratory"};
  app.set_version_flag("--version", std::string("plab ") + PLAB_VERSION);
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "evolve the model described by a config file");
  run->add_option("config", config, "config file (key = value)")->required();

  std::string suite;
  auto* verify = app.add_subcommand("verify", "self-checks, one JSON record per check");
  verify->add_option("suite", suite, "kernels, operators or models")->required();

  std::string csv;
  plab::cli::RatefitOptions fit;
  std::string column, expect;
  std::vector<double> window;
  auto* ratefit = app.add_subcommand("ratefit", "fit power-law or exponential rates to a ledger");
  ratefit->add_option("csv", csv, "ledger CSV")->required();
  ratefit->add_option("--column", column, "column to fit (default: all)");
  ratefit->add_option("--kind", fit.kind, "power or exp")->check(CLI::IsMember({"power", "exp"}));
  ratefit->add_option("--window", window, "fit window a,b")->delimiter(',')->expected(2);
  ratefit->add_option("--expect", expect, "column=value,tol=v");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) return plab::cli::cmd_run(config, std::cout, std::cerr);
  if (*verify) return plab::cli::cmd_verify(suite, std::cout, std::cerr);
  if (!column.empty()) fit.column = column;
  if (!expect.empty()) fit.expect = expect;
  if (!window.empty()) fit.window = std::make_pair(window[0], window[1]);
  return plab::cli::cmd_ratefit(csv, fit, std::cout, std::cerr);
}
