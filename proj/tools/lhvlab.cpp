// lhvlab: evaluates the two-photon hidden-variable model against the quantum
// prediction and writes deterministic CSV/JSON tables.
//
//   lhvlab <predict|simulate|fair-sampling|factorization|hardy> --config run.json
//          [--out file] [--format csv|json] [--seed N]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-contract violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lhv/commands.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
};

int execute(lhv::Subcommand command, const Options& opts) {
  lhv::RunConfig cfg = lhv::load_config(opts.config, command);
  if (opts.seed) cfg.mc.seed = *opts.seed;
  if (!opts.format.empty()) cfg.format = lhv::parse_output_format(opts.format);
  if (!opts.out.empty()) cfg.out_path = opts.out;

  for (const auto& w : lhv::config_warnings(cfg)) std::cerr << "warning: " << w << '\n';

  const std::string text = lhv::render(lhv::run(cfg), cfg.format);
  if (cfg.out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(cfg.out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw lhv::ConfigError(cfg.out_path + ": cannot open output file");
  out << text;
  if (!out) throw lhv::ConfigError(cfg.out_path + ": write failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon local-hidden-variable model laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lhv::kToolVersion));

  Options opts;
  std::optional<lhv::Subcommand> chosen;
  const std::pair<const char*, lhv::Subcommand> commands[] = {
      {"predict", lhv::Subcommand::predict},
      {"simulate", lhv::Subcommand::simulate},
      {"fair-sampling", lhv::Subcommand::fair_sampling},
      {"factorization", lhv::Subcommand::factorization},
      {"hardy", lhv::Subcommand::hardy},
  };
  const char* descriptions[] = {
      "quantum prediction and leading-order model table",
      "Monte Carlo, quadrature, closed-form and leading-order model evaluation",
      "sum-rule residuals and their epsilon scaling",
      "factorization check in raw and renormalized modes",
      "four-probability Hardy table, quantum vs model",
  };
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, descriptions[i]);
    sub->add_option("--config", opts.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output path (default: stdout)");
    sub->add_option("--format", opts.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", opts.seed, "Monte Carlo master seed (overrides config)");
    const auto command = commands[i].second;
    sub->callback([&chosen, command] { chosen = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    return execute(*chosen, opts);
  } catch (const lhv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lhv::InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lhv::NumericalContractViolation& e) {
    std::cerr << "numerical contract violation: " << e.what() << '\n';
    return kExitNumerical;
  }
}
