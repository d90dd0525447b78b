#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhv/analysis.hpp"
#include "lhv/integration.hpp"
#include "lhv/model.hpp"

namespace lhv {

/// Invalid run configuration. The message is prefixed with the offending field
/// as a JSON pointer (e.g. "/monte_carlo/n_chunks") or the parse location.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { predict, simulate, fair_sampling, factorization, hardy };
enum class OutputFormat { csv, json };

std::string to_string(Subcommand s);
std::string to_string(OutputFormat f);
OutputFormat parse_output_format(const std::string& s);

struct SumRuleTuple {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta20 = 0.0;
};

/// Fully resolved configuration. Angles are radians in the normalized frame
/// (after the |R| > |T| swap, if it applied).
struct RunConfig {
  Subcommand command = Subcommand::predict;
  BeamSplitter beam_splitter{0.2, 0.8};
  bool swapped = false;
  double gamma = 0.25;
  double phi = 0.0;
  double C = 1.0;
  std::vector<double> epsilons{0.01};
  double N = 1.0;
  std::vector<Setting> settings;
  std::optional<HardySettings> hardy;
  std::optional<double> hardy_zero_theta1;  // set when hardy was constructed from zeros
  HardyLayout hardy_layout = HardyLayout::hardy;
  NormalizationFit fit = NormalizationFit::max_entry;
  std::vector<SumRuleTuple> sum_rule_tuples;
  McSpec mc;
  QuadratureSpec quad;
  OutputFormat format = OutputFormat::csv;
  std::string out_path;  // empty: standard output

  ModelParams params(double epsilon) const { return ModelParams::make(gamma, C, epsilon); }
};

/// Parses and validates a JSON configuration document for the given subcommand.
RunConfig parse_config(const std::string& text, Subcommand command);

RunConfig load_config(const std::string& path, Subcommand command);

}  // namespace lhv
