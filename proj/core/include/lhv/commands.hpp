#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lhv/config.hpp"
#include "lhv/report.hpp"

namespace lhv {

/// Independent evaluators disagreed beyond the stated tolerance.
class NumericalContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature and closed form must agree to this absolute tolerance.
inline constexpr double kOracleTolerance = 1e-10;

inline constexpr const char* kToolVersion = "1.0.0";

/// Column sets, fixed per subcommand.
std::vector<std::string> schema_for(Subcommand command);

ReportTable run_predict(const RunConfig& cfg);
ReportTable run_simulate(const RunConfig& cfg);
ReportTable run_fair_sampling(const RunConfig& cfg);
ReportTable run_factorization(const RunConfig& cfg);
ReportTable run_hardy(const RunConfig& cfg);

ReportTable run(const RunConfig& cfg);

std::string render(const ReportTable& table, OutputFormat format);

/// Human-readable warnings for the resolved configuration (large caps etc.).
std::vector<std::string> config_warnings(const RunConfig& cfg);

}  // namespace lhv
