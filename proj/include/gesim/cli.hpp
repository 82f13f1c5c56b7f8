#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gesim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitTolerance = 4;

std::string_view tool_version();

/// Runs one command line (without the program name) in-process.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One comparison against an embedded expected value.
struct Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string relation;  ///< "abs", "rel", "le", "ge" or "info"
  bool passed = false;
  std::string note;
};

Check check_abs(std::string name, double value, double expected, double tolerance, std::string note = {});
Check check_rel(std::string name, double value, double expected, double tolerance, std::string note = {});
Check check_le(std::string name, double value, double limit, std::string note = {});
Check check_ge(std::string name, double value, double limit, std::string note = {});
Check info(std::string name, double value, std::string note = {});

struct ReproduceOptions {
  /// Where CSVs go; empty means no files are written.
  std::string out_dir = "reproduce";
  std::size_t trials = 100'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::size_t samples = 10'000'000;
  std::size_t rho_trials = 20'000;
};

struct ReproduceResult {
  std::string target;
  std::vector<Check> checks;
  std::vector<std::string> outputs;
  std::size_t failures() const;
};

const std::vector<std::string>& reproduce_targets();
ReproduceResult reproduce(const std::string& target, const ReproduceOptions& options);

/// "check\t..." per comparison, "info\t..." for informational rows, then "summary\t...".
void print_checks(std::ostream& out, const ReproduceResult& result);

}  // namespace gesim::cli
