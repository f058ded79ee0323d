#ifndef KPA_CLI_OUTPUT_HPP
#define KPA_CLI_OUTPUT_HPP

#include <optional>
#include <string>

#include "json.hpp"
#include "kpa/canonical/report.hpp"
#include "kpa/cli/config.hpp"

namespace kpa::cli {

struct RunInfo {
  std::string basis;
  SuiteConfig opts;
  /// Only set with --timing, so default output stays byte-identical across runs.
  std::optional<double> wall_seconds;
};

/// KPA_COLOR=0 or 1 forces plain or colored output; otherwise color on a terminal.
bool color_enabled();

std::string render_text(const canonical::Report& report, const RunInfo& info, bool color);
nlohmann::ordered_json render_json(const canonical::Report& report, const RunInfo& info);
nlohmann::ordered_json entry_json(const canonical::Entry& e);

/// 0 when every entry passes and no tripwire fired, 1 otherwise.
int exit_code(const canonical::Report& report);

}  // namespace kpa::cli

#endif  // KPA_CLI_OUTPUT_HPP
