#pragma once

#include "avfc/engine.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace avfc {

/// Process exit codes shared by every command.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;   // not certified / matching violated
inline constexpr int kParse = 2;
inline constexpr int kNumerical = 3;
inline constexpr int kIo = 4;
} // namespace exit_code

struct RunOptions {
    std::vector<std::string> scenarios;
    std::optional<RunMode> mode;
    std::string out_dir = ".";
    int jobs = 1;
    std::optional<double> eps_band;
};

/// Writes trace.csv, metrics.txt and the four SVG charts. With several
/// scenarios each run gets its own sub-directory named after the file stem.
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

int cmd_verify(const std::string& scenario_path, bool csv, std::ostream& out, std::ostream& err);

int cmd_gains(const std::string& scenario_path, std::ostream& out, std::ostream& err);

int cmd_emit_default(const std::string& out_path, std::ostream& out, std::ostream& err);

} // namespace avfc
