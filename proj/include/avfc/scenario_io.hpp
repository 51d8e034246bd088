#pragma once

#include "avfc/engine.hpp"
#include "avfc/error.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace avfc {

/// Malformed or inconsistent scenario text. `line` is 1-based, 0 when the
/// problem is not tied to a single line.
class ScenarioError : public Error {
public:
    ScenarioError(std::size_t line, const std::string& msg)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Parses and validates scenario text. Sections:
///
///   [system]              n, A, b, C
///   [nonlinearity]        f, g, g_min
///   [reference]           A_d, B_d, r
///   [disturbance_channel] mode = constant|matched, E | scale
///   [adaptation]          gamma1..3, P = rows|auto, P1, theta_design,
///                         d_tilde_max, d_dot_max, mu_rate
///   [faults]              at = <t> kind = loss theta = <v>
///                         at = <t> kind = additive|disturbance signal = <expr>
///   [run]                 t_end, h, mode, x0_hat, x0_f, x0_d, eps_band
///
/// Matrices are written row-major: entries separated by ',' and rows by ';'.
Scenario parse_scenario(std::string_view text);

/// Syntax, key and shape checks only; skips the model invariants (matching,
/// controllability, Hurwitz, grid alignment) so diagnostics can still inspect
/// a rejected model.
Scenario parse_scenario_unchecked(std::string_view text);

/// Throws std::ios_base::failure when the file cannot be opened.
std::string read_text_file(const std::string& path);

Scenario load_scenario(const std::string& path);

/// Canonical text; parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& s);

/// The reference simulation study, with default fault waveforms.
Scenario paper_scenario();

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

} // namespace avfc
