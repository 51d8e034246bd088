#pragma once

#include "avfc/controller.hpp"
#include "avfc/engine.hpp"
#include "avfc/verify.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace avfc {

/// Header row of trace.csv for state dimension n and output dimension l.
std::string trace_csv_header(std::size_t n, std::size_t l);

/// One row per step, every value printed with 17 significant digits.
void write_trace_csv(const SimTrace& tr, std::ostream& out);

std::string render_metrics(const Metrics& m, const Scenario& s, double eps_band);

std::string render_condition_report(const ConditionReport& r, std::string_view title);

/// Machine-readable companion of render_condition_report: one `key,value...` line per field.
std::string condition_report_csv(const ConditionReport& r);

std::string render_gains(const NominalGains& g);

struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Self-contained SVG line chart with auto-scaled axes and 1-2-5 ticks.
std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<ChartSeries>& series);

/// output.svg, states.svg, xtilde.svg and adaptation.svg contents, keyed by file name.
std::vector<std::pair<std::string, std::string>> trace_charts(const SimTrace& tr);

} // namespace avfc
