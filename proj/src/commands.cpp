#include "avfc/commands.hpp"

#include "avfc/batch.hpp"
#include "avfc/controller.hpp"
#include "avfc/report.hpp"
#include "avfc/scenario_io.hpp"
#include "avfc/verify.hpp"

#include <filesystem>
#include <fstream>
#include <map>

namespace fs = std::filesystem;

namespace avfc {

namespace {

/// Loads a scenario, mapping failures onto exit codes.
template <typename Loader>
std::optional<Scenario> load(const std::string& path, Loader&& loader, std::ostream& err, int& code) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        code = exit_code::kIo;
        return std::nullopt;
    }
    try {
        return loader(text);
    } catch (const ScenarioError& e) {
        err << path << ": " << e.what() << '\n';
    } catch (const Error& e) {
        err << path << ": " << e.what() << '\n';
    }
    code = exit_code::kParse;
    return std::nullopt;
}

bool write_file(const fs::path& path, const std::string& content, std::ostream& err) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (f) f << content;
    if (!f) {
        err << "error: cannot write '" << path.string() << "'\n";
        return false;
    }
    return true;
}

bool write_outputs(const fs::path& dir, const SimTrace& tr, const Metrics& m, const Scenario& s,
                   std::ostream& err) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        err << "error: cannot create '" << dir.string() << "': " << ec.message() << '\n';
        return false;
    }
    {
        std::ofstream csv(dir / "trace.csv", std::ios::binary | std::ios::trunc);
        if (csv) write_trace_csv(tr, csv);
        if (!csv) {
            err << "error: cannot write '" << (dir / "trace.csv").string() << "'\n";
            return false;
        }
    }
    if (!write_file(dir / "metrics.txt", render_metrics(m, s, s.eps_band), err)) return false;
    for (const auto& [name, svg] : trace_charts(tr))
        if (!write_file(dir / name, svg, err)) return false;
    return true;
}

std::vector<fs::path> output_dirs(const std::vector<std::string>& paths, const fs::path& root) {
    if (paths.size() == 1) return {root};
    std::vector<fs::path> dirs;
    std::map<std::string, int> seen;
    for (const auto& p : paths) {
        std::string stem = fs::path(p).stem().string();
        const int count = seen[stem]++;
        if (count > 0) stem += "_" + std::to_string(count);
        dirs.push_back(root / stem);
    }
    return dirs;
}

} // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    std::vector<Scenario> scenarios;
    for (const auto& path : opts.scenarios) {
        int code = exit_code::kOk;
        auto s = load(path, [](std::string_view t) { return parse_scenario(t); }, err, code);
        if (!s) return code;
        if (opts.mode) s->mode = *opts.mode;
        if (opts.eps_band) s->eps_band = *opts.eps_band;
        scenarios.push_back(std::move(*s));
    }

    const auto outcomes = opts.jobs == 1 ? run_batch_serial(scenarios) : run_batch(scenarios, opts.jobs);
    const auto dirs = output_dirs(opts.scenarios, opts.out_dir);

    int status = exit_code::kOk;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.ok()) {
            err << opts.scenarios[i] << ": simulation aborted: " << o.error << '\n';
            status = std::max(status, exit_code::kNumerical);
            continue;
        }
        if (!write_outputs(dirs[i], *o.trace, *o.metrics, scenarios[i], err)) return exit_code::kIo;
        out << opts.scenarios[i] << " -> " << dirs[i].string() << " (" << o.trace->rows.size() << " rows)\n";
        out << render_metrics(*o.metrics, scenarios[i], scenarios[i].eps_band);
    }
    return status;
}

int cmd_verify(const std::string& scenario_path, bool csv, std::ostream& out, std::ostream& err) {
    int code = exit_code::kOk;
    const auto s = load(scenario_path, [](std::string_view t) { return parse_scenario(t); }, err, code);
    if (!s) return code;

    const Mat& p1 = s->P_nominal ? *s->P_nominal : s->adaptation.P;
    const ConditionReport nominal = check_condition(s->core.A, p1, Certificate::Nominal);
    const ConditionReport error_dyn = check_condition(s->ref.A_d, p1, Certificate::Nominal);
    const ConditionReport reconf = check_condition(s->core.A, s->adaptation.P, Certificate::Reconfigured);

    if (csv) {
        out << "# nominal loop, A with P1\n" << condition_report_csv(nominal);
        out << "# error dynamics, A_d with P1 (informational)\n" << condition_report_csv(error_dyn);
        out << "# reconfigured loop, A with adaptation P\n" << condition_report_csv(reconf);
    } else {
        out << render_condition_report(nominal, "Nominal loop: A^T P1 + P1 A < 0") << '\n';
        out << render_condition_report(error_dyn, "Error dynamics (informational): A_d^T P1 + P1 A_d < 0") << '\n';
        out << render_condition_report(reconf, "Reconfigured loop: A^T P + P A < 0");
    }
    const bool certified = nominal.verdict == Verdict::Certified && reconf.verdict == Verdict::Certified;
    return certified ? exit_code::kOk : exit_code::kNegative;
}

int cmd_gains(const std::string& scenario_path, std::ostream& out, std::ostream& err) {
    int code = exit_code::kOk;
    const auto s = load(scenario_path, [](std::string_view t) { return parse_scenario_unchecked(t); }, err, code);
    if (!s) return code;
    NominalGains g;
    try {
        g = matching_gains(s->core.A, s->core.b, s->ref.A_d, s->ref.B_d);
    } catch (const Error& e) {
        err << scenario_path << ": " << e.what() << '\n';
        return exit_code::kParse;
    }
    out << render_gains(g);
    const bool matched = g.residual_A <= kMatchingTol && g.residual_B <= kMatchingTol;
    if (!matched) out << "matching condition violated\n";
    return matched ? exit_code::kOk : exit_code::kNegative;
}

int cmd_emit_default(const std::string& out_path, std::ostream& out, std::ostream& err) {
    if (const fs::path parent = fs::path(out_path).parent_path(); !parent.empty()) {
        std::error_code ec;
        fs::create_directories(parent, ec);
    }
    if (!write_file(out_path, emit_scenario(paper_scenario()), err)) return exit_code::kIo;
    out << "wrote " << out_path << '\n';
    return exit_code::kOk;
}

} // namespace avfc
