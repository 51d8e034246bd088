// Command-line front end: run / verify / gains / emit-default.

#include "avfc/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Adaptive virtual-actuator fault-tolerant control simulator"};
    app.require_subcommand(1);

    avfc::RunOptions run_opts;
    std::string mode_text;
    auto* run = app.add_subcommand("run", "Simulate one or more scenario files");
    run->add_option("scenario", run_opts.scenarios, "Scenario file(s)")->required();
    run->add_option("--mode", mode_text, "nominal_only | faulty_no_va | faulty_with_va")
        ->check(CLI::IsMember({"nominal_only", "faulty_no_va", "faulty_with_va"}));
    run->add_option("-o,--out", run_opts.out_dir, "Output directory")->capture_default_str();
    run->add_option("--jobs", run_opts.jobs, "Scenarios simulated concurrently")->capture_default_str();
    run->add_option("--eps-band", run_opts.eps_band, "Recovery band for ||y_f - y_d||");

    std::string verify_path;
    bool verify_csv = false;
    auto* verify = app.add_subcommand("verify", "Check the Lyapunov certificates of a scenario");
    verify->add_option("scenario", verify_path, "Scenario file")->required();
    verify->add_flag("--csv", verify_csv, "Machine-readable output");

    std::string gains_path;
    auto* gains = app.add_subcommand("gains", "Print the model-matching gains");
    gains->add_option("scenario", gains_path, "Scenario file")->required();

    std::string emit_path;
    auto* emit = app.add_subcommand("emit-default", "Write the reference simulation scenario");
    emit->add_option("out_path", emit_path, "Destination file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : avfc::exit_code::kParse;
    }

    if (*run) {
        if (!mode_text.empty()) run_opts.mode = avfc::parse_run_mode(mode_text);
        return avfc::cmd_run(run_opts, std::cout, std::cerr);
    }
    if (*verify) return avfc::cmd_verify(verify_path, verify_csv, std::cout, std::cerr);
    if (*gains) return avfc::cmd_gains(gains_path, std::cout, std::cerr);
    return avfc::cmd_emit_default(emit_path, std::cout, std::cerr);
}
