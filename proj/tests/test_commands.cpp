#include "avfc/commands.hpp"
#include "avfc/scenario_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace avfc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("avfc_cmd_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string edited(const std::string& from, const std::string& to, double t_end = 40.0) {
    Scenario s = paper_scenario();
    s.t_end = t_end;
    std::string text = emit_scenario(s);
    if (!from.empty()) text.replace(text.find(from), from.size(), to);
    return text;
}

} // namespace

TEST_CASE("emit-default then gains") {
    TempDir dir;
    std::ostringstream out, err;
    const auto scn = dir.path / "paper.scn";
    CHECK(cmd_emit_default(scn.string(), out, err) == exit_code::kOk);
    CHECK(parse_scenario(slurp(scn)) == paper_scenario());

    std::ostringstream gout;
    CHECK(cmd_gains(scn.string(), gout, err) == exit_code::kOk);
    CHECK(gout.str().find("k_x        [0, 0, -1]") != std::string::npos);
    CHECK(gout.str().find("k_r        1\n") != std::string::npos);
    CHECK(gout.str().find("residual_A 0\n") != std::string::npos);
}

TEST_CASE("gains on identity and violated matching") {
    TempDir dir;
    std::ostringstream out, err;
    const auto same = dir.path / "same.scn";
    write(same, edited("A_d = 0, 1, 0; 0, 0, 1; -1, -2, -4", "A_d = 0, 1, 0; 0, 0, 1; -1, -2, -3"));
    CHECK(cmd_gains(same.string(), out, err) == exit_code::kOk);
    CHECK(out.str().find("k_x        [0, 0, 0]") != std::string::npos);

    const auto bad = dir.path / "bad.scn";
    write(bad, edited("A_d = 0, 1, 0;", "A_d = -1, 1, 0;"));
    std::ostringstream bout;
    CHECK(cmd_gains(bad.string(), bout, err) == exit_code::kNegative);
    CHECK(bout.str().find("residual_A 1") != std::string::npos);
}

TEST_CASE("verify exit codes") {
    TempDir dir;
    std::ostringstream out, err;
    const auto paper = dir.path / "paper.scn";
    write(paper, emit_scenario(paper_scenario()));
    // The shipped nominal weight fails the strict check on the open-loop matrix.
    CHECK(cmd_verify(paper.string(), false, out, err) == exit_code::kNegative);
    CHECK(out.str().find("not_certified") != std::string::npos);

    const auto autop = dir.path / "auto.scn";
    std::string text = edited("P = 2.8, 2.6, 0.5; 2.6, 7.1, 1.8; 0.5, 1.8, 1.1", "P = auto");
    text.erase(text.find("P1 = "), text.find('\n', text.find("P1 = ")) - text.find("P1 = ") + 1);
    write(autop, text);
    std::ostringstream aout;
    CHECK(cmd_verify(autop.string(), true, aout, err) == exit_code::kOk);
    CHECK(aout.str().find("verdict,certified") != std::string::npos);

    const auto asym = dir.path / "asym.scn";
    write(asym, edited("P = 2.8, 2.6,", "P = 2.8, 2.9,"));
    std::ostringstream serr;
    CHECK(cmd_verify(asym.string(), false, out, serr) == exit_code::kParse);
    CHECK(serr.str().find("line ") != std::string::npos);
}

TEST_CASE("run writes the artifact set") {
    TempDir dir;
    std::ostringstream out, err;
    const auto scn = dir.path / "paper.scn";
    write(scn, edited("", "", 2.0));
    RunOptions opts;
    opts.scenarios = {scn.string()};
    opts.out_dir = (dir.path / "out").string();
    CHECK(cmd_run(opts, out, err) == exit_code::kOk);
    for (const char* f : {"trace.csv", "metrics.txt", "output.svg", "states.svg", "xtilde.svg", "adaptation.svg"})
        CHECK(fs::exists(dir.path / "out" / f));
    const std::string csv = slurp(dir.path / "out" / "trace.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2001 + 1);
}

TEST_CASE("run mode override and batch layout") {
    TempDir dir;
    std::ostringstream out, err;
    const auto a = dir.path / "a.scn";
    const auto b = dir.path / "b.scn";
    write(a, edited("", "", 12.0));
    write(b, edited("", "", 12.0));
    RunOptions opts;
    opts.scenarios = {a.string(), b.string()};
    opts.out_dir = (dir.path / "out").string();
    opts.mode = RunMode::NominalOnly;
    opts.jobs = 2;
    CHECK(cmd_run(opts, out, err) == exit_code::kOk);
    const std::string metrics = slurp(dir.path / "out" / "a" / "metrics.txt");
    CHECK(metrics.find("mode               nominal_only") != std::string::npos);
    CHECK(fs::exists(dir.path / "out" / "b" / "trace.csv"));
}

TEST_CASE("run error codes") {
    TempDir dir;
    std::ostringstream out, err;
    RunOptions missing;
    missing.scenarios = {(dir.path / "nope.scn").string()};
    missing.out_dir = dir.path.string();
    CHECK(cmd_run(missing, out, err) == exit_code::kIo);

    const auto broken = dir.path / "broken.scn";
    write(broken, edited("gamma1 = 20", "gamma1 = twenty"));
    RunOptions parse;
    parse.scenarios = {broken.string()};
    parse.out_dir = dir.path.string();
    std::ostringstream perr;
    CHECK(cmd_run(parse, out, perr) == exit_code::kParse);
    CHECK(perr.str().find("line ") != std::string::npos);

    const auto singular = dir.path / "singular.scn";
    write(singular, edited("g = 0.5*sin(t)+4", "g = 1-t", 2.0));
    RunOptions num;
    num.scenarios = {singular.string()};
    num.out_dir = (dir.path / "num").string();
    std::ostringstream nerr;
    CHECK(cmd_run(num, out, nerr) == exit_code::kNumerical);
    CHECK(nerr.str().find("t = ") != std::string::npos);
}

TEST_CASE("trace files are byte-identical across runs") {
    TempDir dir;
    std::ostringstream out, err;
    const auto scn = dir.path / "paper.scn";
    write(scn, edited("", "", 5.0));
    RunOptions opts;
    opts.scenarios = {scn.string()};
    opts.out_dir = (dir.path / "one").string();
    REQUIRE(cmd_run(opts, out, err) == exit_code::kOk);
    opts.out_dir = (dir.path / "two").string();
    REQUIRE(cmd_run(opts, out, err) == exit_code::kOk);
    CHECK(slurp(dir.path / "one" / "trace.csv") == slurp(dir.path / "two" / "trace.csv"));
}
