#include "avfc/scenario_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace avfc {

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

struct Entry {
    std::string value;
    std::size_t line = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

double parse_real(std::string_view text, std::size_t line) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ScenarioError(line, "expected a number, got '" + std::string(text) + "'");
    return v;
}

Mat parse_matrix(std::string_view text, std::size_t line) {
    std::vector<double> entries;
    std::size_t cols = 0;
    const auto rows = split(text, ';');
    for (const auto row : rows) {
        const auto cells = split(row, ',');
        if (cols == 0) cols = cells.size();
        if (cells.size() != cols) throw ScenarioError(line, "matrix rows have different lengths");
        for (const auto c : cells) entries.push_back(parse_real(c, line));
    }
    return Mat(rows.size(), cols, std::move(entries));
}

Vec parse_vector(std::string_view text, std::size_t line) {
    const Mat m = parse_matrix(text, line);
    if (m.rows() != 1 && m.cols() != 1) throw ScenarioError(line, "expected a vector");
    return Vec(m.entries().begin(), m.entries().end());
}

class SectionReader {
public:
    /// Rejects keys outside `allowed` up front so a misspelt key is reported
    /// rather than the required key it displaced.
    SectionReader(std::string name, Section entries, std::initializer_list<std::string_view> allowed)
        : name_(std::move(name)), entries_(std::move(entries)) {
        const Entry* first = nullptr;
        std::string_view first_key;
        for (const auto& [key, entry] : entries_) {
            if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
            if (!first || entry.line < first->line) {
                first = &entry;
                first_key = key;
            }
        }
        if (first)
            throw ScenarioError(first->line, "unknown key '" + std::string(first_key) + "' in [" + name_ + "]");
    }

    const Entry* find(std::string_view key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        used_.insert(it->first);
        return &it->second;
    }

    const Entry& require(std::string_view key, std::size_t section_line) {
        if (const Entry* e = find(key)) return *e;
        throw ScenarioError(section_line, "[" + name_ + "] is missing '" + std::string(key) + "'");
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : entries_)
            if (!used_.count(key)) throw ScenarioError(entry.line, "unknown key '" + key + "' in [" + name_ + "]");
    }

private:
    std::string name_;
    Section entries_;
    std::set<std::string, std::less<>> used_;
};

expr::SourceExpr parse_expr(const Entry& e, std::size_t n) {
    try {
        return expr::SourceExpr::from(e.value, n);
    } catch (const expr::ParseError& err) {
        throw ScenarioError(e.line, std::string("expression '") + e.value + "': " + err.what());
    }
}

struct FaultLine {
    std::string text;
    std::size_t line;
};

FaultEvent parse_fault(const FaultLine& fl) {
    std::string_view rest = fl.text;
    std::map<std::string, std::string, std::less<>> kv;
    while (!(rest = trim(rest)).empty()) {
        const auto eq = rest.find('=');
        if (eq == std::string_view::npos) throw ScenarioError(fl.line, "expected 'key = value' in fault line");
        const std::string key(trim(rest.substr(0, eq)));
        rest = trim(rest.substr(eq + 1));
        std::string value;
        if (key == "signal") {
            value = std::string(rest);
            rest = {};
        } else {
            const auto sp = rest.find_first_of(" \t");
            value = std::string(rest.substr(0, sp));
            rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp);
        }
        if (key != "at" && key != "kind" && key != "theta" && key != "signal")
            throw ScenarioError(fl.line, "unknown fault key '" + key + "'");
        if (value.empty()) throw ScenarioError(fl.line, "fault key '" + key + "' has no value");
        if (!kv.emplace(key, value).second) throw ScenarioError(fl.line, "duplicate fault key '" + key + "'");
    }
    if (!kv.count("at") || !kv.count("kind")) throw ScenarioError(fl.line, "fault line needs 'at' and 'kind'");
    const double at = parse_real(kv["at"], fl.line);
    const std::string& kind = kv["kind"];
    try {
        if (kind == "loss") {
            if (!kv.count("theta") || kv.count("signal")) throw ScenarioError(fl.line, "loss fault takes 'theta' only");
            return FaultEvent::loss(at, parse_real(kv["theta"], fl.line));
        }
        if (kind == "additive" || kind == "disturbance") {
            if (!kv.count("signal") || kv.count("theta"))
                throw ScenarioError(fl.line, kind + " fault takes 'signal' only");
            return kind == "additive" ? FaultEvent::additive(at, kv["signal"])
                                      : FaultEvent::disturbance(at, kv["signal"]);
        }
    } catch (const expr::ParseError& err) {
        throw ScenarioError(fl.line, std::string("fault signal: ") + err.what());
    }
    throw ScenarioError(fl.line, "unknown fault kind '" + kind + "'");
}

std::string format_matrix(const Mat& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i > 0) out += "; ";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ", ";
            out += format_number(m(i, j));
        }
    }
    return out;
}

std::string format_vector(std::span<const double> v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_number(v[i]);
    }
    return out;
}

std::string_view mu_rate_name(MuRate r) {
    switch (r) {
    case MuRate::Gamma1: return "gamma1";
    case MuRate::Gamma3: return "gamma3";
    case MuRate::Gamma2: break;
    }
    return "gamma2";
}

} // namespace

Scenario parse_scenario_unchecked(std::string_view text) {
    static const std::set<std::string, std::less<>> kSections{"system", "nonlinearity", "reference",
                                                              "disturbance_channel", "adaptation", "faults", "run"};
    std::map<std::string, Section, std::less<>> sections;
    std::map<std::string, std::size_t, std::less<>> section_lines;
    std::vector<FaultLine> fault_lines;
    std::string current;

    std::size_t line_no = 0;
    for (const auto raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ScenarioError(line_no, "malformed section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!kSections.count(current)) throw ScenarioError(line_no, "unknown section [" + current + "]");
            if (section_lines.count(current)) throw ScenarioError(line_no, "duplicate section [" + current + "]");
            section_lines[current] = line_no;
            sections[current];
            continue;
        }
        if (current.empty()) throw ScenarioError(line_no, "content before the first section header");
        if (current == "faults") {
            fault_lines.push_back({std::string(line), line_no});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ScenarioError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) throw ScenarioError(line_no, "empty key or value");
        if (!sections[current].emplace(key, Entry{value, line_no}).second)
            throw ScenarioError(line_no, "duplicate key '" + key + "'");
    }

    for (const char* required : {"system", "nonlinearity", "reference", "disturbance_channel", "adaptation", "run"})
        if (!sections.count(required)) throw ScenarioError(0, std::string("missing section [") + required + "]");

    auto reader = [&](const std::string& name, std::initializer_list<std::string_view> allowed) {
        return SectionReader(name, sections[name], allowed);
    };
    Scenario s;

    // [system]
    SectionReader sys = reader("system", {"n", "A", "b", "C"});
    const std::size_t sys_line = section_lines["system"];
    const Entry& n_entry = sys.require("n", sys_line);
    const double n_real = parse_real(n_entry.value, n_entry.line);
    if (n_real < 1 || n_real > 10 || n_real != std::floor(n_real))
        throw ScenarioError(n_entry.line, "n must be an integer in 1..10");
    const auto n = static_cast<std::size_t>(n_real);
    auto matrix_key = [&](SectionReader& r, std::size_t sec_line, std::string_view key, std::size_t rows,
                          std::size_t cols) {
        const Entry& e = r.require(key, sec_line);
        Mat m = parse_matrix(e.value, e.line);
        if (rows > 0 && m.rows() != rows) throw ScenarioError(e.line, std::string(key) + " has the wrong row count");
        if (m.cols() != cols) throw ScenarioError(e.line, std::string(key) + " has the wrong column count");
        return m;
    };
    s.core.A = matrix_key(sys, sys_line, "A", n, n);
    s.core.b = matrix_key(sys, sys_line, "b", n, 1);
    s.core.C = matrix_key(sys, sys_line, "C", 0, n);
    sys.reject_unknown();

    // [nonlinearity]
    SectionReader nl = reader("nonlinearity", {"f", "g", "g_min"});
    const std::size_t nl_line = section_lines["nonlinearity"];
    s.nl.f = parse_expr(nl.require("f", nl_line), n);
    s.nl.g = parse_expr(nl.require("g", nl_line), n);
    if (const Entry* e = nl.find("g_min")) s.nl.g_min = parse_real(e->value, e->line);
    nl.reject_unknown();

    // [reference]
    SectionReader ref = reader("reference", {"A_d", "B_d", "r"});
    const std::size_t ref_line = section_lines["reference"];
    s.ref.A_d = matrix_key(ref, ref_line, "A_d", n, n);
    s.ref.B_d = matrix_key(ref, ref_line, "B_d", n, 1);
    s.r_signal = parse_expr(ref.require("r", ref_line), 0);
    ref.reject_unknown();

    // [disturbance_channel]
    SectionReader dc = reader("disturbance_channel", {"mode", "E", "scale"});
    const std::size_t dc_line = section_lines["disturbance_channel"];
    const Entry& mode = dc.require("mode", dc_line);
    if (mode.value == "constant") {
        s.disturbance_channel = DisturbanceChannel::constant(matrix_key(dc, dc_line, "E", n, 1));
    } else if (mode.value == "matched") {
        const Entry& sc = dc.require("scale", dc_line);
        s.disturbance_channel = DisturbanceChannel::matched(parse_real(sc.value, sc.line));
    } else {
        throw ScenarioError(mode.line, "disturbance mode must be 'constant' or 'matched'");
    }
    dc.reject_unknown();

    // [adaptation]
    SectionReader ad = reader("adaptation", {"gamma1", "gamma2", "gamma3", "P", "P1", "theta_design", "d_tilde_max",
                                          "d_dot_max", "mu_rate"});
    const std::size_t ad_line = section_lines["adaptation"];
    auto real_key = [&](SectionReader& r, std::size_t sec_line, std::string_view key) {
        const Entry& e = r.require(key, sec_line);
        return parse_real(e.value, e.line);
    };
    s.adaptation.gamma1 = real_key(ad, ad_line, "gamma1");
    s.adaptation.gamma2 = real_key(ad, ad_line, "gamma2");
    s.adaptation.gamma3 = real_key(ad, ad_line, "gamma3");
    s.adaptation.theta_design = real_key(ad, ad_line, "theta_design");
    if (const Entry* e = ad.find("d_tilde_max")) s.adaptation.d_tilde_max = parse_real(e->value, e->line);
    if (const Entry* e = ad.find("d_dot_max")) s.adaptation.d_dot_max = parse_real(e->value, e->line);
    if (const Entry* e = ad.find("mu_rate")) {
        if (e->value == "gamma1") s.adaptation.mu_rate = MuRate::Gamma1;
        else if (e->value == "gamma2") s.adaptation.mu_rate = MuRate::Gamma2;
        else if (e->value == "gamma3") s.adaptation.mu_rate = MuRate::Gamma3;
        else throw ScenarioError(e->line, "mu_rate must be gamma1, gamma2 or gamma3");
    }
    auto symmetric_key = [&](const Entry& e) {
        Mat p = parse_matrix(e.value, e.line);
        if (p.rows() != n || p.cols() != n) throw ScenarioError(e.line, "P must be n x n");
        try {
            symmetrized(p);
        } catch (const NotSymmetric& err) {
            throw ScenarioError(e.line, err.what());
        }
        return p;
    };
    const Entry& p_entry = ad.require("P", ad_line);
    if (p_entry.value == "auto") {
        s.p_auto = true;
    } else {
        s.adaptation.P = symmetric_key(p_entry);
    }
    if (const Entry* e = ad.find("P1")) s.P_nominal = symmetric_key(*e);
    ad.reject_unknown();

    // [faults]
    std::vector<FaultEvent> events;
    for (const auto& fl : fault_lines) events.push_back(parse_fault(fl));
    try {
        s.schedule = FaultSchedule(std::move(events));
    } catch (const InvalidModel& err) {
        throw ScenarioError(section_lines["faults"], err.what());
    }

    // [run]
    SectionReader rn = reader("run", {"t_end", "h", "mode", "x0_hat", "x0_f", "x0_d", "eps_band"});
    const std::size_t run_line = section_lines["run"];
    s.t_end = real_key(rn, run_line, "t_end");
    s.h = real_key(rn, run_line, "h");
    const Entry& mode_entry = rn.require("mode", run_line);
    const auto run_mode = parse_run_mode(mode_entry.value);
    if (!run_mode) throw ScenarioError(mode_entry.line, "unknown run mode '" + mode_entry.value + "'");
    s.mode = *run_mode;
    auto state_key = [&](std::string_view key, const Vec& fallback) {
        const Entry* e = rn.find(key);
        if (!e) return fallback;
        Vec v = parse_vector(e->value, e->line);
        if (v.size() != n) throw ScenarioError(e->line, std::string(key) + " must have n entries");
        return v;
    };
    s.x0_hat = state_key("x0_hat", Vec(n, 0.0));
    s.x0_f = state_key("x0_f", s.x0_hat);
    s.x0_d = state_key("x0_d", Vec(n, 0.0));
    if (const Entry* e = rn.find("eps_band")) s.eps_band = parse_real(e->value, e->line);
    rn.reject_unknown();

    if (s.p_auto) {
        try {
            s.adaptation.P = solve_lyapunov(s.core.A, Mat::identity(n));
        } catch (const SingularSystem&) {
            // Left empty; validation reports the non-Hurwitz A.
        }
    }
    return s;
}

Scenario parse_scenario(std::string_view text) {
    Scenario s = parse_scenario_unchecked(text);
    try {
        s.validate();
    } catch (const Error& err) {
        throw ScenarioError(0, std::string("invalid scenario: ") + err.what());
    }
    return s;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_text_file(path)); }

std::string emit_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "# Adaptive virtual-actuator fault-tolerant control scenario\n";
    out << "\n[system]\n";
    out << "n = " << s.n() << "\n";
    out << "A = " << format_matrix(s.core.A) << "\n";
    out << "b = " << format_matrix(s.core.b) << "\n";
    out << "C = " << format_matrix(s.core.C) << "\n";

    out << "\n[nonlinearity]\n";
    out << "f = " << s.nl.f.source << "\n";
    out << "g = " << s.nl.g.source << "\n";
    out << "g_min = " << format_number(s.nl.g_min) << "\n";

    out << "\n[reference]\n";
    out << "A_d = " << format_matrix(s.ref.A_d) << "\n";
    out << "B_d = " << format_matrix(s.ref.B_d) << "\n";
    out << "r = " << s.r_signal.source << "\n";

    out << "\n[disturbance_channel]\n";
    if (s.disturbance_channel.mode == DisturbanceChannel::Mode::Matched) {
        out << "mode = matched\n";
        out << "scale = " << format_number(s.disturbance_channel.scale) << "\n";
    } else {
        out << "mode = constant\n";
        out << "E = " << format_matrix(s.disturbance_channel.E) << "\n";
    }

    const AdaptationConfig& a = s.adaptation;
    out << "\n[adaptation]\n";
    out << "gamma1 = " << format_number(a.gamma1) << "\n";
    out << "gamma2 = " << format_number(a.gamma2) << "\n";
    out << "gamma3 = " << format_number(a.gamma3) << "\n";
    out << "P = " << (s.p_auto ? std::string("auto") : format_matrix(a.P)) << "\n";
    if (s.P_nominal) out << "P1 = " << format_matrix(*s.P_nominal) << "\n";
    out << "theta_design = " << format_number(a.theta_design) << "\n";
    out << "d_tilde_max = " << format_number(a.d_tilde_max) << "\n";
    out << "d_dot_max = " << format_number(a.d_dot_max) << "\n";
    out << "mu_rate = " << mu_rate_name(a.mu_rate) << "\n";

    out << "\n[faults]\n";
    for (const auto& e : s.schedule.events()) {
        out << "at = " << format_number(e.at) << " kind = ";
        switch (e.kind) {
        case FaultEvent::Kind::LossOfEffectiveness: out << "loss theta = " << format_number(e.theta); break;
        case FaultEvent::Kind::AdditiveActuator: out << "additive signal = " << e.signal.source; break;
        case FaultEvent::Kind::ExternalDisturbance: out << "disturbance signal = " << e.signal.source; break;
        }
        out << "\n";
    }

    out << "\n[run]\n";
    out << "t_end = " << format_number(s.t_end) << "\n";
    out << "h = " << format_number(s.h) << "\n";
    out << "mode = " << to_string(s.mode) << "\n";
    out << "x0_hat = " << format_vector(s.x0_hat) << "\n";
    out << "x0_f = " << format_vector(s.x0_f) << "\n";
    out << "x0_d = " << format_vector(s.x0_d) << "\n";
    out << "eps_band = " << format_number(s.eps_band) << "\n";
    return out.str();
}

Scenario paper_scenario() {
    Scenario s;
    s.core.A = Mat{{0, 1, 0}, {0, 0, 1}, {-1, -2, -3}};
    s.core.b = Mat{{0}, {0}, {1}};
    s.core.C = Mat{{1, 1, 1}};
    s.nl.f = expr::SourceExpr::from("0.05*sin(x3)", 3);
    s.nl.g = expr::SourceExpr::from("0.5*sin(t)+4", 3);
    s.nl.g_min = 1e-6;
    s.ref.A_d = Mat{{0, 1, 0}, {0, 0, 1}, {-1, -2, -4}};
    s.ref.B_d = Mat{{0}, {0}, {1}};
    s.r_signal = expr::SourceExpr::from("step(t)", 0);
    s.disturbance_channel = DisturbanceChannel::matched(0.5);
    s.adaptation.gamma1 = 20;
    s.adaptation.gamma2 = 200;
    s.adaptation.gamma3 = 1000;
    s.adaptation.P = Mat{{2.8, 2.6, 0.5}, {2.6, 7.1, 1.8}, {0.5, 1.8, 1.1}};
    s.P_nominal = Mat{{2.5, 2.5, 0.5}, {2.5, 6.5, 1.5}, {0.5, 1.5, 0.5}};
    s.adaptation.theta_design = 0.5;
    s.adaptation.d_tilde_max = 1.0;
    s.adaptation.d_dot_max = 1.0;
    s.adaptation.mu_rate = MuRate::Gamma2;
    s.schedule = FaultSchedule({
        FaultEvent::loss(15, 0.65),
        FaultEvent::disturbance(20, "1"),
        FaultEvent::additive(25, "0.5*sin(2*t)"),
    });
    s.x0_hat = s.x0_f = s.x0_d = Vec(3, 0.0);
    s.t_end = 40;
    s.h = 1e-3;
    s.mode = RunMode::FaultyWithVa;
    s.eps_band = 0.05;
    return s;
}

} // namespace avfc
