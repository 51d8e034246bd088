#include "avfc/report.hpp"
#include "avfc/scenario_io.hpp"

#include <doctest.h>

#include <sstream>

using namespace avfc;

namespace {

// Minimal well-formedness: tags balance and nothing points outside the file.
bool balanced_xml(const std::string& svg) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while ((pos = svg.find('<', pos)) != std::string::npos) {
        const std::size_t end = svg.find('>', pos);
        if (end == std::string::npos) return false;
        const std::string tag = svg.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
        if (tag.back() == '/') continue;
        const std::string name = tag.substr(tag[0] == '/' ? 1 : 0, tag.find_first_of(" \n\t") - (tag[0] == '/' ? 1 : 0));
        if (tag[0] == '/') {
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else {
            stack.push_back(name);
        }
    }
    return stack.empty();
}

} // namespace

TEST_CASE("csv header") {
    CHECK(trace_csv_header(3, 1) ==
          "t,xd1,xd2,xd3,xhat1,xhat2,xhat3,xf1,xf2,xf3,u,uf,M1,M2,M3,N,dhat,e_norm,xtilde_norm,yd,yhat,yf");
    CHECK(trace_csv_header(1, 2) == "t,xd1,xhat1,xf1,u,uf,M1,N,dhat,e_norm,xtilde_norm,yd1,yd2,yhat1,yhat2,yf1,yf2");
}

TEST_CASE("csv rows are lossless and evenly spaced") {
    Scenario s = paper_scenario();
    s.t_end = 1.0;
    const SimTrace tr = run(s);
    std::ostringstream out;
    write_trace_csv(tr, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == trace_csv_header(3, 1));
    std::size_t k = 0;
    while (std::getline(in, line)) {
        const double t = std::stod(line.substr(0, line.find(',')));
        CHECK(t == tr.rows[k].t);
        const std::size_t columns = 1 + static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
        CHECK(columns == 22);
        // Last column is y_f, printed with 17 significant digits.
        CHECK(std::stod(line.substr(line.rfind(',') + 1)) == tr.rows[k].y_f[0]);
        ++k;
    }
    CHECK(k == tr.rows.size());
}

TEST_CASE("svg charts are self-contained") {
    Scenario s = paper_scenario();
    s.t_end = 2.0;
    const auto charts = trace_charts(run(s));
    REQUIRE(charts.size() == 4);
    CHECK(charts[0].first == "output.svg");
    CHECK(charts[1].first == "states.svg");
    CHECK(charts[2].first == "xtilde.svg");
    CHECK(charts[3].first == "adaptation.svg");
    for (const auto& [name, svg] : charts) {
        CAPTURE(name);
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("</svg>") != std::string::npos);
        CHECK(balanced_xml(svg));
        CHECK(svg.find("href") == std::string::npos);
        CHECK(svg.find("url(") == std::string::npos);
        CHECK(svg.find("<polyline") != std::string::npos);
    }
}

TEST_CASE("svg escapes text and survives degenerate data") {
    const std::string svg = svg_line_chart("a < b & c", "t", "y", {{"flat", {0, 1, 2}, {1, 1, 1}}});
    CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
    CHECK(balanced_xml(svg));
    CHECK(balanced_xml(svg_line_chart("empty", "t", "y", {})));
}

TEST_CASE("reports") {
    const Mat a{{0, 1, 0}, {0, 0, 1}, {-1, -2, -3}};
    const Mat p{{2.8, 2.6, 0.5}, {2.6, 7.1, 1.8}, {0.5, 1.8, 1.1}};
    const ConditionReport r = check_condition(a, p, Certificate::Reconfigured);
    const std::string text = render_condition_report(r, "title");
    CHECK(text.find("verdict certified") != std::string::npos);
    CHECK(text.find("-0.0") == std::string::npos);
    const std::string csv = condition_report_csv(r);
    CHECK(csv.find("verdict,certified") != std::string::npos);

    NominalGains g;
    g.k_x = Mat{{0, 0, -1}};
    g.k_r = 1.0;
    CHECK(render_gains(g).find("k_x        [0, 0, -1]") != std::string::npos);
}
