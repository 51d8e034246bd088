#include "avfc/report.hpp"

#include "avfc/scenario_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace avfc {

namespace {

std::string g17(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

std::string g6(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6g", v);
    return buf.data();
}

void indexed(std::ostringstream& out, std::string_view prefix, std::size_t count) {
    for (std::size_t i = 1; i <= count; ++i) out << ',' << prefix << i;
}

void outputs(std::ostringstream& out, std::string_view prefix, std::size_t l) {
    if (l == 1)
        out << ',' << prefix;
    else
        indexed(out, prefix, l);
}

std::string join(std::span<const double> v, std::string (*fmt)(double), std::string_view sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) s += sep;
        s += fmt(v[i]);
    }
    return s;
}

} // namespace

std::string trace_csv_header(std::size_t n, std::size_t l) {
    std::ostringstream out;
    out << 't';
    indexed(out, "xd", n);
    indexed(out, "xhat", n);
    indexed(out, "xf", n);
    out << ",u,uf";
    indexed(out, "M", n);
    out << ",N,dhat,e_norm,xtilde_norm";
    outputs(out, "yd", l);
    outputs(out, "yhat", l);
    outputs(out, "yf", l);
    return out.str();
}

void write_trace_csv(const SimTrace& tr, std::ostream& out) {
    out << trace_csv_header(tr.n, tr.l) << '\n';
    std::string line;
    for (const auto& row : tr.rows) {
        line.clear();
        line += g17(row.t);
        auto put = [&](double v) {
            line += ',';
            line += g17(v);
        };
        for (double v : row.x_d) put(v);
        for (double v : row.x_hat) put(v);
        for (double v : row.x_f) put(v);
        put(row.u);
        put(row.u_f);
        for (double v : row.adaptive.M) put(v);
        put(row.adaptive.N);
        put(row.adaptive.d_hat);
        put(norm2(row.e));
        put(norm2(row.x_tilde));
        for (double v : row.y_d) put(v);
        for (double v : row.y_hat) put(v);
        for (double v : row.y_f) put(v);
        line += '\n';
        out << line;
    }
}

std::string render_metrics(const Metrics& m, const Scenario& s, double eps_band) {
    std::ostringstream out;
    out << "mode               " << to_string(s.mode) << '\n';
    out << "eps_band           " << g6(eps_band) << '\n';
    out << "sup_e_tail         " << g17(m.sup_e_tail) << '\n';
    out << "sup_xtilde_tail    " << g17(m.sup_xtilde_tail) << '\n';
    out << "r_bound            " << g17(m.r_bound) << '\n';
    out << "x_hat_bound        " << g17(m.x_hat_bound) << '\n';
    out << "uub_beta           " << g17(m.uub.beta) << '\n';
    out << "uub_mu             " << g17(m.uub.mu) << '\n';
    out << "uub_bound          " << g17(m.uub.radius) << '\n';
    out << "uub_satisfied      " << (m.uub_satisfied ? "yes" : "no") << '\n';
    for (const auto& ev : m.events) {
        out << "event t=" << g6(ev.at) << "  window_end=" << g6(ev.window_end)
            << "  peak_error=" << g6(ev.peak_error) << "  recovery_time=";
        if (ev.recovered)
            out << g6(ev.recovery_time);
        else
            out << "not-recovered";
        out << '\n';
    }
    return out.str();
}

std::string render_condition_report(const ConditionReport& r, std::string_view title) {
    std::ostringstream out;
    out << title << " [" << to_string(r.label) << "]\n";
    auto matrix = [&](std::string_view name, const Mat& m) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            std::string lead(i == 0 ? name : "");
            lead.resize(8, ' ');
            out << lead;
            for (std::size_t j = 0; j < m.cols(); ++j) {
                std::array<char, 32> buf{};
                // Round-off below the printed precision would otherwise show as -0.00000000.
                const double v = std::fabs(m(i, j)) < 5e-9 ? 0.0 : m(i, j);
                std::snprintf(buf.data(), buf.size(), "%14.8f", v);
                out << buf.data();
            }
            out << '\n';
        }
    };
    matrix("P", r.P_used);
    matrix("Q", r.Q);
    out << "eig(P)  " << join(r.eig_P, g6, "  ") << '\n';
    out << "eig(Q)  " << join(r.eig_Q, g6, "  ") << '\n';
    out << "P_pd    " << (r.P_pd ? "true" : "false") << '\n';
    out << "Q_pd    " << (r.Q_pd ? "true" : "false") << '\n';
    out << "verdict " << to_string(r.verdict) << '\n';
    return out.str();
}

std::string condition_report_csv(const ConditionReport& r) {
    std::ostringstream out;
    out << "label," << to_string(r.label) << '\n';
    out << "P," << join(r.P_used.entries(), g17, ",") << '\n';
    out << "Q," << join(r.Q.entries(), g17, ",") << '\n';
    out << "eig_P," << join(r.eig_P, g17, ",") << '\n';
    out << "eig_Q," << join(r.eig_Q, g17, ",") << '\n';
    out << "P_pd," << (r.P_pd ? 1 : 0) << '\n';
    out << "Q_pd," << (r.Q_pd ? 1 : 0) << '\n';
    out << "verdict," << to_string(r.verdict) << '\n';
    return out.str();
}

std::string render_gains(const NominalGains& g) {
    std::ostringstream out;
    out << "k_x        [" << join(g.k_x.entries(), format_number, ", ") << "]\n";
    out << "k_r        " << format_number(g.k_r) << '\n';
    out << "residual_A " << g17(g.residual_A) << '\n';
    out << "residual_B " << g17(g.residual_B) << '\n';
    return out.str();
}

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Tick step 1, 2 or 5 times a power of ten giving roughly `target` intervals.
double nice_step(double range, int target) {
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

std::string tick_label(double v, double step) {
    if (std::abs(v) < step * 1e-9) v = 0.0;
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%g", v);
    return buf.data();
}

} // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<ChartSeries>& series) {
    constexpr double W = 800, H = 450, L = 80, R = 160, T = 40, B = 60;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
        for (double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax - xmin <= 0) xmax = xmin + 1;
    if (ymax - ymin <= 1e-12 * std::max(1.0, std::abs(ymax))) {
        const double pad = std::max(1e-3, std::abs(ymax) * 0.1);
        ymin -= pad;
        ymax += pad;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double pw = W - L - R, ph = H - T - B;
    auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return T + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
        << W << ' ' << H << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << xml_escape(title) << "</text>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"11\" stroke-width=\"1\">\n";
    const double xs = nice_step(xmax - xmin, 8);
    for (double v = std::ceil(xmin / xs) * xs; v <= xmax + 1e-9 * xs; v += xs) {
        out << "<line x1=\"" << sx(v) << "\" y1=\"" << T << "\" x2=\"" << sx(v) << "\" y2=\"" << T + ph
            << "\" stroke=\"#e0e0e0\"/>\n";
        out << "<text x=\"" << sx(v) << "\" y=\"" << T + ph + 16 << "\" text-anchor=\"middle\">"
            << tick_label(v, xs) << "</text>\n";
    }
    const double ys = nice_step(ymax - ymin, 6);
    for (double v = std::ceil(ymin / ys) * ys; v <= ymax + 1e-9 * ys; v += ys) {
        out << "<line x1=\"" << L << "\" y1=\"" << sy(v) << "\" x2=\"" << L + pw << "\" y2=\"" << sy(v)
            << "\" stroke=\"#e0e0e0\"/>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << sy(v) + 4 << "\" text-anchor=\"end\">" << tick_label(v, ys)
            << "</text>\n";
    }
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">" << xml_escape(x_label)
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << T + ph / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
    out << "</g>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % kPalette.size()];
        const std::size_t count = std::min(s.x.size(), s.y.size());
        const std::size_t stride = std::max<std::size_t>(1, count / 2000);
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < count; i += stride) {
            std::array<char, 48> buf{};
            std::snprintf(buf.data(), buf.size(), "%.2f,%.2f ", sx(s.x[i]), sy(s.y[i]));
            out << buf.data();
        }
        if (count > 0 && (count - 1) % stride != 0) {
            std::array<char, 48> buf{};
            std::snprintf(buf.data(), buf.size(), "%.2f,%.2f", sx(s.x[count - 1]), sy(s.y[count - 1]));
            out << buf.data();
        }
        out << "\"/>\n";
        const double ly = T + 14 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 36 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << L + pw + 42 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.name) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::vector<std::pair<std::string, std::string>> trace_charts(const SimTrace& tr) {
    std::vector<double> t;
    t.reserve(tr.rows.size());
    for (const auto& row : tr.rows) t.push_back(row.t);
    auto column = [&](auto&& pick) {
        std::vector<double> v;
        v.reserve(tr.rows.size());
        for (const auto& row : tr.rows) v.push_back(pick(row));
        return v;
    };
    auto series = [&](std::string name, auto&& pick) { return ChartSeries{std::move(name), t, column(pick)}; };

    std::vector<ChartSeries> outs, states, diff, adapt;
    for (std::size_t j = 0; j < tr.l; ++j) {
        const std::string sfx = tr.l == 1 ? "" : std::to_string(j + 1);
        outs.push_back(series("y_d" + sfx, [j](const TraceRow& r) { return r.y_d[j]; }));
        outs.push_back(series("y_hat" + sfx, [j](const TraceRow& r) { return r.y_hat[j]; }));
        outs.push_back(series("y_f" + sfx, [j](const TraceRow& r) { return r.y_f[j]; }));
    }
    for (std::size_t i = 0; i < tr.n; ++i) {
        const std::string k = std::to_string(i + 1);
        states.push_back(series("x_hat" + k, [i](const TraceRow& r) { return r.x_hat[i]; }));
        states.push_back(series("x_f" + k, [i](const TraceRow& r) { return r.x_f[i]; }));
    }
    diff.push_back(series("|x_tilde|", [](const TraceRow& r) { return norm2(r.x_tilde); }));
    diff.push_back(series("|e|", [](const TraceRow& r) { return norm2(r.e); }));
    for (std::size_t i = 0; i < tr.n; ++i)
        adapt.push_back(series("M" + std::to_string(i + 1), [i](const TraceRow& r) { return r.adaptive.M[i]; }));
    adapt.push_back(series("N", [](const TraceRow& r) { return r.adaptive.N; }));
    adapt.push_back(series("d_hat", [](const TraceRow& r) { return r.adaptive.d_hat; }));

    const std::string mode(to_string(tr.mode));
    return {
        {"output.svg", svg_line_chart("Outputs (" + mode + ")", "t [s]", "y", outs)},
        {"states.svg", svg_line_chart("Nominal and faulty states", "t [s]", "x", states)},
        {"xtilde.svg", svg_line_chart("Difference and tracking error norms", "t [s]", "norm", diff)},
        {"adaptation.svg", svg_line_chart("Virtual actuator parameters", "t [s]", "value", adapt)},
    };
}

} // namespace avfc
