#include "occsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace occ {

namespace {

constexpr double W = 720, H = 420;
constexpr double ML = 60, MR = 60, MT = 40, MB = 50;

std::string f2(double v) { return format_fixed(v, 2); }

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '&') o += "&amp;";
        else if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '"') o += "&quot;";
        else o += c;
    }
    return o;
}

// Round the axis top up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
    if (v <= 0) return 1.0;
    double p = std::pow(10.0, std::floor(std::log10(v)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * p >= v) return m * p;
    return 10.0 * p;
}

std::string header(const std::string& title) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(W) + "\" height=\"" + f2(H) +
                    "\" viewBox=\"0 0 " + f2(W) + " " + f2(H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + f2(W) + "\" height=\"" + f2(H) + "\" fill=\"white\"/>\n";
    s += "<text x=\"" + f2(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) + "</text>\n";
    s += "<line x1=\"" + f2(ML) + "\" y1=\"" + f2(H - MB) + "\" x2=\"" + f2(W - MR) + "\" y2=\"" + f2(H - MB) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + f2(ML) + "\" y1=\"" + f2(MT) + "\" x2=\"" + f2(ML) + "\" y2=\"" + f2(H - MB) + "\" stroke=\"black\"/>\n";
    return s;
}

std::string y_ticks(double top, double x, const char* anchor, const char* color) {
    std::string s;
    for (int i = 0; i <= 5; ++i) {
        double v = top * i / 5.0;
        double y = (H - MB) - (H - MB - MT) * i / 5.0;
        s += "<text x=\"" + f2(x) + "\" y=\"" + f2(y + 4) + "\" text-anchor=\"" + anchor + "\" fill=\"" + color + "\">" +
             format_fixed(v, top < 10 ? 1 : 0) + "</text>\n";
    }
    return s;
}

}  // namespace

std::string trace_svg(const Trace& trace, const std::string& title) {
    const auto& rs = trace.records;
    if (rs.empty()) throw std::invalid_argument("cannot plot an empty trace");

    int t0 = rs.front().tick, t1 = rs.back().tick;
    double span = std::max(1, t1 - t0);
    double gap_top = 0;
    for (const auto& r : rs) gap_top = std::max(gap_top, r.distance);
    gap_top = nice_ceiling(gap_top);

    auto px = [&](int tick) { return ML + (W - ML - MR) * (tick - t0) / span; };
    auto py = [&](double v, double top) { return (H - MB) - (H - MB - MT) * v / top; };

    std::string s = header(title);
    s += y_ticks(100, ML - 6, "end", "#c0392b");
    s += y_ticks(gap_top, W - MR + 6, "start", "#2471a3");
    s += "<line x1=\"" + f2(W - MR) + "\" y1=\"" + f2(MT) + "\" x2=\"" + f2(W - MR) + "\" y2=\"" + f2(H - MB) +
         "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        int tick = t0 + static_cast<int>(std::lround(span * i / 5.0));
        s += "<text x=\"" + f2(px(tick)) + "\" y=\"" + f2(H - MB + 18) + "\" text-anchor=\"middle\">" +
             std::to_string(tick) + "</text>\n";
    }
    s += "<text x=\"" + f2(W / 2) + "\" y=\"" + f2(H - 10) + "\" text-anchor=\"middle\">tick</text>\n";

    std::string fear, gap;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const char* cmd = i ? " L" : "M";
        fear += cmd + f2(px(rs[i].tick)) + " " + f2(py(rs[i].fear_display, 100));
        gap += cmd + f2(px(rs[i].tick)) + " " + f2(py(rs[i].distance, gap_top));
    }
    s += "<path id=\"fear\" d=\"" + fear + "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
    s += "<path id=\"gap\" d=\"" + gap + "\" fill=\"none\" stroke=\"#2471a3\" stroke-width=\"2\"/>\n";
    if (rs.size() == 1) {
        s += "<circle cx=\"" + f2(px(rs[0].tick)) + "\" cy=\"" + f2(py(rs[0].fear_display, 100)) + "\" r=\"3\" fill=\"#c0392b\"/>\n";
        s += "<circle cx=\"" + f2(px(rs[0].tick)) + "\" cy=\"" + f2(py(rs[0].distance, gap_top)) + "\" r=\"3\" fill=\"#2471a3\"/>\n";
    }
    s += "<text x=\"" + f2(ML + 8) + "\" y=\"" + f2(MT + 12) + "\" fill=\"#c0392b\">fear display (0-100)</text>\n";
    s += "<text x=\"" + f2(W - MR - 8) + "\" y=\"" + f2(MT + 12) + "\" text-anchor=\"end\" fill=\"#2471a3\">gap (sim units)</text>\n";
    s += "</svg>\n";
    return s;
}

std::string comparison_svg(const ComparisonTable& table, const std::string& title) {
    if (table.empty()) throw std::invalid_argument("cannot plot an empty comparison table");
    double top = 0;
    for (const auto& r : table) top = std::max({top, r.agent, r.human});
    top = nice_ceiling(top);

    std::string s = header(title);
    s += y_ticks(top, ML - 6, "end", "black");
    double slot = (W - ML - MR) / static_cast<double>(table.size());
    double bar = slot * 0.35;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& r = table[i];
        double x0 = ML + slot * i + slot * 0.15;
        double ha = (H - MB - MT) * r.agent / top;
        double hh = (H - MB - MT) * r.human / top;
        s += "<g class=\"speed\" data-mph=\"" + format_fixed(r.speed_mph, 2) + "\">\n";
        s += "<rect class=\"agent\" x=\"" + f2(x0) + "\" y=\"" + f2(H - MB - ha) + "\" width=\"" + f2(bar) + "\" height=\"" +
             f2(ha) + "\" fill=\"#1e8449\"/>\n";
        s += "<rect class=\"human\" x=\"" + f2(x0 + bar) + "\" y=\"" + f2(H - MB - hh) + "\" width=\"" + f2(bar) +
             "\" height=\"" + f2(hh) + "\" fill=\"#7d3c98\"/>\n";
        s += "<text x=\"" + f2(x0 + bar) + "\" y=\"" + f2(H - MB + 16) + "\" text-anchor=\"middle\" font-size=\"10\">" +
             format_fixed(r.speed_mph, 1) + "</text>\n";
        s += "</g>\n";
    }
    s += "<text x=\"" + f2(W / 2) + "\" y=\"" + f2(H - 10) + "\" text-anchor=\"middle\">speed (mph)</text>\n";
    s += "<rect x=\"" + f2(ML + 10) + "\" y=\"" + f2(MT) + "\" width=\"10\" height=\"10\" fill=\"#1e8449\"/>\n";
    s += "<text x=\"" + f2(ML + 24) + "\" y=\"" + f2(MT + 9) + "\">agent (ft)</text>\n";
    s += "<rect x=\"" + f2(ML + 100) + "\" y=\"" + f2(MT) + "\" width=\"10\" height=\"10\" fill=\"#7d3c98\"/>\n";
    s += "<text x=\"" + f2(ML + 114) + "\" y=\"" + f2(MT + 9) + "\">human (ft)</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace occ
