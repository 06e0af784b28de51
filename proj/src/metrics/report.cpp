#include "ace/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ace::metrics {

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string cell_mean_std(const std::optional<double>& mean,
                          const std::optional<double>& std_dev) {
    if (!mean) return "—";
    std::string out = fmt2(*mean);
    if (std_dev) out += " ± " + fmt2(*std_dev);
    return out;
}

std::string cell_plain(const std::optional<double>& v) {
    return v ? fmt2(*v) : "—";
}

// display width, treating the multi-byte cells (—, ±, ∞, ↑) as one column each
std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < s.size();) {
        unsigned char c = s[i];
        if (c < 0x80) i += 1;
        else if ((c >> 5) == 0x6) i += 2;
        else if ((c >> 4) == 0xe) i += 3;
        else i += 4;
        ++w;
    }
    return w;
}

std::string pad(const std::string& s, std::size_t width) {
    std::string out = s;
    std::size_t w = display_width(s);
    while (w++ < width) out += ' ';
    return out;
}

} // namespace

std::string relative_increase(double r0, double r1) {
    if (r0 == 0.0) return "∞";
    long pct = std::lround((r1 / r0 - 1.0) * 100.0);
    if (pct > 0) return "+" + std::to_string(pct) + "%";
    return std::to_string(pct) + "%";
}

std::string render_table(std::vector<ReportRow> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.task_id != b.task_id) return a.task_id < b.task_id;
        if (a.model_id != b.model_id) return a.model_id < b.model_id;
        return a.run_label < b.run_label;
    });

    const std::vector<std::string> headers = {
        "run",       "task",          "model",         "surr.init", "surr.final",
        "ace",       "ace+const",     "rel.incr",      "sb.start",  "sb.ace",
        "sb.const"};
    std::vector<std::vector<std::string>> grid;
    grid.push_back(headers);
    for (const auto& r : rows) {
        std::string rel = "—";
        if (r.ace_rate_mean && r.cace_rate_mean)
            rel = relative_increase(*r.ace_rate_mean, *r.cace_rate_mean);
        grid.push_back({r.run_label, r.task_id, r.model_id,
                        cell_plain(r.surrogate_initial), cell_plain(r.surrogate_final),
                        cell_mean_std(r.ace_rate_mean, r.ace_rate_std),
                        cell_mean_std(r.cace_rate_mean, r.cace_rate_std), rel,
                        cell_plain(r.selfbleu_starter),
                        cell_mean_std(r.selfbleu_ace_mean, r.selfbleu_ace_std),
                        cell_mean_std(r.selfbleu_cace_mean, r.selfbleu_cace_std)});
    }

    std::vector<std::size_t> widths(headers.size(), 0);
    for (const auto& row : grid)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], display_width(row[c]));

    std::ostringstream out;
    for (std::size_t r = 0; r < grid.size(); ++r) {
        for (std::size_t c = 0; c < grid[r].size(); ++c) {
            if (c) out << "  ";
            out << pad(grid[r][c], widths[c]);
        }
        out << "\n";
        if (r == 0) {
            std::size_t total = 0;
            for (std::size_t c = 0; c < widths.size(); ++c) total += widths[c] + (c ? 2 : 0);
            out << std::string(total, '-') << "\n";
        }
    }
    return out.str();
}

std::string render_curves_svg(const std::vector<Curve>& curves) {
    const int w = 640, h = 400, ml = 60, mb = 40, mt = 20, mr = 20;
    int max_depth = 1;
    for (const auto& c : curves)
        for (const auto& [d, _] : c.points) max_depth = std::max(max_depth, d);

    auto x_of = [&](double d) { return ml + (w - ml - mr) * (d / max_depth); };
    auto y_of = [&](double p) { return h - mb - (h - mb - mt) * p; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    for (int d = 0; d <= max_depth; ++d)
        svg << "<text x=\"" << x_of(d) << "\" y=\"" << h - mb + 16
            << "\" font-size=\"11\" text-anchor=\"middle\">" << d << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        double p = i / 4.0;
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << y_of(p) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt2(p) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 8
        << "\" font-size=\"12\" text-anchor=\"middle\">edit sequence length</text>\n";

    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& c = curves[i];
        const char* color = palette[i % 6];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        svg << x_of(0) << "," << y_of(0) << " ";
        for (const auto& [d, p] : c.points) svg << x_of(d) << "," << y_of(p) << " ";
        svg << "\"/>\n";
        svg << "<text x=\"" << w - mr - 4 << "\" y=\"" << mt + 16 + 16 * i
            << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << color << "\">" << c.label
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace ace::metrics
