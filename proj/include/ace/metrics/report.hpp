#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ace::metrics {

// One table row: a (run, task, target model) cell set. Absent values render
// as an em dash.
struct ReportRow {
    std::string run_label;
    std::string task_id;
    std::string model_id;
    std::optional<double> surrogate_initial;
    std::optional<double> surrogate_final;
    std::optional<double> ace_rate_mean, ace_rate_std;
    std::optional<double> cace_rate_mean, cace_rate_std;
    std::optional<double> selfbleu_starter;
    std::optional<double> selfbleu_ace_mean, selfbleu_ace_std;
    std::optional<double> selfbleu_cace_mean, selfbleu_cace_std;
};

// r1/r0 - 1, rendered as a signed integer percent; "∞" when r0 = 0.
std::string relative_increase(double r0, double r1);

// Fixed-width text table over the rows, grouped by (task, model) so two runs
// with the same keys land adjacent for side-by-side comparison.
std::string render_table(std::vector<ReportRow> rows);

// depth -> cumulative success probability, one polyline per labeled series.
struct Curve {
    std::string label;
    std::vector<std::pair<int, double>> points;
};

// Minimal standalone SVG line chart of cumulative success curves.
std::string render_curves_svg(const std::vector<Curve>& curves);

} // namespace ace::metrics
