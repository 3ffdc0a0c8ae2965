#pragma once

#include <string>
#include <vector>

namespace olpb {

// Minimal CSV table with a header row.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
};

CsvTable parse_csv(const std::string& text);
CsvTable load_csv(const std::string& path);

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Standalone SVG line plot with axes, tick labels, and a legend.
std::string render_line_plot(const std::vector<PlotSeries>& series,
                             const std::string& x_label, const std::string& y_label,
                             bool log_x);

// Builds series from a CSV: one series per distinct value of group_column
// (single series when empty). Throws invalid_argument on missing columns or an
// empty table.
std::string plot_csv(const CsvTable& table, const std::string& x_column,
                     const std::string& y_column, const std::string& group_column,
                     bool log_x);

} // namespace olpb
