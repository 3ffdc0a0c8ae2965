#include "olpb/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace olpb {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream is(text);
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (header) {
            table.columns = cells;
            header = false;
        } else {
            table.rows.push_back(cells);
        }
    }
    return table;
}

CsvTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_csv(os.str());
}

namespace {

const char* kPalette[] = {"#1f6fb2", "#d1495b", "#3d9a70", "#8d6cab",
                          "#c98a2b", "#4d4d4d", "#66a3d2", "#a03f8c"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string escape_xml(const std::string& s) {
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

std::vector<double> nice_ticks(double lo, double hi, int want) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / want;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(t);
    return ticks;
}

} // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series,
                             const std::string& x_label, const std::string& y_label,
                             bool log_x) {
    if (series.empty()) throw std::invalid_argument("render_line_plot: no series");
    const double width = 640, height = 420;
    const double ml = 64, mr = 24, mt = 24, mb = 48;

    constexpr double inf = std::numeric_limits<double>::infinity();
    double xlo = inf, xhi = -inf, ylo = inf, yhi = -inf;
    for (const PlotSeries& s : series) {
        for (auto [x, y] : s.points) {
            if (log_x && !(x > 0.0))
                throw std::invalid_argument("render_line_plot: log x needs positive x values");
            const double xv = log_x ? std::log10(x) : x;
            xlo = std::min(xlo, xv);
            xhi = std::max(xhi, xv);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    if (!(xhi >= xlo)) throw std::invalid_argument("render_line_plot: no points");
    if (xhi == xlo) { xlo -= 0.5; xhi += 0.5; }
    if (yhi == ylo) { ylo -= 0.5; yhi += 0.5; }
    const double ypad = 0.05 * (yhi - ylo);
    ylo -= ypad;
    yhi += ypad;

    auto px = [&](double x) {
        const double xv = log_x ? std::log10(x) : x;
        return ml + (xv - xlo) / (xhi - xlo) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (y - ylo) / (yhi - ylo) * (height - mt - mb);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
       << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << height - mb << "\" stroke=\"black\"/>\n";

    for (double t : nice_ticks(ylo, yhi, 5)) {
        const double y = py(t);
        os << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(t) << "</text>\n";
    }
    if (log_x) {
        for (int e = static_cast<int>(std::floor(xlo)); e <= static_cast<int>(std::ceil(xhi));
             ++e) {
            const double x = std::pow(10.0, e);
            const double xp = px(x);
            if (xp < ml - 1 || xp > width - mr + 1) continue;
            os << "<line x1=\"" << xp << "\" y1=\"" << height - mb << "\" x2=\"" << xp
               << "\" y2=\"" << height - mb + 4 << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << xp << "\" y=\"" << height - mb + 18
               << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(x) << "</text>\n";
        }
    } else {
        for (double t : nice_ticks(xlo, xhi, 6)) {
            const double xp = ml + (t - xlo) / (xhi - xlo) * (width - ml - mr);
            os << "<line x1=\"" << xp << "\" y1=\"" << height - mb << "\" x2=\"" << xp
               << "\" y2=\"" << height - mb + 4 << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << xp << "\" y=\"" << height - mb + 18
               << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(t) << "</text>\n";
        }
    }
    os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape_xml(x_label)
       << (log_x ? " (log scale)" : "") << "</text>\n";
    os << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << (mt + height - mb) / 2 << ")\">" << escape_xml(y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::vector<std::pair<double, double>> pts = series[si].points;
        std::sort(pts.begin(), pts.end());
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : pts) os << px(x) << "," << py(y) << " ";
        os << "\"/>\n";
        for (auto [x, y] : pts)
            os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\""
               << color << "\"/>\n";
    }

    // legend
    const double lx = width - mr - 150, ly0 = mt + 8;
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const double ly = ly0 + 16.0 * si;
        os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << lx + 28 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">"
           << escape_xml(series[si].label) << "</text>\n";
    }

    os << "</svg>\n";
    return os.str();
}

std::string plot_csv(const CsvTable& table, const std::string& x_column,
                     const std::string& y_column, const std::string& group_column,
                     bool log_x) {
    if (table.rows.empty()) throw std::invalid_argument("plot: CSV has no data rows");
    const int xc = table.column(x_column);
    const int yc = table.column(y_column);
    if (xc < 0) throw std::invalid_argument("plot: missing column '" + x_column + "'");
    if (yc < 0) throw std::invalid_argument("plot: missing column '" + y_column + "'");
    int gc = -1;
    if (!group_column.empty()) {
        gc = table.column(group_column);
        if (gc < 0) throw std::invalid_argument("plot: missing column '" + group_column + "'");
    }
    std::map<std::string, PlotSeries> grouped;
    for (const auto& row : table.rows) {
        const std::string key = gc >= 0 ? row[gc] : y_column;
        PlotSeries& s = grouped[key];
        if (s.label.empty())
            s.label = gc >= 0 ? group_column + "=" + key : y_column;
        s.points.emplace_back(std::stod(row[xc]), std::stod(row[yc]));
    }
    std::vector<PlotSeries> series;
    for (auto& [_, s] : grouped) series.push_back(std::move(s));
    return render_line_plot(series, x_column, y_column, log_x);
}

} // namespace olpb
