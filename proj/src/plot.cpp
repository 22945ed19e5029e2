#include "nsnudge/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsnudge/run_io.hpp"

namespace nsnudge {

namespace fs = std::filesystem;

namespace {

struct XY {
    double x, y;
};

// minimal log-linear SVG line plot; y values must be positive to appear
std::string svg_log_plot(const std::vector<std::vector<XY>>& lines, const std::vector<std::string>& labels,
                         const std::string& title, const std::string& xlabel, const std::string& ylabel) {
    const int W = 720, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& line : lines)
        for (const auto& p : line) {
            if (p.y <= 0.0) continue;
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    if (xmax <= xmin || ymax <= ymin) {
        xmin = 0;
        xmax = 1;
        ymin = 1e-1;
        ymax = 1;
    }
    double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
    if (ly1 - ly0 < 0.5) {
        ly0 -= 0.5;
        ly1 += 0.5;
    }
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (std::log10(y) - ly0) / (ly1 - ly0) * (H - mt - mb); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
      << "</text>\n";
    // y decade grid
    for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
        double y = py(std::pow(10.0, d));
        s << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << W - mr << "\" y2=\"" << y
          << "\" stroke=\"#dddddd\"/>\n";
        s << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">1e" << d
          << "</text>\n";
    }
    // x ticks
    for (int i = 0; i <= 5; ++i) {
        double x = xmin + (xmax - xmin) * i / 5.0;
        s << "<line x1=\"" << px(x) << "\" y1=\"" << H - mb << "\" x2=\"" << px(x) << "\" y2=\"" << H - mb + 5
          << "\" stroke=\"black\"/>\n";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", x);
        s << "<text x=\"" << px(x) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
          << buf << "</text>\n";
    }
    s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
      << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
      << xlabel << "</text>\n";
    s << "<text x=\"18\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << H / 2 << ")\">" << ylabel << "</text>\n";
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::ostringstream pts;
        for (const auto& p : lines[li]) {
            if (p.y <= 0.0) continue;
            pts << px(p.x) << "," << py(p.y) << " ";
        }
        s << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << colors[li % 6]
          << "\" stroke-width=\"1.5\"/>\n";
        if (li < labels.size() && !labels[li].empty())
            s << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 18 + 16 * li
              << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[li % 6] << "\">" << labels[li]
              << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::string text = read_text_file(path);
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

void plot_run_directory(const fs::path& dir) {
    fs::path csv = dir / "series.csv";
    if (!fs::exists(csv)) throw std::runtime_error("plot: no series.csv in " + dir.string());
    auto rows = read_csv(csv);
    if (rows.size() < 2) throw std::runtime_error("plot: series.csv has no data rows");

    std::vector<XY> l2, h1;
    std::string dat = "# t l2_w h1_w\n";
    char buf[128];
    for (std::size_t i = 1; i < rows.size(); ++i) {  // rows[0] is the header
        double t = std::stod(rows[i][0]);
        double wl2 = std::stod(rows[i][1]);
        double wh1 = std::stod(rows[i][2]);
        l2.push_back({t, wl2});
        h1.push_back({t, wh1});
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", t, wl2, wh1);
        dat += buf;
    }
    write_text_file(dir / "decay.dat", dat);
    write_text_file(dir / "decay.svg",
                    svg_log_plot({h1, l2}, {"||w|| (H1)", "|w| (L2)"}, "error decay", "t", "error norm"));
    write_text_file(dir / "decay.gp",
                    "set logscale y\nset xlabel 't'\nset ylabel 'error norm'\n"
                    "plot 'decay.dat' u 1:3 w l t '||w|| (H1)', 'decay.dat' u 1:2 w l t '|w| (L2)'\n");
}

void plot_sweep_directory(const fs::path& dir) {
    fs::path csv = dir / "summary.csv";
    if (!fs::exists(csv)) throw std::runtime_error("plot: no summary.csv in " + dir.string());
    auto rows = read_csv(csv);
    if (rows.size() < 2) throw std::runtime_error("plot: summary.csv has no data rows");

    // columns: cell,ok,recomputed,error_class,kind,mu,h,...,fitted_rate,...
    std::map<std::string, std::vector<XY>> by_h;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() < 12 || rows[i][1] != "1") continue;
        double mu = std::stod(rows[i][5]);
        std::string h = rows[i][6];
        double rate = std::stod(rows[i][10]);
        by_h[h].push_back({mu, rate});
    }
    if (by_h.empty()) throw std::runtime_error("plot: no successful cells in summary.csv");
    for (auto& [h, pts] : by_h) {
        std::sort(pts.begin(), pts.end(), [](const XY& a, const XY& b) { return a.x < b.x; });
        std::string dat = "# mu fitted_rate\n";
        char buf[96];
        for (const auto& p : pts) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p.x, p.y);
            dat += buf;
        }
        std::string stem = "rate_vs_mu_h" + h;
        for (auto& ch : stem)
            if (ch == '.' || ch == '+' || ch == '-') ch = '_';
        write_text_file(dir / (stem + ".dat"), dat);
        write_text_file(dir / (stem + ".svg"),
                        svg_log_plot({pts}, {"h=" + h}, "fitted rate vs mu", "mu", "fitted rate"));
    }
}

void plot_directory(const fs::path& dir) {
    if (fs::exists(dir / "series.csv"))
        plot_run_directory(dir);
    else if (fs::exists(dir / "summary.csv"))
        plot_sweep_directory(dir);
    else
        throw std::runtime_error("plot: " + dir.string() + " has neither series.csv nor summary.csv");
}

}  // namespace nsnudge
