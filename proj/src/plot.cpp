#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>

#include "khop/error.hpp"
#include "khop/harness.hpp"

namespace khop {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Smallest 1/2/5 x 10^n step giving at most `ticks` intervals up to `top`.
double nice_step(double top, int ticks) {
  if (top <= 0.0) return 1.0;
  const double raw = top / ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

void write_plot(std::ostream& out, const ExperimentResult& result) {
  std::map<std::string, std::vector<const ExperimentRow*>> series;
  double bmin = 0.0, bmax = 1.0, ymax = 0.0;
  bool first = true;
  for (const auto& r : result.rows) {
    series[r.policy].push_back(&r);
    const double b = static_cast<double>(r.budget);
    if (first) {
      bmin = bmax = b;
      first = false;
    }
    bmin = std::min(bmin, b);
    bmax = std::max(bmax, b);
    ymax = std::max(ymax, r.mean);
  }
  if (bmax <= bmin) bmax = bmin + 1.0;
  const double ystep = nice_step(ymax, 5);
  const double ytop = ymax > 0.0 ? std::ceil(ymax / ystep) * ystep : 5.0 * ystep;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double b) { return kLeft + (b - bmin) / (bmax - bmin) * plot_w; };
  auto sy = [&](double y) { return kTop + plot_h - y / ytop * plot_h; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" fill=\"white\"/>\n";

  // Axes.
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(kLeft + plot_w)
      << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n"
      << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
      << num(kTop + plot_h) << "\"/>\n"
      << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (double y = 0.0; y <= ytop + 1e-9; y += ystep) {
    out << "<line x1=\"" << num(kLeft - 4) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(sy(y)) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">"
        << num(y) << "</text>\n";
  }
  std::vector<std::size_t> budgets;
  for (const auto& r : result.rows) budgets.push_back(r.budget);
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  for (std::size_t b : budgets) {
    const double x = sx(static_cast<double>(b));
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(kTop + plot_h + 4) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
        << b << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" text-anchor=\"middle\" font-size=\"13\">budget</text>\n"
      << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << num(kTop + plot_h / 2) << ")\">expected total revenue</text>\n"
      << "</g>\n";

  // Series and legend.
  std::size_t index = 0;
  for (const auto& [policy, rows] : series) {
    const char* color = kPalette[index % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) out << ' ';
      out << num(sx(static_cast<double>(rows[i]->budget))) << ',' << num(sy(rows[i]->mean));
    }
    out << "\"/>\n";
    const double ly = kTop + 10.0 + 20.0 * static_cast<double>(index);
    const double lx = kLeft + plot_w + 20.0;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24) << "\" y2=\""
        << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << policy << "</text>\n";
    ++index;
  }
  out << "</svg>\n";
}

void emit_plot(const ExperimentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_plot(out, result);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace khop
