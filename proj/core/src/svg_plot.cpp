#include "hermgen/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hermgen/io.hpp"

namespace hermgen {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 30;
constexpr double kBottom = 50;

struct Curve {
  const char* label;
  const char* color;
  double SummaryPoint::*mean;
  double SummaryPoint::*sd;
};

constexpr Curve kCurves[] = {
    {"non-Gaussian", "#1f77b4", &SummaryPoint::non_gaussian_mean, &SummaryPoint::non_gaussian_std},
    {"Gaussian-equivalent", "#d62728", &SummaryPoint::gauss_equiv_mean,
     &SummaryPoint::gauss_equiv_std},
};

std::string num(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

}  // namespace

std::string render_loss_plot(const ExperimentResult& result) {
  const auto& pts = result.summary;
  if (pts.empty()) throw ParameterError("render_loss_plot: empty result");

  auto log_step = [](std::int64_t s) { return std::log10(static_cast<double>(std::max<std::int64_t>(s, 1))); };
  double x_lo = log_step(pts.front().step);
  double x_hi = log_step(pts.back().step);
  if (x_hi - x_lo < 1e-9) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  double y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& p : pts) {
    for (const Curve& c : kCurves) {
      y_lo = std::min(y_lo, p.*c.mean - p.*c.sd);
      y_hi = std::max(y_hi, p.*c.mean + p.*c.sd);
    }
  }
  const double pad = std::max(1e-6, 0.05 * (y_hi - y_lo));
  y_lo -= pad;
  y_hi += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](std::int64_t step) { return kLeft + (log_step(step) - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" "
      << "data-y-min=\"" << format_double(y_lo) << "\" data-y-max=\"" << format_double(y_hi)
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Decade ticks on the x axis.
  for (int e = static_cast<int>(std::ceil(x_lo - 1e-9)); e <= static_cast<int>(std::floor(x_hi + 1e-9)); ++e) {
    const double x = kLeft + (e - x_lo) / (x_hi - x_lo) * plot_w;
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << num(x)
        << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>"
        << "<text x=\"" << num(x) << "\" y=\"" << kTop + plot_h + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = y_lo + (y_hi - y_lo) * i / 4.0;
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(sy(y) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" font-size=\"13\" text-anchor=\"middle\">SGD step (log scale)</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" font-size=\"13\" "
      << "text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + plot_h / 2
      << ")\">test MSE</text>\n";

  for (const Curve& c : kCurves) {
    svg << "<polygon class=\"band\" fill=\"" << c.color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (const auto& p : pts) svg << num(sx(p.step)) << ',' << num(sy(p.*c.mean + p.*c.sd)) << ' ';
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      svg << num(sx(it->step)) << ',' << num(sy((*it).*c.mean - (*it).*c.sd)) << ' ';
    }
    svg << "\"/>\n";
    if (pts.size() == 1) {
      svg << "<circle class=\"marker\" cx=\"" << num(sx(pts[0].step)) << "\" cy=\""
          << num(sy(pts[0].*c.mean)) << "\" r=\"4\" fill=\"" << c.color << "\"/>\n";
    } else {
      svg << "<polyline class=\"mean\" fill=\"none\" stroke=\"" << c.color
          << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        svg << (i ? " " : "") << num(sx(pts[i].step)) << ',' << num(sy(pts[i].*c.mean));
      }
      svg << "\"/>\n";
    }
  }

  double ly = kTop + 16;
  for (const Curve& c : kCurves) {
    svg << "<line x1=\"" << kLeft + plot_w - 170 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + plot_w - 150 << "\" y2=\"" << ly << "\" stroke=\"" << c.color
        << "\" stroke-width=\"2\"/><text x=\"" << kLeft + plot_w - 144 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << c.label << "</text>\n";
    ly += 18;
  }
  if (!result.variant.empty() || !result.name.empty()) {
    svg << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"13\">" << result.name
        << (result.variant.empty() ? "" : " (" + result.variant + ")") << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const ExperimentResult& result, const std::filesystem::path& path) {
  write_text_file(path, render_loss_plot(result));
}

}  // namespace hermgen
