#include "cgmt_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace cgmt::cli {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::string label(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4g", v);
  return buffer;
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const {
    const double span = x_hi > x_lo ? x_hi - x_lo : 1.0;
    return kLeft + (x - x_lo) / span * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    const double span = y_hi > y_lo ? y_hi - y_lo : 1.0;
    return kHeight - kBottom - (y - y_lo) / span * (kHeight - kTop - kBottom);
  }
};

std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + fmt(kWidth / 2) + "\" y=\"18\" text-anchor=\"middle\">" + title +
         "</text>\n";
}

std::string axes(const Frame& f, const std::string& x_name, const std::string& y_name) {
  std::string s;
  const double x0 = f.px(f.x_lo), x1 = f.px(f.x_hi);
  const double y0 = f.py(f.y_lo), y1 = f.py(f.y_hi);
  s += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" +
       fmt(y0) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) + "\" y2=\"" +
       fmt(y1) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x_lo + (f.x_hi - f.x_lo) * i / 4.0;
    const double yv = f.y_lo + (f.y_hi - f.y_lo) * i / 4.0;
    s += "<text x=\"" + fmt(f.px(xv)) + "\" y=\"" + fmt(y0 + 16) +
         "\" text-anchor=\"middle\">" + label(xv) + "</text>\n";
    s += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(f.py(yv) + 4) +
         "\" text-anchor=\"end\">" + label(yv) + "</text>\n";
  }
  s += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(kHeight - 12) +
       "\" text-anchor=\"middle\">" + x_name + "</text>\n";
  s += "<text x=\"14\" y=\"" + fmt((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
       fmt((y0 + y1) / 2) + ")\">" + y_name + "</text>\n";
  return s;
}

std::string step_polyline(const Frame& f, std::vector<double> values, const std::string& color) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::string points = fmt(f.px(f.x_lo)) + "," + fmt(f.py(0.0));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = f.px(values[i]);
    points += " " + fmt(x) + "," + fmt(f.py(i / n));
    points += " " + fmt(x) + "," + fmt(f.py((i + 1) / n));
  }
  points += " " + fmt(f.px(f.x_hi)) + "," + fmt(f.py(1.0));
  return "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" +
         points + "\"/>\n";
}

std::string legend_entry(double y, const std::string& color, const std::string& text) {
  const double x = kWidth - kRight - 150;
  return "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x + 20) + "\" y2=\"" +
         fmt(y) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n<text x=\"" + fmt(x + 26) +
         "\" y=\"" + fmt(y + 4) + "\">" + text + "</text>\n";
}

}  // namespace

std::string cdf_overlay_svg(const ExperimentReport& report) {
  std::vector<double> Phi, phi;
  for (const auto& t : report.per_trial) {
    Phi.push_back(t.Phi);
    phi.push_back(t.phi);
  }
  Frame f{0.0, 1.0, 0.0, 1.0};
  if (!Phi.empty()) {
    const auto [a, b] = std::minmax_element(Phi.begin(), Phi.end());
    const auto [c, d] = std::minmax_element(phi.begin(), phi.end());
    f.x_lo = std::min(*a, *c);
    f.x_hi = std::max(*b, *d);
    const double pad = 0.05 * std::max(f.x_hi - f.x_lo, 1e-12);
    f.x_lo -= pad;
    f.x_hi += pad;
  }
  std::string s = header("Empirical CDF: PO value Phi vs AO value phi");
  s += axes(f, "c", "empirical CDF");
  s += step_polyline(f, Phi, "#1f77b4");
  s += step_polyline(f, phi, "#d62728");
  s += legend_entry(kTop + 20, "#1f77b4", "Phi (primary)");
  s += legend_entry(kTop + 38, "#d62728", "phi (auxiliary)");
  s += "</svg>\n";
  return s;
}

std::string nse_histogram_svg(const ExperimentReport& report, int bins) {
  const double sigma2 = report.config.sigma * report.config.sigma;
  std::vector<double> nse;
  for (const auto& t : report.per_trial) nse.push_back(t.w_hat_norm * t.w_hat_norm / sigma2);
  const double predicted = report.summary.predicted_nse;
  bins = std::max(bins, 1);

  double lo = predicted, hi = predicted;
  for (double v : nse) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double width = (hi - lo) / bins;
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double v : nse) {
    const int b = std::min(bins - 1, static_cast<int>((v - lo) / width));
    ++counts[static_cast<std::size_t>(b)];
  }
  const int peak = std::max(1, *std::max_element(counts.begin(), counts.end()));

  Frame f{lo, hi, 0.0, static_cast<double>(peak)};
  std::string s = header("Empirical NSE with predicted value");
  s += axes(f, "||w_hat||^2 / sigma^2", "trials");
  for (int b = 0; b < bins; ++b) {
    const double x0 = f.px(lo + b * width), x1 = f.px(lo + (b + 1) * width);
    const double y = f.py(counts[static_cast<std::size_t>(b)]);
    s += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(x1 - x0) +
         "\" height=\"" + fmt(f.py(0.0) - y) + "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n";
  }
  const double mx = f.px(predicted);
  s += "<line x1=\"" + fmt(mx) + "\" y1=\"" + fmt(f.py(0.0)) + "\" x2=\"" + fmt(mx) + "\" y2=\"" +
       fmt(f.py(peak)) + "\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";
  s += legend_entry(kTop + 20, "#d62728", "predicted " + label(predicted));
  s += "</svg>\n";
  return s;
}

}  // namespace cgmt::cli
