#include "gvar/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gvar::svg {
namespace {

constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
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

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * (kW - kLeft - kRight); }
  double py(double y) const { return kH - kBottom - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * (kH - kTop - kBottom); }
};

Frame padded(double x0, double x1, double y0, double y1) {
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  const double pad = 0.05 * (y1 - y0);
  return {x0, x1, y0 - pad, y1 + pad};
}

void open_doc(std::ostringstream& o, const std::string& title) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW
    << ' ' << kH << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << escape(title) << "</text>\n";
}

void axes(std::ostringstream& o, const Frame& f, const std::string& x_label) {
  o << "<g stroke=\"#444\" stroke-width=\"1\">\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\"" << kH - kBottom << "\"/>\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kH - kBottom << "\"/>\n"
    << "</g>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#444\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
    o << "<text x=\"" << kLeft - 4 << "\" y=\"" << num(f.py(y) + 3) << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
    const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
    o << "<text x=\"" << num(f.px(x)) << "\" y=\"" << kH - kBottom + 14 << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  o << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n</g>\n";
  if (f.y0 < 0 && f.y1 > 0)
    o << "<line x1=\"" << kLeft << "\" y1=\"" << num(f.py(0)) << "\" x2=\"" << kW - kRight << "\" y2=\"" << num(f.py(0))
      << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
}

std::string close_doc(std::ostringstream& o) {
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::string line_chart(const std::string& title, const std::vector<Series>& series, const std::string& x_label) {
  double lo = 0, hi = 0;
  std::size_t n = 1;
  for (const auto& s : series) {
    n = std::max(n, s.y.size());
    for (double v : s.y) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (double v : s.lo) lo = std::min(lo, v);
    for (double v : s.hi) hi = std::max(hi, v);
  }
  const Frame f = padded(0, static_cast<double>(n - 1), lo, hi);
  std::ostringstream o;
  open_doc(o, title);
  axes(o, f, x_label);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* colour = kPalette[i % 6];
    if (!s.lo.empty() && s.lo.size() == s.hi.size()) {
      o << "<polygon fill=\"" << colour << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t h = 0; h < s.hi.size(); ++h) o << num(f.px(double(h))) << ',' << num(f.py(s.hi[h])) << ' ';
      for (std::size_t h = s.lo.size(); h-- > 0;) o << num(f.px(double(h))) << ',' << num(f.py(s.lo[h])) << ' ';
      o << "\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t h = 0; h < s.y.size(); ++h) o << num(f.px(double(h))) << ',' << num(f.py(s.y[h])) << ' ';
    o << "\"/>\n";
    o << "<text x=\"" << kW - kRight - 4 << "\" y=\"" << kTop + 12 * (i + 1) << "\" text-anchor=\"end\" font-family=\"sans-serif\""
      << " font-size=\"10\" fill=\"" << colour << "\">" << escape(s.label) << "</text>\n";
  }
  return close_doc(o);
}

std::string eigenvalue_moduli(const Spectrum& s) {
  const std::size_t n = std::max<std::size_t>(s.eigenvalues.size(), 2);
  const double top = std::max(1.05, s.max_modulus * 1.05);
  const Frame f{0, double(n - 1), 0, top};
  std::ostringstream o;
  open_doc(o, "Companion eigenvalue moduli");
  axes(o, f, "eigenvalue (sorted)");
  o << "<line x1=\"" << kLeft << "\" y1=\"" << num(f.py(1)) << "\" x2=\"" << kW - kRight << "\" y2=\"" << num(f.py(1))
    << "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    o << "<circle cx=\"" << num(f.px(double(i))) << "\" cy=\"" << num(f.py(std::abs(s.eigenvalues[i])))
      << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
  return close_doc(o);
}

std::string autocorrelation_bars(const Autocorrelation& a, const GlobalIndex& index, Index max_vars) {
  const Index vars = std::min<Index>(a.acf.cols(), max_vars);
  const Index lags = a.acf.rows();
  const double total = double(std::max<Index>(vars * lags, 1));
  double lim = a.band;
  for (Index c = 0; c < vars; ++c)
    for (Index l = 1; l < lags; ++l) lim = std::max(lim, std::abs(a.acf(l, c)));
  const Frame f = padded(0, total, -lim, lim);
  std::ostringstream o;
  open_doc(o, "Residual autocorrelation");
  axes(o, f, "variable / lag");
  const double bw = (kW - kLeft - kRight) / total * 0.8;
  for (double b : {a.band, -a.band})
    o << "<line x1=\"" << kLeft << "\" y1=\"" << num(f.py(b)) << "\" x2=\"" << kW - kRight << "\" y2=\"" << num(f.py(b))
      << "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
  for (Index c = 0; c < vars; ++c) {
    for (Index l = 1; l < lags; ++l) {
      const double x = f.px(double(c * lags + l));
      const double v = a.acf(l, c);
      const double y = f.py(std::max(v, 0.0)), h = std::abs(f.py(v) - f.py(0));
      o << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(bw) << "\" height=\"" << num(h)
        << "\" fill=\"" << kPalette[c % 6] << "\"/>\n";
    }
    o << "<text x=\"" << num(f.px(double(c * lags + lags / 2.0))) << "\" y=\"" << kTop + 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"8\">" << escape(index.label(c)) << "</text>\n";
  }
  return close_doc(o);
}

std::string histogram(const std::string& title, const std::vector<double>& values, int bins) {
  double lo = 0, hi = 1;
  if (!values.empty()) {
    lo = *std::min_element(values.begin(), values.end());
    hi = *std::max_element(values.begin(), values.end());
    if (!(hi > lo)) { lo -= 0.5; hi += 0.5; }
  }
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
  }
  const int top = std::max(1, *std::max_element(counts.begin(), counts.end()));
  const Frame f{lo, hi, 0, double(top)};
  std::ostringstream o;
  open_doc(o, title);
  axes(o, f, "value");
  const double width = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) {
    const double x0 = f.px(lo + b * width), x1 = f.px(lo + (b + 1) * width);
    const double c = counts[static_cast<std::size_t>(b)];
    o << "<rect x=\"" << num(x0) << "\" y=\"" << num(f.py(c)) << "\" width=\"" << num(x1 - x0 - 1) << "\" height=\""
      << num(f.py(0) - f.py(c)) << "\" fill=\"#1f77b4\"/>\n";
  }
  return close_doc(o);
}

std::string stacked_bars(const std::string& title, const std::vector<std::string>& labels,
                         const std::vector<double>& direct, const std::vector<double>& spillover) {
  const std::size_t n = labels.size();
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // stack positive and negative parts separately
    const double pos = std::max(direct[i], 0.0) + std::max(spillover[i], 0.0);
    const double neg = std::min(direct[i], 0.0) + std::min(spillover[i], 0.0);
    lo = std::min(lo, neg);
    hi = std::max(hi, pos);
  }
  const Frame f = padded(0, double(std::max<std::size_t>(n, 1)), lo, hi);
  std::ostringstream o;
  open_doc(o, title);
  axes(o, f, "response");
  const double bw = (kW - kLeft - kRight) / double(std::max<std::size_t>(n, 1)) * 0.7;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = f.px(double(i) + 0.15);
    double up = 0, down = 0;
    const double parts[2] = {direct[i], spillover[i]};
    for (int k = 0; k < 2; ++k) {
      const double v = parts[k];
      double a, b;
      if (v >= 0) { a = up; b = up + v; up = b; } else { a = down + v; b = down; down = a; }
      o << "<rect x=\"" << num(x) << "\" y=\"" << num(f.py(b)) << "\" width=\"" << num(bw) << "\" height=\""
        << num(f.py(a) - f.py(b)) << "\" fill=\"" << kPalette[k] << "\"/>\n";
    }
    o << "<text x=\"" << num(x + bw / 2) << "\" y=\"" << kH - kBottom + 26
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"8\">" << escape(labels[i]) << "</text>\n";
  }
  o << "<text x=\"" << kW - kRight << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\""
    << " fill=\"" << kPalette[0] << "\">direct</text>\n"
    << "<text x=\"" << kW - kRight << "\" y=\"" << kTop + 22 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\""
    << " fill=\"" << kPalette[1] << "\">spillover</text>\n";
  return close_doc(o);
}

std::string bar_chart(const std::string& title, const std::vector<std::string>& labels, const std::vector<double>& values,
                      double reference) {
  const std::size_t n = values.size();
  double lo = 0, hi = 0;
  for (double v : values) { lo = std::min(lo, v); hi = std::max(hi, v); }
  if (std::isfinite(reference)) { lo = std::min(lo, reference); hi = std::max(hi, reference); }
  const Frame f = padded(0, double(std::max<std::size_t>(n, 1)), lo, hi);
  std::ostringstream o;
  open_doc(o, title);
  axes(o, f, "");
  const double bw = (kW - kLeft - kRight) / double(std::max<std::size_t>(n, 1)) * 0.7;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = f.px(double(i) + 0.15);
    const double a = std::min(values[i], 0.0), b = std::max(values[i], 0.0);
    o << "<rect x=\"" << num(x) << "\" y=\"" << num(f.py(b)) << "\" width=\"" << num(bw) << "\" height=\""
      << num(f.py(a) - f.py(b)) << "\" fill=\"" << kPalette[0] << "\"/>\n";
    o << "<text x=\"" << num(x + bw / 2) << "\" y=\"" << kH - kBottom + 26
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"8\">" << escape(labels.at(i)) << "</text>\n";
  }
  if (std::isfinite(reference))
    o << "<line x1=\"" << kLeft << "\" y1=\"" << num(f.py(reference)) << "\" x2=\"" << kW - kRight << "\" y2=\""
      << num(f.py(reference)) << "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
  return close_doc(o);
}

std::string irf_chart(const IrfSet& set, Index var, Index shock) {
  Series s;
  s.label = "median";
  for (Index h = 0; h < set.median.horizons; ++h) {
    s.y.push_back(set.median.at(h, var, shock));
    s.lo.push_back(set.lower.at(h, var, shock));
    s.hi.push_back(set.upper.at(h, var, shock));
  }
  return line_chart(set.var_labels.at(std::size_t(var)) + " to " + set.shock_labels.at(std::size_t(shock)), {s});
}

void save(const std::string& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << doc;
}

}  // namespace gvar::svg
