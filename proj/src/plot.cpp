#include "oscwell/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oscwell/errors.hpp"

namespace oscwell {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw MissingArtifact("CSV column not found: " + name);
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      out << (i ? "," : "") << fmt(r[i]);
    }
    out << "\n";
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("artifact not found: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw MissingArtifact("artifact empty: " + path);
  }
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != t.columns.size()) {
      throw MissingArtifact("ragged CSV row in " + path);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw MissingArtifact("artifact has no data rows: " + path);
  return t;
}

namespace {

constexpr int kW = 640, kH = 420, kPad = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

void axis_range(const std::vector<double>& v, double& lo, double& hi) {
  lo = 1e300;
  hi = -1e300;
  for (double x : v) {
    if (std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double m = 0.05 * (hi - lo);
  lo -= m;
  hi += m;
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::vector<double>& xs,
                          const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  double x_lo, x_hi, y_lo = 1e300, y_hi = -1e300;
  axis_range(xs, x_lo, x_hi);
  for (const auto& [name, ys] : series) {
    double lo, hi;
    axis_range(ys, lo, hi);
    y_lo = std::min(y_lo, lo);
    y_hi = std::max(y_hi, hi);
  }
  const auto px = [&](double x) {
    return kPad + (x - x_lo) / (x_hi - x_lo) * (kW - 2 * kPad);
  };
  const auto py = [&](double y) {
    return kH - kPad - (y - y_lo) / (y_hi - y_lo) * (kH - 2 * kPad);
  };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << title << "</text>\n";
  s << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad
    << "\" height=\"" << kH - 2 * kPad << "\" fill=\"none\" stroke=\"#444\"/>\n";
  s << "<text x=\"" << kPad << "\" y=\"" << kH - kPad + 16 << "\" font-size=\"11\">"
    << fmt3(x_lo) << "</text>\n";
  s << "<text x=\"" << kW - kPad << "\" y=\"" << kH - kPad + 16
    << "\" text-anchor=\"end\" font-size=\"11\">" << fmt3(x_hi) << "</text>\n";
  s << "<text x=\"" << kPad - 4 << "\" y=\"" << kH - kPad
    << "\" text-anchor=\"end\" font-size=\"11\">" << fmt3(y_lo) << "</text>\n";
  s << "<text x=\"" << kPad - 4 << "\" y=\"" << kPad + 5
    << "\" text-anchor=\"end\" font-size=\"11\">" << fmt3(y_hi) << "</text>\n";
  std::size_t ci = 0;
  for (const auto& [name, ys] : series) {
    const char* color = kColors[ci % 6];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
      if (!std::isfinite(ys[i])) continue;
      s << fmt3(px(xs[i])) << "," << fmt3(py(ys[i])) << " ";
    }
    s << "\"/>\n";
    s << "<text x=\"" << kW - kPad - 6 << "\" y=\"" << kPad + 16 + 14 * ci
      << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << name
      << "</text>\n";
    ++ci;
  }
  s << "</svg>\n";
  return s.str();
}

std::string svg_heatmap(const std::string& title, std::size_t nx, std::size_t ny,
                        const std::vector<double>& z) {
  double lo = 1e300, hi = -1e300;
  for (double v : z) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double cw = static_cast<double>(kW - 2 * kPad) / static_cast<double>(nx);
  const double ch = static_cast<double>(kH - 2 * kPad) / static_cast<double>(ny);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << title << "</text>\n";
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double t = (z[i * ny + j] - lo) / (hi - lo);
      const int r = static_cast<int>(255 * t);
      const int b = static_cast<int>(255 * (1.0 - t));
      const int g = static_cast<int>(80 * (1.0 - std::abs(2 * t - 1)));
      s << "<rect x=\"" << fmt3(kPad + cw * static_cast<double>(i)) << "\" y=\""
        << fmt3(kH - kPad - ch * static_cast<double>(j + 1)) << "\" width=\"" << fmt3(cw + 0.5)
        << "\" height=\"" << fmt3(ch + 0.5) << "\" fill=\"rgb(" << r << "," << g << "," << b
        << ")\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

}  // namespace

std::vector<std::string> render_plots(const std::string& artifact_dir) {
  std::vector<std::string> written;
  const auto path = [&](const std::string& name) { return artifact_dir + "/" + name; };

  {
    const CsvTable spectral = read_csv(path("spectral.csv"));
    const auto y = spectral.values("y");
    write_file(path("lambda1.svg"),
               svg_line_plot("lambda1(y)", y,
                             {{"kramers", spectral.values("lambda1_kramers")},
                              {"numeric", spectral.values("lambda1_numeric")}}));
    write_file(path("rates.svg"),
               svg_line_plot("r_-(y), r_+(y)", y,
                             {{"r_minus", spectral.values("r_minus")},
                              {"r_plus", spectral.values("r_plus")}}));
    written.push_back("lambda1.svg");
    written.push_back("rates.svg");
  }
  {
    const CsvTable inv = read_csv(path("invariant.csv"));
    const auto y = inv.values("y");
    std::vector<std::pair<std::string, std::vector<double>>> series;
    series.emplace_back("delta1", inv.values("delta1"));
    if (std::find(inv.columns.begin(), inv.columns.end(), "delta_jump") != inv.columns.end()) {
      series.emplace_back("delta_jump", inv.values("delta_jump"));
    }
    write_file(path("delta.svg"), svg_line_plot("delta(y) vs delta1(y)", y, series));
    written.push_back("delta.svg");
  }
  {
    const CsvTable tau = read_csv(path("mc_tau.csv"));
    auto t = tau.values("tau");
    std::sort(t.begin(), t.end());
    std::vector<double> surv(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      surv[i] = 1.0 - static_cast<double>(i + 1) / static_cast<double>(t.size());
    }
    write_file(path("survival.svg"), svg_line_plot("survival of tau_B", t, {{"P(tau>t)", surv}}));
    written.push_back("survival.svg");
  }
  {
    const CsvTable heat = read_csv(path("pi_heatmap.csv"));
    const auto xs = heat.values("x");
    const auto ys = heat.values("y");
    const auto zs = heat.values("density");
    std::vector<double> ux(xs), uy(ys);
    std::sort(ux.begin(), ux.end());
    ux.erase(std::unique(ux.begin(), ux.end()), ux.end());
    std::sort(uy.begin(), uy.end());
    uy.erase(std::unique(uy.begin(), uy.end()), uy.end());
    std::vector<double> z(ux.size() * uy.size(), 0.0);
    for (std::size_t r = 0; r < zs.size(); ++r) {
      const std::size_t i =
          std::lower_bound(ux.begin(), ux.end(), xs[r]) - ux.begin();
      const std::size_t j =
          std::lower_bound(uy.begin(), uy.end(), ys[r]) - uy.begin();
      z[i * uy.size() + j] = zs[r];
    }
    write_file(path("pi_heatmap.svg"), svg_heatmap("pi(x, y)", ux.size(), uy.size(), z));
    written.push_back("pi_heatmap.svg");
  }
  return written;
}

}  // namespace oscwell
