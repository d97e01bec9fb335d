#include "higgslab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace higgslab {

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvWriter: header row is mandatory");
}

std::string CsvWriter::format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != header_.size())
    throw std::invalid_argument("CsvWriter: row width does not match header");
  std::string row;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) row += ',';
    row += format_double(values[i]);
  }
  rows_.push_back(std::move(row));
}

void CsvWriter::add_mixed_row(const std::vector<std::string>& values) {
  if (values.size() != header_.size())
    throw std::invalid_argument("CsvWriter: row width does not match header");
  std::string row;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) row += ',';
    row += values[i];
  }
  rows_.push_back(std::move(row));
}

std::string CsvWriter::str() const {
  std::string out;
  for (size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    out += row;
    out += '\n';
  }
  return out;
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("CsvWriter: cannot open " + path);
  f << str();
}

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series) {
  const double W = 720, H = 480;
  const double ml = 80, mr = 170, mt = 40, mb = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      double lo = s.y[i] - (i < s.yerr.size() ? s.yerr[i] : 0.0);
      double hi = s.y[i] + (i < s.yerr.size() ? s.yerr[i] : 0.0);
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, lo);
      ymax = std::max(ymax, hi);
    }
  if (xmin > xmax) { xmin = 0; xmax = 1; }
  if (ymin > ymax) { ymin = 0; ymax = 1; }
  if (xmax - xmin < 1e-12) { xmax += 0.5; xmin -= 0.5; }
  if (ymax - ymin < 1e-12) { ymax += 0.5; ymin -= 0.5; }
  double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string((int)W) +
         "\" height=\"" + std::to_string((int)H) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string((int)(W / 2)) + "\" y=\"24\" font-size=\"16\" "
         "text-anchor=\"middle\">" + title + "</text>\n";

  // axes
  svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(H - mb) +
         "\" x2=\"" + std::to_string(W - mr) + "\" y2=\"" + std::to_string(H - mb) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt) +
         "\" x2=\"" + std::to_string(ml) + "\" y2=\"" + std::to_string(H - mb) +
         "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    double xv = xmin + t * (xmax - xmin) / 5;
    double yv = ymin + t * (ymax - ymin) / 5;
    svg += "<line x1=\"" + std::to_string(X(xv)) + "\" y1=\"" + std::to_string(H - mb) +
           "\" x2=\"" + std::to_string(X(xv)) + "\" y2=\"" + std::to_string(H - mb + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + std::to_string(X(xv)) + "\" y=\"" + std::to_string(H - mb + 20) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + fmt_tick(xv) + "</text>\n";
    svg += "<line x1=\"" + std::to_string(ml - 5) + "\" y1=\"" + std::to_string(Y(yv)) +
           "\" x2=\"" + std::to_string(ml) + "\" y2=\"" + std::to_string(Y(yv)) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + std::to_string(ml - 9) + "\" y=\"" + std::to_string(Y(yv) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + fmt_tick(yv) + "</text>\n";
  }
  svg += "<text x=\"" + std::to_string((ml + W - mr) / 2) + "\" y=\"" +
         std::to_string(H - 15) + "\" font-size=\"13\" text-anchor=\"middle\">" + xlabel +
         "</text>\n";
  svg += "<text x=\"20\" y=\"" + std::to_string((mt + H - mb) / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         std::to_string((mt + H - mb) / 2) + ")\">" + ylabel + "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % 8];
    if (s.line && s.x.size() > 1) {
      std::string pts;
      for (size_t i = 0; i < s.x.size(); ++i)
        pts += std::to_string(X(s.x[i])) + "," + std::to_string(Y(s.y[i])) + " ";
      svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    }
    for (size_t i = 0; i < s.x.size(); ++i) {
      svg += "<circle cx=\"" + std::to_string(X(s.x[i])) + "\" cy=\"" +
             std::to_string(Y(s.y[i])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
      if (i < s.yerr.size() && s.yerr[i] > 0.0) {
        svg += "<line x1=\"" + std::to_string(X(s.x[i])) + "\" y1=\"" +
               std::to_string(Y(s.y[i] - s.yerr[i])) + "\" x2=\"" +
               std::to_string(X(s.x[i])) + "\" y2=\"" +
               std::to_string(Y(s.y[i] + s.yerr[i])) + "\" stroke=\"" + color +
               "\" stroke-width=\"1\"/>\n";
      }
    }
    double ly = mt + 18.0 * si;
    svg += "<rect x=\"" + std::to_string(W - mr + 10) + "\" y=\"" + std::to_string(ly) +
           "\" width=\"12\" height=\"12\" fill=\"" + std::string(color) + "\"/>\n";
    svg += "<text x=\"" + std::to_string(W - mr + 28) + "\" y=\"" +
           std::to_string(ly + 10) + "\" font-size=\"11\">" + s.label + "</text>\n";
  }
  svg += "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_svg_plot: cannot open " + path);
  f << svg;
}

void write_meta_sidecar(const std::string& artifact_path, const std::string& config_json) {
  std::ofstream f(artifact_path + ".meta.json", std::ios::binary);
  if (!f) throw std::runtime_error("write_meta_sidecar: cannot open sidecar for " +
                                   artifact_path);
  f << config_json;
}

}  // namespace higgslab
