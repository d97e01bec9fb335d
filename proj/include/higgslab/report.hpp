#pragma once

#include <string>
#include <vector>

namespace higgslab {

/// Deterministic CSV: comma separator, '.' decimal, mandatory header,
/// floats printed with 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  void add_mixed_row(const std::vector<std::string>& values);
  std::string str() const;
  void write(const std::string& path) const;
  static std::string format_double(double v);

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // empty: no error bars
  bool line = true;
};

/// Static SVG line plot (convenience artifact, no acceptance weight).
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series);

/// Metadata sidecar <artifact>.meta.json with the resolved config, seed
/// and tool version.
void write_meta_sidecar(const std::string& artifact_path, const std::string& config_json);

void ensure_directory(const std::string& path);

}  // namespace higgslab
