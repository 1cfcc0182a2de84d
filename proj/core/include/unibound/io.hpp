#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace unibound::io {

/// Shortest round-trip representation ("%.17g").
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column by header name; throws ValidationError when absent.
  std::vector<double> column(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Log-log line plot. Non-positive points are dropped.
void write_loglog_svg(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<PlotSeries>& series);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace unibound::io
