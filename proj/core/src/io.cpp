#include "unibound/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "unibound/errors.hpp"

namespace unibound::io {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ValidationError("CSV has no column '" + name + "'");
  const auto idx = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(idx));
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV: " + path.string());
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::logic_error&) {
        // stod rejects "nan"/"inf" spellings from some writers; accept them here.
        if (cell == "nan" || cell == "-nan") {
          row.push_back(std::numeric_limits<double>::quiet_NaN());
        } else if (cell == "inf" || cell == "-inf") {
          row.push_back(cell[0] == '-' ? -HUGE_VAL : HUGE_VAL);
        } else {
          throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
        }
      }
    }
    if (row.size() != t.header.size()) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": wrong number of fields");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 initialization failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_loglog_svg(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<PlotSeries>& series) {
  constexpr double W = 720, H = 480, L = 80, R = 170, T = 40, B = 60;
  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!(s.x[i] > 0.0 && s.y[i] > 0.0) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, std::log10(s.x[i]));
      xmax = std::max(xmax, std::log10(s.x[i]));
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
    }
  }
  if (!(xmin < xmax)) xmin -= 1, xmax += 1;
  if (!(ymin < ymax)) ymin -= 1, ymax += 1;
  xmin = std::floor(xmin);
  xmax = std::ceil(xmax);
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title)
      << "</text>\n";
  const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 10.0 + 0.999));
  for (int d = static_cast<int>(xmin); d <= static_cast<int>(xmax); ++d) {
    svg << "<line x1=\"" << px(d) << "\" y1=\"" << T << "\" x2=\"" << px(d) << "\" y2=\"" << H - B
        << "\" stroke=\"#ddd\"/>\n<text x=\"" << px(d) << "\" y=\"" << H - B + 16
        << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); d += ystep) {
    svg << "<line x1=\"" << L << "\" y1=\"" << py(d) << "\" x2=\"" << W - R << "\" y2=\"" << py(d)
        << "\" stroke=\"#ddd\"/>\n<text x=\"" << L - 6 << "\" y=\"" << py(d) + 4
        << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  svg << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">"
      << escape_xml(x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape_xml(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = palette[k % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!(s.x[i] > 0.0 && s.y[i] > 0.0) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      svg << px(std::log10(s.x[i])) << ',' << py(std::log10(s.y[i])) << ' ';
    }
    svg << "\"/>\n";
    const double ly = T + 14 + 18 * static_cast<double>(k);
    svg << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 34 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
        << "/>\n<text x=\"" << W - R + 40 << "\" y=\"" << ly << "\">" << escape_xml(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  write_text(path, svg.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace unibound::io
