#include "delaysir/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace delaysir::io {

std::string format_number(double v) {
  char buf[64];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(fields[i]);
  }
  line += '\n';
  return line;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_field_csv(const std::filesystem::path& path, const Field& field) {
  std::string text;
  for (std::size_t l = 0; l < field.L(); ++l) {
    for (std::size_t k = 0; k < field.K(); ++k) {
      if (k) text += ',';
      text += format_number(field(k, l));
    }
    text += '\n';
  }
  write_text(path, text);
}

Field read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("ragged CSV field in '" + path.string() + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty CSV field in '" + path.string() + "'");
  Field f(rows.front().size(), rows.size());
  for (std::size_t l = 0; l < rows.size(); ++l) {
    for (std::size_t k = 0; k < rows[l].size(); ++k) f(k, l) = rows[l][k];
  }
  return f;
}

GrayScale min_max_scale(const Field& field) {
  GrayScale s{field.min(), field.max()};
  if (!(s.max > s.min)) {
    const double pad = std::max(1.0, std::abs(s.min));
    s.max = s.min + pad;
  }
  return s;
}

void write_pgm(const std::filesystem::path& path, const Field& field, GrayScale scale) {
  std::string data = "P5\n" + std::to_string(field.K()) + " " + std::to_string(field.L()) + "\n255\n";
  const double span = scale.max - scale.min;
  for (std::size_t row = 0; row < field.L(); ++row) {
    const std::size_t l = field.L() - 1 - row;
    for (std::size_t k = 0; k < field.K(); ++k) {
      double u = span > 0.0 ? (field(k, l) - scale.min) / span : 0.0;
      if (!(u >= 0.0)) u = 0.0;
      if (u > 1.0) u = 1.0;
      data += static_cast<char>(static_cast<unsigned char>(std::lround(u * 255.0)));
    }
  }
  write_text(path, data);
  std::ostringstream side;
  side << "format=P5\n"
       << "width=" << field.K() << "\n"
       << "height=" << field.L() << "\n"
       << "scale_min=" << format_number(scale.min) << "\n"
       << "scale_max=" << format_number(scale.max) << "\n"
       << "data_min=" << format_number(field.min()) << "\n"
       << "data_max=" << format_number(field.max()) << "\n"
       << "mapping=linear gray = round(255 * clamp((v - scale_min) / (scale_max - scale_min), 0, 1))\n"
       << "orientation=first image row is y = B, first column is x = 0\n";
  write_text(path.string() + ".txt", side.str());
}

}  // namespace delaysir::io
