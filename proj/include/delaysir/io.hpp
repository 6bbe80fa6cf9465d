// File formats: CSV fields and tables, 8-bit PGM heatmaps with a text sidecar.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "delaysir/grid.hpp"

namespace delaysir::io {

/// Shortest round-trippable text for a double ("%.17g" trimmed to what is needed).
std::string format_number(double v);

/// RFC 4180 quoting: fields containing a comma, quote, CR or LF are quoted, quotes doubled.
std::string csv_escape(const std::string& field);
std::string csv_line(const std::vector<std::string>& fields);

/// L lines of K comma-separated values; line l holds the fixed-y row y_l, starting at y = 0.
void write_field_csv(const std::filesystem::path& path, const Field& field);
Field read_field_csv(const std::filesystem::path& path);

struct GrayScale {
  double min{0.0};
  double max{1.0};
};

/// Binary P5 PGM, K columns by L rows, maxval 255. The top image row is y = B so the picture
/// has y pointing up. Values map linearly from [scale.min, scale.max] onto [0, 255] and clamp.
/// A sidecar `<path>.txt` records the scale and orientation.
void write_pgm(const std::filesystem::path& path, const Field& field, GrayScale scale);

/// The field's own min/max, widened to a non-empty interval if the field is constant.
GrayScale min_max_scale(const Field& field);

/// Writes text to path, throwing std::runtime_error if the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace delaysir::io
