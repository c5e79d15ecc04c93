#pragma once

#include <string>
#include <vector>

#include "hmclab/types.hpp"

namespace hmclab {

/// Fixed 17-significant-digit decimal ("%.17g"); round-trips every double.
std::string format_double(double x);

/// Comma-separated file with a header line; every value through format_double.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Binary matrix layout: 8-byte magic "HMCTM001", uint64 rows, uint64 cols,
/// then rows*cols little-endian IEEE doubles in row-major order.
void write_matrix(const std::string& path, const Mat& m);
Mat read_matrix(const std::string& path);

/// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace hmclab
