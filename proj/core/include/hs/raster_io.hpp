#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hs/geometry.hpp"

namespace hs::io {

/// Header of a raster dump. Each field is stored as `<stem>.<field>.bin`,
/// little-endian float64, row-major with x fastest.
struct RasterHeader {
  double t = 0.0;
  std::optional<double> m;
  double h = 0.0;
  int dimension = 2;
  std::array<int, 3> shape{1, 1, 1};
  Point origin{};
  std::vector<std::string> fields;
};

struct Raster {
  RasterHeader header;
  std::map<std::string, std::vector<double>> fields;
};

RasterHeader header_for(const Grid& grid, double t, std::optional<double> m = std::nullopt);

/// Writes `<dir>/<stem>.json` and one binary file per field.
void write_raster(const std::filesystem::path& dir, const std::string& stem, RasterHeader header,
                  const std::map<std::string, const std::vector<double>*>& fields);

/// Reads a header written by write_raster together with its fields.
Raster read_raster(const std::filesystem::path& header_path);

void write_float64(const std::filesystem::path& path, const std::vector<double>& data);
std::vector<double> read_float64(const std::filesystem::path& path);

}  // namespace hs::io
