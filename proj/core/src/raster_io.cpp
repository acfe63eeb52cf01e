#include "hs/raster_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hs/errors.hpp"
#include "json.hpp"

namespace hs::io {

namespace {

std::uint64_t swap_if_big(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0x00000000FFFFFFFFull) << 32) | ((v & 0xFFFFFFFF00000000ull) >> 32);
    v = ((v & 0x0000FFFF0000FFFFull) << 16) | ((v & 0xFFFF0000FFFF0000ull) >> 16);
    v = ((v & 0x00FF00FF00FF00FFull) << 8) | ((v & 0xFF00FF00FF00FF00ull) >> 8);
  }
  return v;
}

}  // namespace

RasterHeader header_for(const Grid& grid, double t, std::optional<double> m) {
  RasterHeader h;
  h.t = t;
  h.m = m;
  h.h = grid.h();
  h.dimension = grid.dimension();
  h.shape = grid.shape();
  h.origin = grid.origin();
  return h;
}

void write_float64(const std::filesystem::path& path, const std::vector<double>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (double v : data) {
    std::uint64_t bits = swap_if_big(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  if (!out) throw ConfigError("failed writing " + path.string());
}

std::vector<double> read_float64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::vector<double> out;
  std::uint64_t bits;
  while (in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
    out.push_back(std::bit_cast<double>(swap_if_big(bits)));
  }
  return out;
}

void write_raster(const std::filesystem::path& dir, const std::string& stem, RasterHeader header,
                  const std::map<std::string, const std::vector<double>*>& fields) {
  std::filesystem::create_directories(dir);
  header.fields.clear();
  for (const auto& [name, data] : fields) {
    header.fields.push_back(name);
    write_float64(dir / (stem + "." + name + ".bin"), *data);
  }
  nlohmann::json j;
  j["t"] = header.t;
  if (header.m) j["m"] = *header.m; else j["m"] = nullptr;
  j["h"] = header.h;
  j["dimension"] = header.dimension;
  j["shape"] = std::vector<int>(header.shape.begin(), header.shape.begin() + header.dimension);
  j["origin"] = std::vector<double>(header.origin.begin(), header.origin.begin() + header.dimension);
  j["fields"] = header.fields;
  j["encoding"] = "float64-le-row-major-x-fastest";
  std::ofstream out(dir / (stem + ".json"));
  if (!out) throw ConfigError("cannot write raster header in " + dir.string());
  out << j.dump(2) << '\n';
}

Raster read_raster(const std::filesystem::path& header_path) {
  std::ifstream in(header_path);
  if (!in) throw ConfigError("cannot open " + header_path.string());
  nlohmann::json j;
  try {
    in >> j;
    Raster r;
    r.header.t = j.at("t").get<double>();
    if (!j.at("m").is_null()) r.header.m = j.at("m").get<double>();
    r.header.h = j.at("h").get<double>();
    r.header.dimension = j.at("dimension").get<int>();
    const auto shape = j.at("shape").get<std::vector<int>>();
    const auto origin = j.at("origin").get<std::vector<double>>();
    for (std::size_t d = 0; d < shape.size() && d < 3; ++d) {
      r.header.shape[d] = shape[d];
      r.header.origin[d] = origin.at(d);
    }
    r.header.fields = j.at("fields").get<std::vector<std::string>>();
    std::string stem = header_path.stem().string();
    const std::size_t count = static_cast<std::size_t>(r.header.shape[0]) * r.header.shape[1] * r.header.shape[2];
    for (const auto& name : r.header.fields) {
      auto data = read_float64(header_path.parent_path() / (stem + "." + name + ".bin"));
      if (data.size() != count) throw ConfigError("raster field " + name + " has the wrong length");
      r.fields.emplace(name, std::move(data));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad raster header: ") + e.what());
  }
}

}  // namespace hs::io
