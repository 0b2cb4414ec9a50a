#include "varns/field_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "varns/error.hpp"

namespace varns {

static_assert(std::endian::native == std::endian::little,
              "field files are written in the native little-endian layout");

namespace {

constexpr char magic[4] = {'V', 'L', 'P', 'F'};
constexpr std::uint16_t version = 1;
constexpr std::uint16_t origin_flag = 1;

template <class T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  require(static_cast<bool>(in), "truncated field file: " + path, ErrorKind::io);
  return value;
}

bool has_origin(const GridSpec& g) {
  for (int a = 0; a < g.dimension; ++a)
    if (g.origin[a] != 0.0) return true;
  return false;
}

}  // namespace

void write_field_file(const std::string& path, const FieldFile& file) {
  file.grid.validate();
  require(!file.components.empty() && file.components.size() <= 255,
          "a field file holds 1 to 255 components");
  for (const auto& c : file.components)
    require(c.size() == file.grid.size(), "component size does not match grid",
            ErrorKind::grid_mismatch);
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot open for writing: " + path, ErrorKind::io);

  const GridSpec& g = file.grid;
  const bool origin = has_origin(g);
  out.write(magic, 4);
  put<std::uint16_t>(out, version);
  put<std::uint16_t>(out, static_cast<std::uint16_t>(g.dimension));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(g.topology));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(file.components.size()));
  put<std::uint16_t>(out, origin ? origin_flag : 0);
  const std::array<char, 20> reserved{};
  out.write(reserved.data(), reserved.size());
  for (int a = 0; a < g.dimension; ++a) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.resolution[a]));
    put<double>(out, g.extents[a]);
  }
  if (origin)
    for (int a = 0; a < g.dimension; ++a) put<double>(out, g.origin[a]);
  for (const auto& c : file.components)
    out.write(reinterpret_cast<const char*>(c.data()),
              static_cast<std::streamsize>(c.size() * sizeof(double)));
  require(static_cast<bool>(out), "write failed: " + path, ErrorKind::io);
}

FieldFile read_field_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open field file: " + path, ErrorKind::io);
  char head[4];
  in.read(head, 4);
  require(in && std::memcmp(head, magic, 4) == 0, "not a field file: " + path, ErrorKind::io);
  require(get<std::uint16_t>(in, path) == version, "unsupported field file version: " + path,
          ErrorKind::io);
  FieldFile file;
  GridSpec& g = file.grid;
  g.dimension = get<std::uint16_t>(in, path);
  require(g.dimension == 1 || g.dimension == 3, "bad dimension in field file: " + path,
          ErrorKind::io);
  const auto topo = get<std::uint8_t>(in, path);
  require(topo <= 1, "bad topology in field file: " + path, ErrorKind::io);
  g.topology = static_cast<Topology>(topo);
  const std::size_t count = get<std::uint8_t>(in, path);
  require(count >= 1, "field file has no components: " + path, ErrorKind::io);
  const auto flags = get<std::uint16_t>(in, path);
  std::array<char, 20> reserved{};
  in.read(reserved.data(), reserved.size());
  require(static_cast<bool>(in), "truncated field file: " + path, ErrorKind::io);
  g.extents = {1.0, 1.0, 1.0};
  g.resolution = {1, 1, 1};
  g.origin = {0.0, 0.0, 0.0};
  for (int a = 0; a < g.dimension; ++a) {
    g.resolution[a] = get<std::uint32_t>(in, path);
    g.extents[a] = get<double>(in, path);
  }
  if (flags & origin_flag)
    for (int a = 0; a < g.dimension; ++a) g.origin[a] = get<double>(in, path);
  try {
    g.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::io, std::string("invalid grid in field file ") + path + ": " + e.what());
  }
  file.components.resize(count);
  for (auto& c : file.components) {
    c.resize(g.size());
    in.read(reinterpret_cast<char*>(c.data()),
            static_cast<std::streamsize>(c.size() * sizeof(double)));
    require(static_cast<bool>(in), "truncated field data: " + path, ErrorKind::io);
  }
  return file;
}

void write_field(const std::string& path, const ScalarField& f) {
  write_field_file(path, {f.grid(), {{f.values().begin(), f.values().end()}}});
}

void write_field(const std::string& path, const VectorField& v) {
  FieldFile file{v.grid(), {}};
  for (int c = 0; c < 3; ++c)
    file.components.emplace_back(v.component(c).begin(), v.component(c).end());
  write_field_file(path, file);
}

ScalarField read_scalar_field(const std::string& path) {
  auto file = read_field_file(path);
  require(file.components.size() == 1, "expected a scalar field in " + path, ErrorKind::io);
  return ScalarField(file.grid, std::move(file.components[0]));
}

VectorField read_vector_field(const std::string& path) {
  auto file = read_field_file(path);
  require(file.components.size() == 3, "expected a three-component field in " + path,
          ErrorKind::io);
  return VectorField(file.grid, {std::move(file.components[0]), std::move(file.components[1]),
                                 std::move(file.components[2])});
}

}  // namespace varns
