#pragma once

#include <string>
#include <vector>

#include "varns/grid.hpp"

namespace varns {

/// Grid plus one or more components, as stored in a field file.
struct FieldFile {
  GridSpec grid;
  std::vector<std::vector<double>> components;
};

/// Binary layout (little-endian):
///   "VLPF", u16 version (1), u16 dimension, u8 topology, u8 component count,
///   u16 flags (bit 0: origin block present), 20 zero bytes;
///   per active axis: u32 resolution, f64 extent;
///   per active axis (if flagged): f64 origin;
///   components one after another, each in row-major order as f64.
void write_field_file(const std::string& path, const FieldFile& file);
FieldFile read_field_file(const std::string& path);

void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const VectorField& v);
ScalarField read_scalar_field(const std::string& path);
VectorField read_vector_field(const std::string& path);

}  // namespace varns
