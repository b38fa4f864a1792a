#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nematic/grid.hpp"
#include "nematic/state.hpp"

namespace nematic {

struct SnapshotField {
  std::string name;
  std::uint32_t components = 0;
  std::vector<double> data;  ///< component-major, last axis fastest
};

/// Binary field dump:
///   "NEMF1\n", u32 dim, dim x u32 n, u32 field_count,
///   per field: u32 name_length, name bytes, u32 components,
///   then per field the f64 samples. All integers and floats little-endian.
struct Snapshot {
  std::vector<std::uint32_t> n;
  std::vector<SnapshotField> fields;

  std::uint32_t dim() const { return static_cast<std::uint32_t>(n.size()); }
  std::size_t points() const;
  const SnapshotField* find(const std::string& name) const;
};

std::vector<unsigned char> encode_snapshot(const Snapshot& s);
/// Throws IoError on malformed input.
Snapshot decode_snapshot(const std::vector<unsigned char>& bytes);

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);
/// Header only (field data left empty).
Snapshot read_snapshot_header(const std::string& path);

/// d and u, plus any extra fields (e.g. mu, v) given as base-lattice samples.
Snapshot snapshot_of(const StepState& state, const std::vector<std::pair<std::string, const VectorField*>>& extra = {});

}  // namespace nematic
