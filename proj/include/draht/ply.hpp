#pragma once

#include <filesystem>
#include <optional>

#include "draht/point_cloud.hpp"

namespace draht {

enum class PlyFormat { kAscii, kBinaryLittleEndian };

struct PlyReadOptions {
  // overrides the inferred geometry depth; must cover every coordinate
  std::optional<int> depth;
};

// Reads the vertex element of an ASCII or binary little-endian PLY file.
// Colors come from red/green/blue when present, otherwise every other
// scalar vertex property becomes a generic channel.  The returned cloud is
// canonical.  Throws IoError on unreadable or malformed files and
// CodecError on duplicate positions.
VoxelizedPointCloud loadPly(
  const std::filesystem::path& path, const PlyReadOptions& options = {});

// Attributes are clamped to [0, 255] and rounded to uchar.  Three channel
// clouds are written as red/green/blue, others as attr0..attrN.
void writePly(
  const VoxelizedPointCloud& cloud,
  const std::filesystem::path& path,
  PlyFormat format = PlyFormat::kBinaryLittleEndian);

}  // namespace draht
