#include "draht/ply.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "draht/error.hpp"

namespace draht {

namespace {

  enum class ScalarType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

  struct PlyProperty {
    std::string name;
    ScalarType type;
    bool isList = false;
    ScalarType countType = ScalarType::kUint8;
  };

  struct PlyElement {
    std::string name;
    size_t count = 0;
    std::vector<PlyProperty> properties;
  };

  //--------------------------------------------------------------------------

  ScalarType
  parseType(const std::string& t)
  {
    if (t == "char" || t == "int8") return ScalarType::kInt8;
    if (t == "uchar" || t == "uint8") return ScalarType::kUint8;
    if (t == "short" || t == "int16") return ScalarType::kInt16;
    if (t == "ushort" || t == "uint16") return ScalarType::kUint16;
    if (t == "int" || t == "int32") return ScalarType::kInt32;
    if (t == "uint" || t == "uint32") return ScalarType::kUint32;
    if (t == "float" || t == "float32") return ScalarType::kFloat32;
    if (t == "double" || t == "float64") return ScalarType::kFloat64;
    throw IoError("malformed PLY: unknown property type '" + t + "'");
  }

  size_t
  typeSize(ScalarType t)
  {
    switch (t) {
    case ScalarType::kInt8:
    case ScalarType::kUint8: return 1;
    case ScalarType::kInt16:
    case ScalarType::kUint16: return 2;
    case ScalarType::kInt32:
    case ScalarType::kUint32:
    case ScalarType::kFloat32: return 4;
    case ScalarType::kFloat64: return 8;
    }
    return 0;
  }

  //--------------------------------------------------------------------------

  template<typename T>
  T
  loadLE(const uint8_t* p)
  {
    T v;
    std::memcpy(&v, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
      auto* b = reinterpret_cast<uint8_t*>(&v);
      std::reverse(b, b + sizeof(T));
    }
    return v;
  }

  double
  readBinaryScalar(ScalarType t, const uint8_t* p)
  {
    switch (t) {
    case ScalarType::kInt8: return loadLE<int8_t>(p);
    case ScalarType::kUint8: return loadLE<uint8_t>(p);
    case ScalarType::kInt16: return loadLE<int16_t>(p);
    case ScalarType::kUint16: return loadLE<uint16_t>(p);
    case ScalarType::kInt32: return loadLE<int32_t>(p);
    case ScalarType::kUint32: return loadLE<uint32_t>(p);
    case ScalarType::kFloat32: return loadLE<float>(p);
    case ScalarType::kFloat64: return loadLE<double>(p);
    }
    return 0;
  }

  //--------------------------------------------------------------------------
  // Sequential reader over the bytes that follow end_header.

  class BinaryCursor {
  public:
    BinaryCursor(const std::vector<uint8_t>& buf, size_t pos) : buf_(buf), pos_(pos) {}

    double
    scalar(ScalarType t)
    {
      const size_t n = typeSize(t);
      if (pos_ + n > buf_.size())
        throw IoError("malformed PLY: unexpected end of binary data");
      double v = readBinaryScalar(t, buf_.data() + pos_);
      pos_ += n;
      return v;
    }

  private:
    const std::vector<uint8_t>& buf_;
    size_t pos_;
  };

  //--------------------------------------------------------------------------

  int32_t
  toCoordinate(double v)
  {
    if (!std::isfinite(v) || v != std::floor(v))
      throw IoError("malformed PLY: non-integer coordinate");
    if (v < 0)
      throw IoError("malformed PLY: negative coordinate");
    if (v >= double(int64_t(1) << kMaxDepth))
      throw IoError("malformed PLY: coordinate exceeds supported depth");
    return int32_t(v);
  }

}  // namespace

//============================================================================

VoxelizedPointCloud
loadPly(const std::filesystem::path& path, const PlyReadOptions& options)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  std::vector<uint8_t> buf(
    (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  // header
  size_t pos = 0;
  auto nextLine = [&]() -> std::string {
    if (pos >= buf.size())
      throw IoError("malformed PLY: missing end_header");
    size_t end = pos;
    while (end < buf.size() && buf[end] != '\n')
      end++;
    std::string line(buf.begin() + pos, buf.begin() + end);
    pos = std::min(end + 1, buf.size());
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    return line;
  };

  if (nextLine() != "ply")
    throw IoError("malformed PLY: missing 'ply' magic in '" + path.string() + "'");

  bool binary = false;
  bool haveFormat = false;
  std::vector<PlyElement> elements;
  for (;;) {
    std::string line = nextLine();
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword.empty() || keyword == "comment" || keyword == "obj_info")
      continue;
    if (keyword == "end_header")
      break;
    if (keyword == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "ascii")
        binary = false;
      else if (fmt == "binary_little_endian")
        binary = true;
      else
        throw IoError("unsupported PLY format '" + fmt + "'");
      haveFormat = true;
    } else if (keyword == "element") {
      PlyElement e;
      long long count = -1;
      ls >> e.name >> count;
      if (!ls || count < 0)
        throw IoError("malformed PLY: bad element line '" + line + "'");
      e.count = size_t(count);
      elements.push_back(std::move(e));
    } else if (keyword == "property") {
      if (elements.empty())
        throw IoError("malformed PLY: property before element");
      PlyProperty p;
      std::string type;
      ls >> type;
      if (type == "list") {
        std::string countType, itemType;
        ls >> countType >> itemType;
        p.isList = true;
        p.countType = parseType(countType);
        p.type = parseType(itemType);
      } else {
        p.type = parseType(type);
      }
      ls >> p.name;
      if (!ls)
        throw IoError("malformed PLY: bad property line '" + line + "'");
      elements.back().properties.push_back(p);
    } else {
      throw IoError("malformed PLY: unknown header keyword '" + keyword + "'");
    }
  }
  if (!haveFormat)
    throw IoError("malformed PLY: missing format line");

  auto vertexIt = std::find_if(elements.begin(), elements.end(), [](const auto& e) {
    return e.name == "vertex";
  });
  if (vertexIt == elements.end())
    throw IoError("malformed PLY: no vertex element");
  const PlyElement& vertex = *vertexIt;

  // map properties to roles
  int xyz[3] = {-1, -1, -1};
  int rgb[3] = {-1, -1, -1};
  std::vector<int> generic;
  for (int i = 0; i < int(vertex.properties.size()); i++) {
    const auto& p = vertex.properties[i];
    if (p.isList) {
      if (p.name == "x" || p.name == "y" || p.name == "z")
        throw IoError("malformed PLY: list-valued coordinate");
      continue;
    }
    if (p.name == "x") xyz[0] = i;
    else if (p.name == "y") xyz[1] = i;
    else if (p.name == "z") xyz[2] = i;
    else if (p.name == "red") rgb[0] = i;
    else if (p.name == "green") rgb[1] = i;
    else if (p.name == "blue") rgb[2] = i;
    else generic.push_back(i);
  }
  for (int k = 0; k < 3; k++)
    if (xyz[k] < 0)
      throw IoError("malformed PLY: missing x/y/z vertex property");

  std::vector<int> channels;
  const bool hasRgb = rgb[0] >= 0 && rgb[1] >= 0 && rgb[2] >= 0;
  if (hasRgb)
    channels.assign(rgb, rgb + 3);
  else
    channels = generic;

  VoxelizedPointCloud cloud;
  cloud.positions.resize(vertex.count);
  cloud.attributes = Attributes(vertex.count, channels.size());
  cloud.channelPeak.assign(channels.size(), 255.0);

  std::vector<double> values(vertex.properties.size());
  auto storeVertex = [&](size_t row) {
    for (int k = 0; k < 3; k++)
      cloud.positions[row][k] = toCoordinate(values[xyz[k]]);
    for (size_t c = 0; c < channels.size(); c++)
      cloud.attributes(row, c) = values[channels[c]];
  };

  if (binary) {
    BinaryCursor cur(buf, pos);
    for (const auto& e : elements) {
      const bool isVertex = &e == &vertex;
      for (size_t row = 0; row < e.count; row++) {
        for (size_t i = 0; i < e.properties.size(); i++) {
          const auto& p = e.properties[i];
          if (p.isList) {
            double n = cur.scalar(p.countType);
            if (n < 0)
              throw IoError("malformed PLY: negative list length");
            for (size_t j = 0; j < size_t(n); j++)
              cur.scalar(p.type);
            continue;
          }
          double v = cur.scalar(p.type);
          if (isVertex)
            values[i] = v;
        }
        if (isVertex)
          storeVertex(row);
      }
    }
  } else {
    std::string body(buf.begin() + pos, buf.end());
    std::istringstream bs(body);
    auto readToken = [&]() {
      std::string tok;
      if (!(bs >> tok))
        throw IoError("malformed PLY: unexpected end of ASCII data");
      try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size())
          throw IoError("malformed PLY: bad number '" + tok + "'");
        return v;
      } catch (const std::logic_error&) {
        throw IoError("malformed PLY: bad number '" + tok + "'");
      }
    };
    for (const auto& e : elements) {
      const bool isVertex = &e == &vertex;
      for (size_t row = 0; row < e.count; row++) {
        for (size_t i = 0; i < e.properties.size(); i++) {
          const auto& p = e.properties[i];
          if (p.isList) {
            double n = readToken();
            for (size_t j = 0; j < size_t(std::max(0.0, n)); j++)
              readToken();
            continue;
          }
          double v = readToken();
          if (isVertex)
            values[i] = v;
        }
        if (isVertex)
          storeVertex(row);
      }
    }
  }

  const int inferred = inferDepth(cloud.positions);
  if (options.depth) {
    if (*options.depth < inferred)
      throw IoError(
        "depth " + std::to_string(*options.depth)
        + " does not cover the point coordinates (need "
        + std::to_string(inferred) + ")");
    cloud.depth = *options.depth;
  } else {
    cloud.depth = inferred;
  }
  return canonicalize(std::move(cloud));
}

//============================================================================

void
writePly(
  const VoxelizedPointCloud& cloud,
  const std::filesystem::path& path,
  PlyFormat format)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write '" + path.string() + "'");

  const size_t channels = cloud.channels();
  out << "ply\n";
  out << (format == PlyFormat::kAscii ? "format ascii 1.0\n"
                                      : "format binary_little_endian 1.0\n");
  out << "element vertex " << cloud.size() << "\n";
  out << "property int x\nproperty int y\nproperty int z\n";
  if (channels == 3) {
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  } else {
    for (size_t c = 0; c < channels; c++)
      out << "property uchar attr" << c << "\n";
  }
  out << "end_header\n";

  auto toByte = [](double v) -> uint8_t {
    if (!(v > 0))
      return 0;
    if (v >= 255)
      return 255;
    return uint8_t(std::lround(v));
  };

  if (format == PlyFormat::kAscii) {
    for (size_t i = 0; i < cloud.size(); i++) {
      const auto& p = cloud.positions[i];
      out << p[0] << ' ' << p[1] << ' ' << p[2];
      for (size_t c = 0; c < channels; c++)
        out << ' ' << int(toByte(cloud.attributes(i, c)));
      out << '\n';
    }
  } else {
    std::vector<uint8_t> rec(12 + channels);
    for (size_t i = 0; i < cloud.size(); i++) {
      for (int k = 0; k < 3; k++) {
        uint32_t v = uint32_t(cloud.positions[i][k]);
        for (int b = 0; b < 4; b++)
          rec[k * 4 + b] = uint8_t(v >> (8 * b));
      }
      for (size_t c = 0; c < channels; c++)
        rec[12 + c] = toByte(cloud.attributes(i, c));
      out.write(reinterpret_cast<const char*>(rec.data()), std::streamsize(rec.size()));
    }
  }
  if (!out)
    throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace draht
