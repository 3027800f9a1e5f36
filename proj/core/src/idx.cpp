#include "coherentfl/idx.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "coherentfl/errors.hpp"

namespace coherentfl::idx {

namespace {

constexpr std::uint8_t kUnsignedByteType = 0x08;
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 40;

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

std::size_t IdxTensor::element_count() const {
  std::size_t n = 1;
  for (const auto d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

IdxTensor parse(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4)
    throw IdxParseError("truncated magic header", bytes.size());
  if (bytes[0] != 0 || bytes[1] != 0)
    throw IdxParseError("bad magic: first two bytes must be zero", 0);
  if (bytes[2] != kUnsignedByteType)
    throw IdxParseError("unsupported element type code", 2);
  const std::size_t rank = bytes[3];
  if (rank == 0) throw IdxParseError("zero-dimensional tensor", 3);

  const std::size_t header = 4 + 4 * rank;
  if (bytes.size() < header)
    throw IdxParseError("truncated dimension list", bytes.size());

  IdxTensor tensor;
  tensor.shape.resize(rank);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    const std::size_t offset = 4 + 4 * i;
    tensor.shape[i] = read_be32(bytes.data() + offset);
    count *= tensor.shape[i];
    if (count > kMaxElements)
      throw IdxParseError("dimension product overflows the supported size", offset);
  }

  const std::size_t expected = header + static_cast<std::size_t>(count);
  if (bytes.size() < expected)
    throw IdxParseError("truncated payload", bytes.size());
  if (bytes.size() > expected)
    throw IdxParseError("trailing bytes after payload", expected);

  tensor.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
  return tensor;
}

std::vector<std::uint8_t> serialize(const IdxTensor& tensor) {
  if (tensor.shape.empty()) throw std::invalid_argument("cannot serialize a rank-0 tensor");
  if (tensor.shape.size() > 255)
    throw std::invalid_argument("rank exceeds the format's single-byte field");
  if (tensor.element_count() != tensor.data.size())
    throw std::invalid_argument("payload size disagrees with the shape");
  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 * tensor.shape.size() + tensor.data.size());
  out.push_back(0);
  out.push_back(0);
  out.push_back(kUnsignedByteType);
  out.push_back(static_cast<std::uint8_t>(tensor.shape.size()));
  for (const auto d : tensor.shape) write_be32(out, d);
  out.insert(out.end(), tensor.data.begin(), tensor.data.end());
  return out;
}

bool is_gzip(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 0x1F && bytes[1] == 0x8B;
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes) {
  if (!is_gzip(bytes)) throw std::invalid_argument("input is not gzip-wrapped");
  z_stream strm{};
  if (inflateInit2(&strm, 16 + 15) != Z_OK)
    throw std::runtime_error("zlib initialization failed");
  std::vector<std::uint8_t> out;
  std::uint8_t chunk[1 << 14];
  strm.next_in = const_cast<Bytef*>(bytes.data());
  strm.avail_in = static_cast<uInt>(bytes.size());
  int rc = Z_OK;
  do {
    strm.next_out = chunk;
    strm.avail_out = sizeof(chunk);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw std::runtime_error("gzip payload is corrupt");
    }
    out.insert(out.end(), chunk, chunk + (sizeof(chunk) - strm.avail_out));
  } while (rc != Z_STREAM_END);
  inflateEnd(&strm);
  return out;
}

IdxTensor load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (is_gzip(bytes)) {
    const auto raw = gunzip(bytes);
    return parse(raw);
  }
  return parse(bytes);
}

}  // namespace coherentfl::idx
