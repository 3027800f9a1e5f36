#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace coherentfl::idx {

// Dense unsigned-byte tensor in the classic big-endian IDX layout:
// magic (00 00 08 <rank>), rank big-endian u32 dims, raw payload.
struct IdxTensor {
  std::vector<std::uint32_t> shape;
  std::vector<std::uint8_t> data;

  std::size_t rank() const { return shape.size(); }
  std::size_t element_count() const;
};

// Strict parser: rejects bad magic, unsupported element types, zero rank,
// dimension-product overflow, truncated payloads, and trailing bytes. Every
// rejection is an IdxParseError carrying the byte offset of the problem.
IdxTensor parse(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const IdxTensor& tensor);

// Gzip wrapping detected by the 1F 8B magic bytes.
bool is_gzip(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes);

// Reads a file, transparently un-gzipping when wrapped, and parses it.
IdxTensor load_file(const std::string& path);

}  // namespace coherentfl::idx
