#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecmh {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Lower-case hex, first byte first.
std::string to_hex(ByteView bytes);

/// Accepts upper or lower case; throws InvalidEncoding on odd length or bad digits.
Bytes from_hex(std::string_view hex);

/// Hex of the byte string read in reverse order. Used for little-endian
/// packed values that are printed most-significant digit first.
std::string to_hex_reversed(ByteView bytes);
Bytes from_hex_reversed(std::string_view hex);

}  // namespace ecmh
