#include "vrt/digest.h"

namespace vrt {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t packet_digest(const DataPacket& p) {
  return fnv1a64(p.immutable_payload);
}

}  // namespace vrt
