#ifndef VRT_DIGEST_H
#define VRT_DIGEST_H

#include <cstdint>
#include <span>

#include "vrt/messages.h"

namespace vrt {

// 64-bit FNV-1a over a byte span.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

// Digest over the immutable payload only; the mutable header and hop count
// never influence the result.
std::uint64_t packet_digest(const DataPacket& p);

}  // namespace vrt

#endif
