#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "tracube/types.hpp"

namespace tracube {

// One time instant of relative movement packed into a 32-bit word:
// bits [31..20] zig-zag(dx), [19..8] zig-zag(dy), [7..0] zig-zag(dz).
// The three largest 32-bit values are reserved as event codewords; the legal
// movement domain (|dx|,|dy| <= 2047, |dz| <= 127) never reaches them.
namespace movement {

constexpr uint32_t cw_disappear = 0xFFFFFFFFu;      // gone until the period ends
constexpr uint32_t cw_abs_appear = 0xFFFFFFFEu;     // first seen mid-period, absolute position
constexpr uint32_t cw_rel_disappear = 0xFFFFFFFDu;  // gone and back within the period

constexpr int32_t max_xy = 2047;
constexpr int32_t max_z = 127;

constexpr bool is_codeword(uint32_t code) { return code >= cw_rel_disappear; }

constexpr uint32_t zigzag_encode(int32_t n) {
    return (static_cast<uint32_t>(n) << 1) ^ static_cast<uint32_t>(n >> 31);
}

constexpr int32_t zigzag_decode(uint32_t u) {
    return static_cast<int32_t>(u >> 1) ^ -static_cast<int32_t>(u & 1);
}

constexpr bool packable(const delta& d) {
    return d.x >= -max_xy && d.x <= max_xy && d.y >= -max_xy && d.y <= max_xy &&
           d.z >= -max_z && d.z <= max_z;
}

constexpr uint32_t pack_unchecked(const delta& d) {
    return zigzag_encode(d.x) << 20 | zigzag_encode(d.y) << 8 | zigzag_encode(d.z);
}

constexpr std::optional<uint32_t> try_pack(const delta& d) {
    if (!packable(d)) return std::nullopt;
    return pack_unchecked(d);
}

inline uint32_t pack(const delta& d) {
    auto code = try_pack(d);
    if (!code) throw std::range_error("movement::pack: delta outside 12/12/8 range");
    return *code;
}

constexpr delta unpack(uint32_t code) {
    return delta{zigzag_decode(code >> 20), zigzag_decode((code >> 8) & 0xFFF),
                 zigzag_decode(code & 0xFF)};
}

}  // namespace movement
}  // namespace tracube
