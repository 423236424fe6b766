#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "strata/errors.hpp"

namespace strata {

using Rgba8 = std::array<std::uint8_t, 4>;

inline constexpr std::uint32_t kMaxPickIndex = (1u << 24) - 2;  // index + 1 must fit in 24 bits
inline constexpr int kMaxPickableLayers = 255;

struct PickCode {
    std::uint8_t layerSlot = 0;
    std::uint32_t index = 0;
    friend constexpr bool operator==(const PickCode&, const PickCode&) = default;
};

/// RGB carries index + 1 little-endian (0 is "no object"); A carries the layer slot.
inline Rgba8 encodePickColor(int layerSlot, std::uint32_t index) {
    if (layerSlot < 1 || layerSlot > kMaxPickableLayers) throw RangeError("pick layer slot outside 1..255");
    if (index > kMaxPickIndex) throw RangeError("pick index exceeds 2^24 - 2");
    const std::uint32_t code = index + 1;
    return {static_cast<std::uint8_t>(code & 0xFF), static_cast<std::uint8_t>((code >> 8) & 0xFF),
            static_cast<std::uint8_t>((code >> 16) & 0xFF), static_cast<std::uint8_t>(layerSlot)};
}

inline std::optional<PickCode> decodePickColor(const Rgba8& rgba) {
    const std::uint32_t code = rgba[0] | (static_cast<std::uint32_t>(rgba[1]) << 8) |
                               (static_cast<std::uint32_t>(rgba[2]) << 16);
    if (code == 0) return std::nullopt;
    return PickCode{rgba[3], code - 1};
}

}  // namespace strata
