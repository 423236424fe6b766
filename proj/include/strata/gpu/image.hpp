#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "strata/geomath/linalg.hpp"

namespace strata::gpu {

/// 8-bit RGBA image, row-major, top-left origin.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 4, 0) {}

    [[nodiscard]] std::uint8_t* at(int x, int y) { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4; }
    [[nodiscard]] const std::uint8_t* at(int x, int y) const {
        return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4;
    }
    /// Bilinear sample with clamp-to-edge; uv in [0,1], v down. Returns straight RGBA in [0,1].
    [[nodiscard]] Vec4f sample(float u, float v) const;
};

void writePng(const std::filesystem::path& path, const Image& image);
Image readPng(const std::filesystem::path& path);

struct ImageComparison {
    double fractionWithinTolerance = 0.0;
    int maxChannelDifference = 0;
};

/// Per-pixel comparison: a pixel matches when every channel differs by <= tolerance.
ImageComparison compareImages(const Image& a, const Image& b, int tolerance);

}  // namespace strata::gpu
