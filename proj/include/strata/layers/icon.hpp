#pragma once

#include <array>
#include <filesystem>
#include <memory>

#include "strata/gpu/image.hpp"

namespace strata {

/// Texture rectangle {u0, v0, u1, v1} (v down) of cell `index` in a rows x cols atlas, row-major.
std::array<float, 4> iconUvRect(int index, int rows, int cols);

/// Pulse factor of the decorator layer: 1 + (amplitude - 1) * (1 - cos(phase)) / 2.
double pulseScale(double amplitude, double phase);

/// Images are decoded once per path and shared.
std::shared_ptr<const gpu::Image> loadImageCached(const std::filesystem::path& path);

}  // namespace strata
