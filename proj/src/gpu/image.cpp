#include "strata/gpu/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "strata/errors.hpp"

namespace strata::gpu {

Vec4f Image::sample(float u, float v) const {
    if (width == 0 || height == 0) return {1, 1, 1, 1};
    const float fx = std::clamp(u * width - 0.5f, 0.0f, static_cast<float>(width - 1));
    const float fy = std::clamp(v * height - 0.5f, 0.0f, static_cast<float>(height - 1));
    const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
    const int x1 = std::min(x0 + 1, width - 1), y1 = std::min(y0 + 1, height - 1);
    const float tx = fx - x0, ty = fy - y0;
    float out[4];
    for (int c = 0; c < 4; ++c) {
        const float a = at(x0, y0)[c] * (1 - tx) + at(x1, y0)[c] * tx;
        const float b = at(x0, y1)[c] * (1 - tx) + at(x1, y1)[c] * tx;
        out[c] = (a * (1 - ty) + b * ty) / 255.0f;
    }
    return {out[0], out[1], out[2], out[3]};
}

void writePng(const std::filesystem::path& path, const Image& image) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width);
    png.height = static_cast<png_uint_32>(image.height);
    png.format = PNG_FORMAT_RGBA;
    if (!png_image_write_to_file(&png, path.c_str(), 0, image.pixels.data(), 0, nullptr)) {
        throw std::runtime_error("failed to write PNG " + path.string() + ": " + png.message);
    }
}

Image readPng(const std::filesystem::path& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str())) {
        throw IngestError("failed to read PNG " + path.string() + ": " + png.message);
    }
    png.format = PNG_FORMAT_RGBA;
    Image image(static_cast<int>(png.width), static_cast<int>(png.height));
    if (!png_image_finish_read(&png, nullptr, image.pixels.data(), 0, nullptr)) {
        png_image_free(&png);
        throw IngestError("failed to decode PNG " + path.string() + ": " + png.message);
    }
    return image;
}

ImageComparison compareImages(const Image& a, const Image& b, int tolerance) {
    ImageComparison result;
    if (a.width != b.width || a.height != b.height) return result;
    const std::size_t pixels = static_cast<std::size_t>(a.width) * a.height;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < pixels; ++i) {
        int worst = 0;
        for (int c = 0; c < 4; ++c) {
            worst = std::max(worst, std::abs(int(a.pixels[i * 4 + c]) - int(b.pixels[i * 4 + c])));
        }
        result.maxChannelDifference = std::max(result.maxChannelDifference, worst);
        if (worst <= tolerance) ++ok;
    }
    result.fractionWithinTolerance = pixels == 0 ? 1.0 : static_cast<double>(ok) / static_cast<double>(pixels);
    return result;
}

}  // namespace strata::gpu
