#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "strata/gpu/image.hpp"

namespace strata {

struct GlyphMetrics {
    int x = 0;  ///< atlas rect, pixels
    int y = 0;
    int width = 0;
    int height = 0;
    double xOffset = 0.0;  ///< from the pen position to the rect's left edge
    double yOffset = 0.0;  ///< from the top of the line box to the rect's top edge
    double advance = 0.0;
};

struct GlyphAtlas {
    std::shared_ptr<const gpu::Image> image;
    double fontSize = 32.0;
    double lineHeight = 40.0;
    std::map<char, GlyphMetrics> glyphs;
};

/// Loads the atlas image and its metrics sidecar (JSON). Cached per path pair.
std::shared_ptr<const GlyphAtlas> loadGlyphAtlas(const std::filesystem::path& image,
                                                 const std::filesystem::path& metrics);

enum class TextAnchor { start, middle, end };

struct GlyphPlacement {
    char glyph = '?';
    double penX = 0.0;  ///< pen position relative to the anchor, in font pixels
};

/// Left-to-right layout. Characters missing from the atlas become '?' and are counted in `missing`.
std::vector<GlyphPlacement> layoutText(const GlyphAtlas& atlas, const std::string& text, TextAnchor anchor,
                                       std::size_t& missing);

}  // namespace strata
