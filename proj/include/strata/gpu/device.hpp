#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "strata/geometry/mesh.hpp"
#include "strata/geomath/viewport.hpp"
#include "strata/gpu/image.hpp"
#include "strata/picking/encoding.hpp"

namespace strata::gpu {

class DeviceLostError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FrameStats {
    std::uint64_t drawCalls = 0;
    std::uint64_t instancesSubmitted = 0;
    std::uint64_t buffersUploaded = 0;
    std::uint64_t bytesUploaded = 0;
};

struct PixelRect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

/// Color (RGBA8) and depth (32-bit float) attachments.
class RenderTarget {
public:
    RenderTarget(int width, int height, bool offscreen = true);

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] bool offscreen() const { return offscreen_; }

    void clear(Rgba8 color, float depth = 1.0f);
    [[nodiscard]] Image toImage() const;

    std::vector<std::uint8_t> color;
    std::vector<float> depth;

private:
    int width_;
    int height_;
    bool offscreen_;
};

using BufferId = std::uint32_t;
using TextureId = std::uint32_t;

struct RasterState {
    bool depthTest = true;
    bool depthWrite = true;
    bool blend = false;
    float depthBias = 0.0f;  ///< subtracted from window depth (polygon offset)
};

/// Instance attribute as bound to a draw: hi holds values, lo the df64 tails (may be empty).
struct BoundAttribute {
    std::span<const float> hi;
    std::span<const float> lo;
    int components = 1;

    [[nodiscard]] float get(std::uint32_t instance, int c) const {
        return hi[static_cast<std::size_t>(instance) * static_cast<std::size_t>(components) + static_cast<std::size_t>(c)];
    }
    [[nodiscard]] DoubleFloat getDf(std::uint32_t instance, int c) const {
        const std::size_t i = static_cast<std::size_t>(instance) * static_cast<std::size_t>(components) + static_cast<std::size_t>(c);
        return {hi[i], lo.empty() ? 0.0f : lo[i]};
    }
};

struct Uniforms {
    ShaderProjection projection;
    bool picking = false;
    std::uint8_t layerSlot = 0;
    float opacity = 1.0f;
    std::array<float, 16> params{};
    const Image* texture = nullptr;
};

inline constexpr int kMaxVaryings = 12;

struct VertexOutput {
    Vec4f clip;
    std::array<float, kMaxVaryings> varyings{};
};

struct DrawCommand;

/// A shader program: per-vertex and per-fragment stages evaluated in 32-bit float.
class Pipeline {
public:
    virtual ~Pipeline() = default;
    virtual void vertex(const DrawCommand& cmd, std::uint32_t instance, std::uint32_t vertexIndex,
                        VertexOutput& out) const = 0;
    /// Returns false to discard. `rgba` is straight alpha in [0,1].
    virtual bool fragment(const DrawCommand& cmd, std::uint32_t instance, const float* varyings,
                          Vec4f& rgba) const = 0;
    [[nodiscard]] virtual int varyingCount() const { return 4; }
};

struct DrawCommand {
    const Mesh* mesh = nullptr;
    std::uint32_t instanceCount = 0;
    std::vector<BoundAttribute> attributes;
    Uniforms uniforms;
    RasterState state;
};

/// Software device: buffers and textures live in host memory; draws are rasterized on
/// the CPU with GPU semantics (float vertex math, depth test, straight-alpha blending,
/// index-colored output when the picking uniform is set).
class Device {
public:
    BufferId createBuffer(std::size_t floats);
    void resizeBuffer(BufferId id, std::size_t floats);
    void releaseBuffer(BufferId id);
    /// Copies `data` into the buffer at `offsetFloats`; counts exactly data.size() * 4 bytes.
    void uploadBuffer(BufferId id, std::size_t offsetFloats, std::span<const float> data);
    [[nodiscard]] std::span<const float> buffer(BufferId id) const;
    [[nodiscard]] std::size_t bufferCount() const { return buffers_.size(); }

    TextureId createTexture(Image image);
    void releaseTexture(TextureId id);
    [[nodiscard]] const Image& texture(TextureId id) const;

    void draw(const Pipeline& pipeline, const DrawCommand& cmd, RenderTarget& target);

    /// Row-major, top-left origin, 4 bytes per pixel. Offscreen targets only.
    std::vector<std::uint8_t> readPixels(const RenderTarget& target, const PixelRect& rect);

    [[nodiscard]] const FrameStats& stats() const { return stats_; }
    void resetStats() { stats_ = {}; }
    [[nodiscard]] std::uint64_t pixelsRead() const { return pixelsRead_; }

    /// Test hook: drops every resource and fails calls until restore().
    void simulateLoss();
    void restore() { lost_ = false; }
    [[nodiscard]] bool lost() const { return lost_; }

private:
    void checkAlive() const;

    std::unordered_map<BufferId, std::vector<float>> buffers_;
    std::unordered_map<TextureId, Image> textures_;
    BufferId nextBuffer_ = 1;
    TextureId nextTexture_ = 1;
    FrameStats stats_;
    std::uint64_t pixelsRead_ = 0;
    bool lost_ = false;
};

}  // namespace strata::gpu
