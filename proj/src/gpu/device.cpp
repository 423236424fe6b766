#include "strata/gpu/device.hpp"

#include <algorithm>
#include <cmath>

#include "strata/errors.hpp"

namespace strata::gpu {

RenderTarget::RenderTarget(int width, int height, bool offscreen)
    : width_(width), height_(height), offscreen_(offscreen) {
    if (width <= 0 || height <= 0) throw RangeError("render target dimensions must be positive");
    color.assign(static_cast<std::size_t>(width) * height * 4, 0);
    depth.assign(static_cast<std::size_t>(width) * height, 1.0f);
}

void RenderTarget::clear(Rgba8 c, float d) {
    for (std::size_t i = 0; i < color.size(); i += 4) {
        color[i] = c[0];
        color[i + 1] = c[1];
        color[i + 2] = c[2];
        color[i + 3] = c[3];
    }
    std::fill(depth.begin(), depth.end(), d);
}

Image RenderTarget::toImage() const {
    Image img(width_, height_);
    img.pixels = color;
    return img;
}

void Device::checkAlive() const {
    if (lost_) throw DeviceLostError("device lost");
}

BufferId Device::createBuffer(std::size_t floats) {
    checkAlive();
    const BufferId id = nextBuffer_++;
    buffers_[id].assign(floats, 0.0f);
    return id;
}

void Device::resizeBuffer(BufferId id, std::size_t floats) {
    checkAlive();
    auto it = buffers_.find(id);
    if (it == buffers_.end()) throw ResourceError("unknown buffer");
    it->second.assign(floats, 0.0f);
}

void Device::releaseBuffer(BufferId id) { buffers_.erase(id); }

void Device::uploadBuffer(BufferId id, std::size_t offsetFloats, std::span<const float> data) {
    checkAlive();
    auto it = buffers_.find(id);
    if (it == buffers_.end()) throw ResourceError("unknown buffer");
    if (offsetFloats + data.size() > it->second.size()) throw RangeError("buffer upload out of bounds");
    std::copy(data.begin(), data.end(), it->second.begin() + static_cast<std::ptrdiff_t>(offsetFloats));
    stats_.buffersUploaded += 1;
    stats_.bytesUploaded += data.size() * sizeof(float);
}

std::span<const float> Device::buffer(BufferId id) const {
    auto it = buffers_.find(id);
    if (it == buffers_.end()) return {};
    return it->second;
}

TextureId Device::createTexture(Image image) {
    checkAlive();
    const TextureId id = nextTexture_++;
    textures_[id] = std::move(image);
    return id;
}

void Device::releaseTexture(TextureId id) { textures_.erase(id); }

const Image& Device::texture(TextureId id) const {
    auto it = textures_.find(id);
    if (it == textures_.end()) throw ResourceError("unknown texture");
    return it->second;
}

void Device::simulateLoss() {
    lost_ = true;
    buffers_.clear();
    textures_.clear();
}

std::vector<std::uint8_t> Device::readPixels(const RenderTarget& target, const PixelRect& rect) {
    checkAlive();
    if (!target.offscreen()) throw RangeError("readPixels requires an offscreen target");
    if (rect.x < 0 || rect.y < 0 || rect.width < 0 || rect.height < 0 || rect.x + rect.width > target.width() ||
        rect.y + rect.height > target.height()) {
        throw RangeError("readPixels rect outside the target");
    }
    std::vector<std::uint8_t> out(static_cast<std::size_t>(rect.width) * rect.height * 4);
    for (int row = 0; row < rect.height; ++row) {
        const auto* src = target.color.data() + (static_cast<std::size_t>(rect.y + row) * target.width() + rect.x) * 4;
        std::copy(src, src + static_cast<std::ptrdiff_t>(rect.width) * 4,
                  out.begin() + static_cast<std::ptrdiff_t>(row) * rect.width * 4);
    }
    pixelsRead_ += static_cast<std::uint64_t>(rect.width) * static_cast<std::uint64_t>(rect.height);
    return out;
}

namespace {

struct ScreenVertex {
    double x, y;
    float z;
    float invW;
    std::array<float, kMaxVaryings> varyings;  // pre-divided by w
};

constexpr int kMaxClipped = 8;

// Sutherland-Hodgman against the near plane (z > -w).
int clipNear(const VertexOutput* in, int n, VertexOutput* out, int varyingCount) {
    int count = 0;
    for (int i = 0; i < n; ++i) {
        const VertexOutput& a = in[i];
        const VertexOutput& b = in[(i + 1) % n];
        const float da = a.clip.z + a.clip.w;
        const float db = b.clip.z + b.clip.w;
        const bool ina = da > 0.0f && a.clip.w > 1e-6f;
        const bool inb = db > 0.0f && b.clip.w > 1e-6f;
        if (ina) out[count++] = a;
        if (ina != inb) {
            const float t = da / (da - db);
            VertexOutput& v = out[count++];
            v.clip = {a.clip.x + t * (b.clip.x - a.clip.x), a.clip.y + t * (b.clip.y - a.clip.y),
                      a.clip.z + t * (b.clip.z - a.clip.z), a.clip.w + t * (b.clip.w - a.clip.w)};
            for (int k = 0; k < varyingCount; ++k) {
                v.varyings[static_cast<std::size_t>(k)] =
                    a.varyings[static_cast<std::size_t>(k)] + t * (b.varyings[static_cast<std::size_t>(k)] - a.varyings[static_cast<std::size_t>(k)]);
            }
        }
    }
    return count;
}

bool topLeft(const ScreenVertex& a, const ScreenVertex& b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    return dy > 0.0 || (dy == 0.0 && dx < 0.0);
}

struct Rasterizer {
    const Pipeline& pipeline;
    const DrawCommand& cmd;
    RenderTarget& target;
    int varyingCount;
    std::array<float, kMaxVaryings> scratch{};

    ScreenVertex toScreen(const VertexOutput& v) const {
        ScreenVertex s;
        const float iw = 1.0f / v.clip.w;
        s.x = (static_cast<double>(v.clip.x * iw) + 1.0) * 0.5 * target.width();
        s.y = (1.0 - static_cast<double>(v.clip.y * iw)) * 0.5 * target.height();
        s.z = (v.clip.z * iw + 1.0f) * 0.5f;
        s.invW = iw;
        for (int k = 0; k < varyingCount; ++k) s.varyings[static_cast<std::size_t>(k)] = v.varyings[static_cast<std::size_t>(k)] * iw;
        return s;
    }

    void triangle(std::uint32_t instance, ScreenVertex v0, ScreenVertex v1, ScreenVertex v2) {
        double area = (v1.x - v0.x) * (v2.y - v0.y) - (v1.y - v0.y) * (v2.x - v0.x);
        if (area == 0.0 || !std::isfinite(area)) return;
        if (area < 0.0) {
            std::swap(v1, v2);
            area = -area;
        }
        const int W = target.width(), H = target.height();
        const double minX = std::min({v0.x, v1.x, v2.x}), maxX = std::max({v0.x, v1.x, v2.x});
        const double minY = std::min({v0.y, v1.y, v2.y}), maxY = std::max({v0.y, v1.y, v2.y});
        const int x0 = std::max(0, static_cast<int>(std::floor(minX - 0.5)));
        const int x1 = std::min(W - 1, static_cast<int>(std::ceil(maxX - 0.5)));
        const int y0 = std::max(0, static_cast<int>(std::floor(minY - 0.5)));
        const int y1 = std::min(H - 1, static_cast<int>(std::ceil(maxY - 0.5)));
        if (x0 > x1 || y0 > y1) return;

        const bool tl0 = topLeft(v1, v2), tl1 = topLeft(v2, v0), tl2 = topLeft(v0, v1);
        const Uniforms& u = cmd.uniforms;
        const RasterState& st = cmd.state;
        const double invArea = 1.0 / area;

        for (int py = y0; py <= y1; ++py) {
            const double cy = py + 0.5;
            for (int px = x0; px <= x1; ++px) {
                const double cx = px + 0.5;
                // Edge functions: w0 is opposite v0 (edge v1 -> v2), and so on.
                const double w0 = (v2.x - v1.x) * (cy - v1.y) - (v2.y - v1.y) * (cx - v1.x);
                const double w1 = (v0.x - v2.x) * (cy - v2.y) - (v0.y - v2.y) * (cx - v2.x);
                const double w2 = (v1.x - v0.x) * (cy - v0.y) - (v1.y - v0.y) * (cx - v0.x);
                if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
                if ((w0 == 0.0 && !tl0) || (w1 == 0.0 && !tl1) || (w2 == 0.0 && !tl2)) continue;
                const float l0 = static_cast<float>(w0 * invArea);
                const float l1 = static_cast<float>(w1 * invArea);
                const float l2 = 1.0f - l0 - l1;
                const float z = l0 * v0.z + l1 * v1.z + l2 * v2.z - st.depthBias;
                const std::size_t pixel = static_cast<std::size_t>(py) * W + px;
                if (st.depthTest && !(z < target.depth[pixel])) continue;
                if (z < 0.0f) continue;

                const float iw = l0 * v0.invW + l1 * v1.invW + l2 * v2.invW;
                const float w = 1.0f / iw;
                for (int k = 0; k < varyingCount; ++k) {
                    const auto kk = static_cast<std::size_t>(k);
                    scratch[kk] = (l0 * v0.varyings[kk] + l1 * v1.varyings[kk] + l2 * v2.varyings[kk]) * w;
                }
                Vec4f rgba;
                if (!pipeline.fragment(cmd, instance, scratch.data(), rgba)) continue;

                std::uint8_t* dst = target.color.data() + pixel * 4;
                if (u.picking) {
                    const Rgba8 code = encodePickColor(u.layerSlot, instance);
                    std::copy(code.begin(), code.end(), dst);
                } else {
                    const float a = std::clamp(rgba.w * u.opacity, 0.0f, 1.0f);
                    const float src[4] = {std::clamp(rgba.x, 0.0f, 1.0f), std::clamp(rgba.y, 0.0f, 1.0f),
                                          std::clamp(rgba.z, 0.0f, 1.0f), a};
                    if (st.blend) {
                        for (int c = 0; c < 3; ++c) {
                            const float d = dst[c] / 255.0f;
                            dst[c] = static_cast<std::uint8_t>(std::lround((src[c] * a + d * (1.0f - a)) * 255.0f));
                        }
                        const float da = dst[3] / 255.0f;
                        dst[3] = static_cast<std::uint8_t>(std::lround((a + da * (1.0f - a)) * 255.0f));
                    } else {
                        for (int c = 0; c < 4; ++c) dst[c] = static_cast<std::uint8_t>(std::lround(src[c] * 255.0f));
                    }
                }
                if (st.depthWrite) target.depth[pixel] = z;
            }
        }
    }
};

}  // namespace

void Device::draw(const Pipeline& pipeline, const DrawCommand& cmd, RenderTarget& target) {
    checkAlive();
    if (cmd.mesh == nullptr || cmd.mesh->topology != Topology::triangles) {
        throw ResourceError("draw requires a triangle mesh");
    }
    if (cmd.uniforms.picking && (cmd.uniforms.layerSlot == 0)) throw RangeError("picking draw without a layer slot");
    stats_.drawCalls += 1;
    stats_.instancesSubmitted += cmd.instanceCount;

    const Mesh& mesh = *cmd.mesh;
    const int varyingCount = std::min(pipeline.varyingCount(), kMaxVaryings);
    Rasterizer raster{pipeline, cmd, target, varyingCount};
    std::vector<VertexOutput> outs(mesh.vertexCount());
    VertexOutput tri[3];
    VertexOutput clipped[kMaxClipped];

    for (std::uint32_t inst = 0; inst < cmd.instanceCount; ++inst) {
        for (std::uint32_t v = 0; v < mesh.vertexCount(); ++v) {
            outs[v] = VertexOutput{};
            pipeline.vertex(cmd, inst, v, outs[v]);
        }
        for (std::size_t t = 0; t + 2 < mesh.indices.size(); t += 3) {
            tri[0] = outs[mesh.indices[t]];
            tri[1] = outs[mesh.indices[t + 1]];
            tri[2] = outs[mesh.indices[t + 2]];
            const bool allInside = [&] {
                for (const auto& o : tri) {
                    if (!(o.clip.z + o.clip.w > 0.0f && o.clip.w > 1e-6f)) return false;
                }
                return true;
            }();
            if (allInside) {
                raster.triangle(inst, raster.toScreen(tri[0]), raster.toScreen(tri[1]), raster.toScreen(tri[2]));
                continue;
            }
            const int n = clipNear(tri, 3, clipped, varyingCount);
            for (int k = 1; k + 1 < n; ++k) {
                raster.triangle(inst, raster.toScreen(clipped[0]), raster.toScreen(clipped[k]),
                                raster.toScreen(clipped[k + 1]));
            }
        }
    }
}

}  // namespace strata::gpu
