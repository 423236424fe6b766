#include "strata/core/attribute.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "strata/errors.hpp"
#include "strata/geomath/double_float.hpp"
#include "strata/geomath/mercator.hpp"

namespace strata {

CoordinateSystem coordinateSystemOf(const ValueMap& props) {
    const std::string cs = propString(props, "coordinateSystem", "lnglat");
    if (cs == "lnglat") return CoordinateSystem::lnglat;
    if (cs == "cartesian") return CoordinateSystem::cartesian;
    throw SpecError("coordinateSystem must be 'lnglat' or 'cartesian', got '" + cs + "'");
}

void AttributeBuffer::resize(std::size_t n) {
    instanceCount = n;
    const std::size_t len = n * static_cast<std::size_t>(descriptor.components);
    values.assign(len, 0.0f);
    if (descriptor.df64) low.assign(len, 0.0f);
    else low.clear();
    dirty = true;
    pendingUpload.clear();
}

namespace {

constexpr int kMaxComponents = 16;

bool fitsFloat(double v) {
    return std::isfinite(v) && std::fabs(v) <= static_cast<double>(std::numeric_limits<float>::max());
}

// splitDouble without the lower magnitude bound: tails below 2^-60 are dropped.
bool splitForFill(double v, float& hi, float& lo) {
    if (!fitsFloat(v)) return false;
    const double mag = std::fabs(v);
    if (mag != 0.0 && mag < std::ldexp(1.0, -60)) {
        hi = static_cast<float>(v);
        lo = 0.0f;
        return true;
    }
    if (mag > std::ldexp(1.0, 60)) return false;
    const DoubleFloat d = splitDouble(v);
    hi = d.hi;
    lo = d.lo;
    return true;
}

}  // namespace

std::size_t fillAttribute(AttributeBuffer& buffer, const DataTable& table, const Accessor& accessor,
                          std::optional<RowRange> range, CoordinateSystem coords, Diagnostics& diagnostics) {
    const auto& desc = buffer.descriptor;
    const int comps = desc.components;
    if (comps < 1 || comps > kMaxComponents) throw SpecError("attribute '" + desc.name + "' has a bad component count");
    if (!range && buffer.instanceCount != table.rowCount()) buffer.resize(table.rowCount());
    const RowRange r = range.value_or(RowRange{0, table.rowCount()});
    if (r.end > buffer.instanceCount || r.end > table.rowCount()) {
        throw RangeError("fill range [" + std::to_string(r.start) + "," + std::to_string(r.end) +
                         ") outside the attribute '" + desc.name + "'");
    }
    if (r.empty()) return 0;

    std::array<double, kMaxComponents> defaults{};
    for (int c = 0; c < comps && c < static_cast<int>(desc.defaults.size()); ++c) defaults[static_cast<std::size_t>(c)] = desc.defaults[static_cast<std::size_t>(c)];
    const BoundAccessor bound(accessor, table, std::span<const double>(defaults.data(), static_cast<std::size_t>(comps)));

    std::array<double, kMaxComponents> vals{};
    const std::span<double> out(vals.data(), static_cast<std::size_t>(comps));
    std::uint64_t badRows = 0;
    std::uint64_t badPositions = 0;
    std::uint64_t sanitized = 0;
    for (std::size_t row = r.start; row < r.end; ++row) {
        bound.evaluate(row, out);
        bool ok = true;
        if (desc.sanitize && !desc.sanitize(out)) ++sanitized;
        if (desc.position && comps >= 2) {
            if (coords == CoordinateSystem::lnglat) {
                const double lng = vals[0], lat = vals[1];
                if (!std::isfinite(lng) || !std::isfinite(lat) || std::fabs(lng) > 180.0 ||
                    std::fabs(lat) >= kMaxLatitude) {
                    ok = false;
                    ++badPositions;
                } else {
                    const WorldPoint w = lngLatToWorld({lng, lat});
                    vals[0] = w.x;
                    vals[1] = w.y;
                    if (comps >= 3) vals[2] *= worldUnitsPerMeter(lat);
                }
            }
        }
        float* hi = buffer.values.data() + row * static_cast<std::size_t>(comps);
        float* lo = desc.df64 ? buffer.low.data() + row * static_cast<std::size_t>(comps) : nullptr;
        if (ok) {
            for (int c = 0; c < comps && ok; ++c) {
                const double v = vals[static_cast<std::size_t>(c)];
                if (lo != nullptr) {
                    ok = splitForFill(v, hi[c], lo[c]);
                } else if (fitsFloat(v)) {
                    hi[c] = static_cast<float>(v);
                } else {
                    ok = false;
                }
            }
            if (!ok) ++badRows;
        }
        if (!ok) {
            for (int c = 0; c < comps; ++c) {
                hi[c] = 0.0f;
                if (lo != nullptr) lo[c] = 0.0f;
            }
        }
    }
    if (badRows > 0) diagnostics["nonFiniteRows"] += badRows;
    if (badPositions > 0) diagnostics["invalidPositions"] += badPositions;
    if (sanitized > 0) diagnostics[desc.sanitizeTally.empty() ? "sanitizedRows" : desc.sanitizeTally] += sanitized;

    const std::size_t n = r.size();
    buffer.fillCount += 1;
    buffer.evaluations += n;
    buffer.pendingUpload.push_back(r);
    buffer.pendingUpload = mergeRanges(std::move(buffer.pendingUpload));
    if (r.start == 0 && r.end == buffer.instanceCount) buffer.dirty = false;
    return n;
}

std::uint64_t uploadAttribute(AttributeBuffer& buffer, gpu::Device& device) {
    const std::size_t comps = static_cast<std::size_t>(buffer.components());
    const std::size_t len = buffer.values.size();
    auto ensure = [&](gpu::BufferId& id) {
        if (id == 0) {
            id = device.createBuffer(len);
        } else if (device.buffer(id).size() != len) {
            device.resizeBuffer(id, len);
        }
    };
    ensure(buffer.valuesId);
    if (buffer.descriptor.df64) ensure(buffer.lowId);
    std::uint64_t bytes = 0;
    for (const RowRange& r : buffer.pendingUpload) {
        const std::size_t off = r.start * comps;
        const std::size_t count = r.size() * comps;
        device.uploadBuffer(buffer.valuesId, off, std::span<const float>(buffer.values.data() + off, count));
        bytes += count * sizeof(float);
        if (buffer.descriptor.df64) {
            device.uploadBuffer(buffer.lowId, off, std::span<const float>(buffer.low.data() + off, count));
            bytes += count * sizeof(float);
        }
    }
    buffer.pendingUpload.clear();
    return bytes;
}

}  // namespace strata
