#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strata/core/accessor.hpp"
#include "strata/core/layer_spec.hpp"
#include "strata/gpu/device.hpp"

namespace strata {

enum class CoordinateSystem { lnglat, cartesian };

CoordinateSystem coordinateSystemOf(const ValueMap& props);

/// Named counters of per-row problems (non-finite values, bad positions, missing glyphs, ...).
using Diagnostics = std::map<std::string, std::uint64_t>;

struct AttributeDescriptor {
    std::string name;
    int components = 1;
    /// Position attributes are projected to world units before packing (see CoordinateSystem).
    bool position = false;
    /// Keeps a second float array with the df64 tails.
    bool df64 = false;
    std::vector<double> defaults;
    /// Used when the layer spec has no accessor of this name.
    Accessor defaultAccessor;
    /// Props whose change invalidates this attribute.
    std::vector<std::string> propDependencies;
    /// Optional per-row check; returns false after replacing an unusable value (tallied as sanitizeTally).
    std::function<bool(std::span<double>)> sanitize;
    std::string sanitizeTally;
};

struct AttributeBuffer {
    AttributeDescriptor descriptor;
    std::size_t instanceCount = 0;
    std::vector<float> values;
    std::vector<float> low;  ///< df64 tails, same layout as values
    bool dirty = true;
    std::uint64_t fillCount = 0;
    std::uint64_t evaluations = 0;
    std::vector<RowRange> pendingUpload;
    gpu::BufferId valuesId = 0;
    gpu::BufferId lowId = 0;

    explicit AttributeBuffer(AttributeDescriptor d = {}) : descriptor(std::move(d)) {}

    [[nodiscard]] int components() const { return descriptor.components; }
    /// Reallocates for n instances; everything becomes dirty.
    void resize(std::size_t n);
};

/// Evaluates rows of `range` (default: all rows) through the accessor and packs them.
/// Returns the number of rows evaluated. Bad rows are written as zeros and tallied.
std::size_t fillAttribute(AttributeBuffer& buffer, const DataTable& table, const Accessor& accessor,
                          std::optional<RowRange> range, CoordinateSystem coords, Diagnostics& diagnostics);

/// Sends pending ranges to the device, creating device buffers when needed. Returns bytes uploaded.
std::uint64_t uploadAttribute(AttributeBuffer& buffer, gpu::Device& device);

}  // namespace strata
