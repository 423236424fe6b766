#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "strata/core/data_table.hpp"
#include "strata/geomath/linalg.hpp"

namespace strata {

struct GraphData {
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    std::vector<Vec2> positions;  ///< NaN when the input gives none
    std::vector<int> groups;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    [[nodiscard]] std::size_t nodeCount() const { return ids.size(); }
};

struct LayoutParams {
    double alpha = 1.0;
    double alphaMin = 0.001;
    double alphaDecay = 0.0228;
    double velocityDamping = 0.6;
    double chargeStrength = -30.0;
    double linkRestLength = 30.0;
};

struct GraphState {
    std::vector<Vec2> positions;
    std::vector<Vec2> velocities;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    double alpha = 1.0;
    double alphaMin = 0.001;
    double alphaDecay = 0.0228;
    double velocityDamping = 0.6;
    double chargeStrength = -30.0;
    double linkRestLength = 30.0;
    std::uint64_t tick = 0;
};

/// Initial state: given positions, else a phyllotaxis spiral (radius 10 * sqrt(i + 0.5)).
/// Throws RangeError for edges that reference missing nodes.
GraphState makeGraphState(const GraphData& graph, const LayoutParams& params = {});

/// One simulation tick: pairwise charge (v += d * strength * alpha / max(|d|^2, 1), d pointing
/// from the node to the other) into damped velocities, integration, then link relaxation toward
/// the rest length; alpha *= 1 - alphaDecay. Coincident nodes are first pushed apart by a
/// deterministic epsilon.
GraphState forceLayoutStep(const GraphState& g);

using TickCallback = std::function<void(std::span<const Vec2> positions, double alpha)>;

/// Steps while alpha >= alphaMin, calling onTick after every step.
GraphState runLayoutToEquilibrium(GraphState g, const TickCallback& onTick = {});

/// ceil(log(alphaMin / alpha0) / log(1 - alphaDecay)).
std::size_t expectedTickCount(double alpha0, double alphaMin, double alphaDecay);

/// A DataTable with one row per node that carries the graph as payload.
DataRef graphTable(std::shared_ptr<const GraphData> graph);
std::shared_ptr<const GraphData> graphOf(const DataTable& table);

}  // namespace strata
