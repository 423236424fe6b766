#include "strata/analytics/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "strata/errors.hpp"

namespace strata {

GraphState makeGraphState(const GraphData& graph, const LayoutParams& params) {
    GraphState g;
    g.alpha = params.alpha;
    g.alphaMin = params.alphaMin;
    g.alphaDecay = params.alphaDecay;
    g.velocityDamping = params.velocityDamping;
    g.chargeStrength = params.chargeStrength;
    g.linkRestLength = params.linkRestLength;
    const std::size_t n = graph.nodeCount();
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 given = i < graph.positions.size() ? graph.positions[i] : Vec2{NAN, NAN};
        if (std::isfinite(given.x) && std::isfinite(given.y)) {
            g.positions.push_back(given);
        } else {
            const double r = 10.0 * std::sqrt(0.5 + static_cast<double>(i));
            const double a = static_cast<double>(i) * golden;
            g.positions.push_back({r * std::cos(a), r * std::sin(a)});
        }
    }
    g.velocities.assign(n, Vec2{0, 0});
    for (const auto& e : graph.edges) {
        if (e.first >= n || e.second >= n) throw RangeError("edge references a missing node");
    }
    g.edges = graph.edges;
    return g;
}

namespace {

// Small deterministic displacement for coincident pairs, antisymmetric in (i, j).
Vec2 jiggle(std::size_t i, std::size_t j) {
    const double a = static_cast<double>((i * 2654435761u + j * 40503u) % 1024) / 1024.0 * 2.0 * std::numbers::pi;
    return {1e-6 * std::cos(a), 1e-6 * std::sin(a)};
}

}  // namespace

GraphState forceLayoutStep(const GraphState& in) {
    GraphState g = in;
    const std::size_t n = g.positions.size();
    auto& p = g.positions;
    auto& v = g.velocities;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (p[i].x == p[j].x && p[i].y == p[j].y) {
                const Vec2 d = jiggle(i, j);
                p[j] = {p[j].x + d.x, p[j].y + d.y};
            }
        }
    }

    const double w = g.chargeStrength * g.alpha;
    std::vector<Vec2> dv(n, Vec2{0, 0});
    if (w != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = p[j].x - p[i].x;
                const double dy = p[j].y - p[i].y;
                const double l2 = std::max(dx * dx + dy * dy, 1.0);
                const double fx = dx * w / l2, fy = dy * w / l2;
                dv[i].x += fx;
                dv[i].y += fy;
                dv[j].x -= fx;
                dv[j].y -= fy;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = {(v[i].x + dv[i].x) * g.velocityDamping, (v[i].y + dv[i].y) * g.velocityDamping};
        p[i] = {p[i].x + v[i].x, p[i].y + v[i].y};
    }

    // Link relaxation: each edge corrects alpha * strength of its length error, split by
    // degree; strength = 1 / min(degree).
    std::vector<int> degree(n, 0);
    for (const auto& e : g.edges) {
        ++degree[e.first];
        ++degree[e.second];
    }
    // Displacements are accumulated and applied together, so edge order does not matter.
    std::vector<Vec2> dp(n, Vec2{0, 0});
    for (const auto& [s, t] : g.edges) {
        if (s == t) continue;
        const double dx = p[t].x - p[s].x;
        const double dy = p[t].y - p[s].y;
        const double l = std::sqrt(dx * dx + dy * dy);
        if (l == 0.0) continue;
        const double strength = 1.0 / std::min(degree[s], degree[t]);
        const double k = (l - g.linkRestLength) / l * g.alpha * strength;
        const double bias = static_cast<double>(degree[s]) / (degree[s] + degree[t]);
        dp[t] = {dp[t].x - dx * k * bias, dp[t].y - dy * k * bias};
        dp[s] = {dp[s].x + dx * k * (1.0 - bias), dp[s].y + dy * k * (1.0 - bias)};
    }
    for (std::size_t i = 0; i < n; ++i) p[i] = {p[i].x + dp[i].x, p[i].y + dp[i].y};

    g.alpha *= 1.0 - g.alphaDecay;
    g.tick += 1;
    return g;
}

GraphState runLayoutToEquilibrium(GraphState g, const TickCallback& onTick) {
    while (g.alpha >= g.alphaMin) {
        g = forceLayoutStep(g);
        if (onTick) onTick(g.positions, g.alpha);
    }
    return g;
}

std::size_t expectedTickCount(double alpha0, double alphaMin, double alphaDecay) {
    return static_cast<std::size_t>(std::ceil(std::log(alphaMin / alpha0) / std::log(1.0 - alphaDecay)));
}

}  // namespace strata

namespace strata {

DataRef graphTable(std::shared_ptr<const GraphData> graph) {
    auto t = makeTable(graph->nodeCount());
    t->payload = std::move(graph);
    return t;
}

std::shared_ptr<const GraphData> graphOf(const DataTable& table) {
    if (const auto* p = std::any_cast<std::shared_ptr<const GraphData>>(&table.payload)) return *p;
    return nullptr;
}

}  // namespace strata
