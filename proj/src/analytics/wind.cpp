#include "strata/analytics/wind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "strata/errors.hpp"
#include "strata/geometry/triangulation.hpp"

namespace strata {

WorldPoint FieldGrid::node(int i, int j) const {
    return {boundsMin.x + (boundsMax.x - boundsMin.x) * i / (nx - 1),
            boundsMin.y + (boundsMax.y - boundsMin.y) * j / (ny - 1)};
}

bool FieldGrid::contains(double x, double y) const {
    return x >= boundsMin.x && x <= boundsMax.x && y >= boundsMin.y && y <= boundsMax.y;
}

std::optional<Vec3> FieldGrid::sample(double x, double y) const {
    if (!contains(x, y)) return std::nullopt;
    const double fx = (x - boundsMin.x) / (boundsMax.x - boundsMin.x) * (nx - 1);
    const double fy = (y - boundsMin.y) / (boundsMax.y - boundsMin.y) * (ny - 1);
    const int i0 = std::min(static_cast<int>(fx), nx - 2);
    const int j0 = std::min(static_cast<int>(fy), ny - 2);
    const double tx = fx - i0, ty = fy - j0;
    const Vec3& a = velocities[index(i0, j0)];
    const Vec3& b = velocities[index(i0 + 1, j0)];
    const Vec3& c = velocities[index(i0, j0 + 1)];
    const Vec3& d = velocities[index(i0 + 1, j0 + 1)];
    auto lerp = [](double p, double q, double t) { return p + (q - p) * t; };
    return Vec3{lerp(lerp(a.x, b.x, tx), lerp(c.x, d.x, tx), ty), lerp(lerp(a.y, b.y, tx), lerp(c.y, d.y, tx), ty),
                lerp(lerp(a.z, b.z, tx), lerp(c.z, d.z, tx), ty)};
}

bool FieldGrid::validAt(double x, double y) const {
    if (!contains(x, y)) return false;
    const auto i = static_cast<int>(std::lround((x - boundsMin.x) / (boundsMax.x - boundsMin.x) * (nx - 1)));
    const auto j = static_cast<int>(std::lround((y - boundsMin.y) / (boundsMax.y - boundsMin.y) * (ny - 1)));
    return valid[index(std::clamp(i, 0, nx - 1), std::clamp(j, 0, ny - 1))] != 0;
}

FieldGrid buildWindField(const DataTable& stations, int nx, int ny,
                         std::optional<std::pair<WorldPoint, WorldPoint>> bounds) {
    if (nx < 2 || ny < 2) throw RangeError("field grid needs at least 2 x 2 nodes");
    const char* names[5] = {"lng", "lat", "vx", "vy", "vz"};
    const std::vector<double>* cols[5];
    for (int k = 0; k < 5; ++k) {
        cols[k] = stations.numeric(names[k]);
        if (cols[k] == nullptr) throw SpecError(std::string("station table needs a numeric '") + names[k] + "' column");
    }
    const std::size_t n = stations.rowCount();
    std::vector<Vec2> pts;
    std::vector<double> values;
    pts.reserve(n);
    values.reserve(n * 3);
    for (std::size_t r = 0; r < n; ++r) {
        const WorldPoint w = lngLatToWorld({(*cols[0])[r], (*cols[1])[r]});
        pts.push_back({w.x, w.y});
        for (int k = 2; k < 5; ++k) values.push_back((*cols[k])[r]);
    }
    const Triangulation tri = delaunayTriangulate(pts);
    const TriangleLocator locator(tri);

    FieldGrid f;
    f.nx = nx;
    f.ny = ny;
    if (bounds) {
        f.boundsMin = bounds->first;
        f.boundsMax = bounds->second;
    } else {
        f.boundsMin = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        f.boundsMax = {-f.boundsMin.x, -f.boundsMin.y};
        for (const auto& p : pts) {
            f.boundsMin = {std::min(f.boundsMin.x, p.x), std::min(f.boundsMin.y, p.y)};
            f.boundsMax = {std::max(f.boundsMax.x, p.x), std::max(f.boundsMax.y, p.y)};
        }
    }
    if (!(f.boundsMax.x > f.boundsMin.x) || !(f.boundsMax.y > f.boundsMin.y)) throw GeometryError("field bounds are empty");
    f.velocities.assign(static_cast<std::size_t>(nx) * ny, Vec3{0, 0, 0});
    f.valid.assign(static_cast<std::size_t>(nx) * ny, 0);
    std::size_t hint = 0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const WorldPoint w = f.node(i, j);
            const auto v = interpolateBarycentric(locator, values, 3, {w.x, w.y}, hint);
            if (!v) continue;
            f.velocities[f.index(i, j)] = {(*v)[0], (*v)[1], (*v)[2]};
            f.valid[f.index(i, j)] = 1;
        }
    }
    return f;
}

DataRef fieldToTable(const FieldGrid& field) {
    const std::size_t n = field.velocities.size();
    std::vector<double> x(n), y(n), vx(n), vy(n), vz(n), speed(n), valid(n);
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            const std::size_t k = field.index(i, j);
            const WorldPoint w = field.node(i, j);
            const Vec3& v = field.velocities[k];
            x[k] = w.x;
            y[k] = w.y;
            vx[k] = v.x;
            vy[k] = v.y;
            vz[k] = v.z;
            speed[k] = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
            valid[k] = field.valid[k];
        }
    }
    auto t = makeTable(n);
    t->addNumeric("x", std::move(x));
    t->addNumeric("y", std::move(y));
    t->addNumeric("vx", std::move(vx));
    t->addNumeric("vy", std::move(vy));
    t->addNumeric("vz", std::move(vz));
    t->addNumeric("speed", std::move(speed));
    t->addNumeric("valid", std::move(valid));
    return t;
}

namespace {

std::mt19937_64 streamFor(std::uint64_t seed, std::uint64_t index, std::uint64_t tick) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(tick), static_cast<std::uint32_t>(tick >> 32)};
    return std::mt19937_64(seq);
}

// Exactly specified across standard libraries, unlike uniform_real_distribution.
double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

Vec2 respawnPosition(const FieldGrid& field, std::uint64_t seed, std::uint64_t index, std::uint64_t tick) {
    auto gen = streamFor(seed, index, tick);
    const double w = field.boundsMax.x - field.boundsMin.x;
    const double h = field.boundsMax.y - field.boundsMin.y;
    for (int attempt = 0; attempt < 64; ++attempt) {
        const double x = field.boundsMin.x + unit(gen) * w;
        const double y = field.boundsMin.y + unit(gen) * h;
        if (field.validAt(x, y)) return {x, y};
    }
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            if (field.valid[field.index(i, j)]) {
                const WorldPoint p = field.node(i, j);
                return {p.x, p.y};
            }
        }
    }
    return {(field.boundsMin.x + field.boundsMax.x) / 2, (field.boundsMin.y + field.boundsMax.y) / 2};
}

ParticleState seedParticles(const FieldGrid& field, std::size_t count, int maxAge, std::uint64_t seed) {
    if (maxAge < 1) throw RangeError("maxAge must be >= 1");
    ParticleState s;
    s.maxAge = maxAge;
    s.seed = seed;
    s.positions.reserve(count);
    s.ages.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        s.positions.push_back(respawnPosition(field, seed, i, 0));
        // Staggered ages so particles do not all respawn on the same tick.
        auto gen = streamFor(seed ^ 0x9e3779b97f4a7c15ULL, i, 0);
        s.ages.push_back(static_cast<int>(gen() % static_cast<std::uint64_t>(maxAge)));
    }
    return s;
}

ParticleState advectParticles(const ParticleState& state, const FieldGrid& field, double dt, double speedScale) {
    ParticleState next = state;
    next.tick = state.tick + 1;
    for (std::size_t i = 0; i < next.positions.size(); ++i) {
        Vec2& p = next.positions[i];
        int& age = next.ages[i];
        age += 1;
        bool respawn = age > next.maxAge;
        if (!respawn) {
            const auto v = field.sample(p.x, p.y);
            if (v) {
                p.x += v->x * dt * speedScale;
                p.y -= v->y * dt * speedScale;
            }
            respawn = !v || !field.contains(p.x, p.y) || !field.validAt(p.x, p.y);
        }
        if (respawn) {
            p = respawnPosition(field, next.seed, i, next.tick);
            age = 0;
        }
    }
    return next;
}

void writeParticles(const ParticleState& state, DataTable& table) {
    const std::size_t n = state.positions.size();
    std::vector<double> x(n), y(n), age(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = state.positions[i].x;
        y[i] = state.positions[i].y;
        age[i] = state.ages[i];
    }
    if (table.rowCount() == n && table.numeric("x") && table.numeric("y") && table.numeric("age")) {
        *table.numericMutable("x") = std::move(x);
        *table.numericMutable("y") = std::move(y);
        *table.numericMutable("age") = std::move(age);
        return;
    }
    table = DataTable(n);
    table.addNumeric("x", std::move(x));
    table.addNumeric("y", std::move(y));
    table.addNumeric("age", std::move(age));
}

}  // namespace strata
