#include "specdiag/shapes.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace specdiag::shapes {

namespace {

Vec3 normalized(Vec3 p) {
    const double r = std::hypot(p[0], p[1], p[2]);
    return {p[0] / r, p[1] / r, p[2] / r};
}

double unit_uniform(std::mt19937_64& rng) {
    // 53-bit mantissa in [0,1); independent of library distribution implementations
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

TriMesh icosphere(int subdivisions) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                           {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                           {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) p = normalized(p);
    std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
        auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            const auto& p = v[a];
            const auto& q = v[b];
            v.push_back(normalized({(p[0] + q[0]) / 2, (p[1] + q[1]) / 2, (p[2] + q[2]) / 2}));
            auto id = static_cast<std::uint32_t>(v.size() - 1);
            mid.emplace(key, id);
            return id;
        };
        std::vector<Triangle> next;
        next.reserve(4 * f.size());
        for (const auto& tri : f) {
            auto a = midpoint(tri[0], tri[1]);
            auto b = midpoint(tri[1], tri[2]);
            auto c = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], a, c});
            next.push_back({tri[1], b, a});
            next.push_back({tri[2], c, b});
            next.push_back({a, b, c});
        }
        f = std::move(next);
    }
    return TriMesh(std::move(v), std::move(f));
}

TriMesh ellipsoid(double ax, double ay, double az, int subdivisions) {
    auto sphere = icosphere(subdivisions);
    std::vector<Vec3> v(sphere.vertices().begin(), sphere.vertices().end());
    for (auto& p : v) p = {p[0] * ax, p[1] * ay, p[2] * az};
    return TriMesh(std::move(v), {sphere.triangles().begin(), sphere.triangles().end()});
}

TriMesh torus(double tube_ratio, std::uint32_t ring_segments, std::uint32_t tube_segments) {
    std::vector<Vec3> v;
    v.reserve(std::size_t{ring_segments} * tube_segments);
    for (std::uint32_t i = 0; i < ring_segments; ++i) {
        const double u = 2.0 * std::numbers::pi * i / ring_segments;
        for (std::uint32_t j = 0; j < tube_segments; ++j) {
            const double w = 2.0 * std::numbers::pi * j / tube_segments;
            const double rho = 1.0 + tube_ratio * std::cos(w);
            v.push_back({rho * std::cos(u), rho * std::sin(u), tube_ratio * std::sin(w)});
        }
    }
    auto id = [&](std::uint32_t i, std::uint32_t j) {
        return (i % ring_segments) * tube_segments + (j % tube_segments);
    };
    std::vector<Triangle> f;
    for (std::uint32_t i = 0; i < ring_segments; ++i)
        for (std::uint32_t j = 0; j < tube_segments; ++j) {
            f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return TriMesh(std::move(v), std::move(f));
}

TriMesh perturb(const TriMesh& mesh, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vec3> v(mesh.vertices().begin(), mesh.vertices().end());
    for (auto& p : v)
        for (auto& c : p) c += amplitude * (2.0 * unit_uniform(rng) - 1.0);
    std::vector<Edge> edges(mesh.edges().begin(), mesh.edges().end());
    return TriMesh(std::move(v), {mesh.triangles().begin(), mesh.triangles().end()}, std::move(edges));
}

TriMesh path_graph(std::uint32_t n) {
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return TriMesh::from_graph(n, std::move(e));
}

TriMesh cycle_graph(std::uint32_t n) {
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
    return TriMesh::from_graph(n, std::move(e));
}

TriMesh complete_graph(std::uint32_t n) {
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) e.push_back({i, j});
    return TriMesh::from_graph(n, std::move(e));
}

TriMesh random_connected_graph(std::uint32_t n, std::uint32_t extra_edges, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::set<Edge> e;
    for (std::uint32_t i = 1; i < n; ++i) {
        auto parent = static_cast<std::uint32_t>(rng() % i);
        e.insert({parent, i});
    }
    const std::size_t max_edges = std::size_t{n} * (n - 1) / 2;
    for (std::uint32_t k = 0; k < extra_edges && e.size() < max_edges; ++k) {
        auto a = static_cast<std::uint32_t>(rng() % n);
        auto b = static_cast<std::uint32_t>(rng() % n);
        if (a == b) continue;
        e.insert({std::min(a, b), std::max(a, b)});
    }
    return TriMesh::from_graph(n, {e.begin(), e.end()});
}

TriMesh grid(std::uint32_t nx, std::uint32_t ny) {
    std::vector<Vec3> v;
    for (std::uint32_t j = 0; j <= ny; ++j)
        for (std::uint32_t i = 0; i <= nx; ++i)
            v.push_back({static_cast<double>(i) / nx, static_cast<double>(j) / ny, 0.0});
    auto id = [&](std::uint32_t i, std::uint32_t j) { return j * (nx + 1) + i; };
    std::vector<Triangle> f;
    for (std::uint32_t j = 0; j < ny; ++j)
        for (std::uint32_t i = 0; i < nx; ++i) {
            f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return TriMesh(std::move(v), std::move(f));
}


std::vector<std::pair<std::string, TriMesh>> benchmark_corpus(std::size_t per_class, double noise_fraction,
                                                              std::uint64_t seed) {
    const std::vector<std::pair<std::string, TriMesh>> bases = {
        {"sphere", icosphere(3)},
        {"torus", torus(0.35, 48, 16)},
        {"ellipsoid", ellipsoid(3.0, 1.0, 1.0, 3)},
    };
    std::vector<std::pair<std::string, TriMesh>> out;
    std::uint64_t instance = 0;
    for (const auto& [name, base] : bases) {
        const double amplitude = noise_fraction * bounding_box_diagonal(base);
        for (std::size_t k = 0; k < per_class; ++k)
            out.emplace_back(name + "_" + std::to_string(k), perturb(base, amplitude, seed + 7919 * ++instance));
    }
    return out;
}

std::string class_of(const std::string& name) {
    const auto cut = name.rfind('_');
    return cut == std::string::npos ? name : name.substr(0, cut);
}

} // namespace specdiag::shapes
