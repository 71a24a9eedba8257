#include "specdiag/mesh.hpp"

#include "specdiag/error.hpp"
#include "specdiag/union_find.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace specdiag {

namespace {

Edge make_edge(std::uint32_t a, std::uint32_t b) {
    return a < b ? Edge{a, b} : Edge{b, a};
}

} // namespace

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                 std::vector<Edge> standalone_edges)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    const auto n = vertices_.size();
    std::vector<std::pair<Edge, std::uint32_t>> tagged;
    tagged.reserve(3 * triangles_.size() + standalone_edges.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        for (auto v : tri)
            if (v >= n)
                throw GeometryError("triangle " + std::to_string(t) + " references vertex " +
                                    std::to_string(v) + " of " + std::to_string(n));
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw GeometryError("triangle " + std::to_string(t) + " repeats a vertex");
        for (int k = 0; k < 3; ++k) tagged.push_back({make_edge(tri[k], tri[(k + 1) % 3]), 1});
    }
    for (const auto& e : standalone_edges) {
        if (e[0] >= n || e[1] >= n || e[0] == e[1])
            throw GeometryError("invalid edge (" + std::to_string(e[0]) + ", " +
                                std::to_string(e[1]) + ")");
        tagged.push_back({make_edge(e[0], e[1]), 0});
    }
    std::sort(tagged.begin(), tagged.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [e, faces] : tagged) {
        if (edges_.empty() || edges_.back() != e) {
            edges_.push_back(e);
            edge_faces_.push_back(faces);
        } else {
            edge_faces_.back() += faces;
        }
    }

    std::vector<std::uint32_t> degree(n, 0);
    for (const auto& e : edges_) {
        ++degree[e[0]];
        ++degree[e[1]];
    }
    adjacency_offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) adjacency_offsets_[v + 1] = adjacency_offsets_[v] + degree[v];
    adjacency_.resize(adjacency_offsets_[n]);
    std::vector<std::uint32_t> fill(adjacency_offsets_.begin(), adjacency_offsets_.end() - 1);
    for (const auto& e : edges_) {
        adjacency_[fill[e[0]]++] = e[1];
        adjacency_[fill[e[1]]++] = e[0];
    }
    for (std::size_t v = 0; v < n; ++v)
        std::sort(adjacency_.begin() + adjacency_offsets_[v], adjacency_.begin() + adjacency_offsets_[v + 1]);
}

TriMesh TriMesh::from_graph(std::size_t vertex_count, std::vector<Edge> edges) {
    return TriMesh(std::vector<Vec3>(vertex_count, Vec3{0.0, 0.0, 0.0}), {}, std::move(edges));
}

// ---------------------------------------------------------------------------
// Text readers

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-blank line with comments stripped; nullopt at end of stream.
    std::optional<std::string> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r\f\v") != std::string::npos) return line;
        }
        return std::nullopt;
    }

    std::size_t line() const noexcept { return line_no_; }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view tok, T& out) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size();
}

void fan_triangulate(std::span<const std::uint32_t> poly, std::vector<Triangle>& out,
                     std::size_t line) {
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        Triangle t{poly[0], poly[k], poly[k + 1]};
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw ParseError(line, "face repeats a vertex index");
        out.push_back(t);
    }
}

} // namespace

TriMesh parse_off(std::istream& in) {
    LineReader reader(in);
    auto header = reader.next();
    if (!header) throw ParseError(reader.line(), "empty stream, expected OFF header");
    auto tokens = split(*header);
    if (tokens.empty() || tokens[0] != "OFF")
        throw ParseError(reader.line(), "expected header \"OFF\"");

    // counts may share the header line
    std::vector<std::string_view> counts(tokens.begin() + 1, tokens.end());
    std::string counts_line;
    if (counts.empty()) {
        auto line = reader.next();
        if (!line) throw ParseError(reader.line() + 1, "truncated stream, expected vertex/face counts");
        counts_line = std::move(*line);
        counts = split(counts_line);
    }
    std::size_t nv = 0, nf = 0, ne = 0;
    if (counts.size() < 2 || !parse_number(counts[0], nv) || !parse_number(counts[1], nf) ||
        (counts.size() >= 3 && !parse_number(counts[2], ne)))
        throw ParseError(reader.line(), "malformed counts line");

    std::vector<Vec3> vertices;
    vertices.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        auto line = reader.next();
        if (!line)
            throw ParseError(reader.line() + 1, "truncated stream, expected " + std::to_string(nv) +
                                                    " vertices, got " + std::to_string(i));
        auto tok = split(*line);
        Vec3 p{};
        if (tok.size() < 3 || !parse_number(tok[0], p[0]) || !parse_number(tok[1], p[1]) ||
            !parse_number(tok[2], p[2]))
            throw ParseError(reader.line(), "malformed vertex");
        vertices.push_back(p);
    }

    std::vector<Triangle> triangles;
    triangles.reserve(nf);
    std::vector<std::uint32_t> poly;
    for (std::size_t f = 0; f < nf; ++f) {
        auto line = reader.next();
        if (!line)
            throw ParseError(reader.line() + 1, "truncated stream, expected " + std::to_string(nf) +
                                                    " faces, got " + std::to_string(f));
        auto tok = split(*line);
        std::size_t k = 0;
        if (tok.empty() || !parse_number(tok[0], k)) throw ParseError(reader.line(), "malformed face");
        if (k < 3) throw ParseError(reader.line(), "face with fewer than 3 vertices");
        if (tok.size() < k + 1) throw ParseError(reader.line(), "face lists fewer indices than declared");
        poly.clear();
        for (std::size_t j = 0; j < k; ++j) {
            long long idx = 0;
            if (!parse_number(tok[j + 1], idx)) throw ParseError(reader.line(), "malformed face index");
            if (idx < 0 || static_cast<std::size_t>(idx) >= nv)
                throw ParseError(reader.line(), "vertex index " + std::to_string(idx) +
                                                    " out of range [0, " + std::to_string(nv) + ")");
            poly.push_back(static_cast<std::uint32_t>(idx));
        }
        fan_triangulate(poly, triangles, reader.line());
    }
    return TriMesh(std::move(vertices), std::move(triangles));
}

TriMesh parse_obj(std::istream& in) {
    LineReader reader(in);
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::vector<std::uint32_t> poly;
    while (auto line = reader.next()) {
        auto tok = split(*line);
        if (tok[0] == "v") {
            Vec3 p{};
            if (tok.size() < 4 || !parse_number(tok[1], p[0]) || !parse_number(tok[2], p[1]) ||
                !parse_number(tok[3], p[2]))
                throw ParseError(reader.line(), "malformed vertex");
            vertices.push_back(p);
        } else if (tok[0] == "f") {
            if (tok.size() < 4) throw ParseError(reader.line(), "face with fewer than 3 vertices");
            poly.clear();
            for (std::size_t j = 1; j < tok.size(); ++j) {
                auto ref = tok[j].substr(0, tok[j].find('/'));
                long long idx = 0;
                if (!parse_number(ref, idx) || idx == 0)
                    throw ParseError(reader.line(), "malformed face index");
                long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(vertices.size()) + idx;
                if (resolved < 0 || static_cast<std::size_t>(resolved) >= vertices.size())
                    throw ParseError(reader.line(), "vertex index " + std::to_string(idx) + " out of range");
                poly.push_back(static_cast<std::uint32_t>(resolved));
            }
            fan_triangulate(poly, triangles, reader.line());
        }
        // vn, vt, o, g, s, usemtl, mtllib, l: ignored
    }
    return TriMesh(std::move(vertices), std::move(triangles));
}

TriMesh read_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".obj") return parse_obj(in);
    if (ext == ".off") return parse_off(in);
    throw std::runtime_error("unsupported mesh extension '" + ext + "' for " + path.string());
}

void serialize_off(const TriMesh& mesh, std::ostream& out) {
    out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << ' ' << mesh.edge_count() << '\n';
    char buf[96];
    for (const auto& p : mesh.vertices()) {
        std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", p[0], p[1], p[2]);
        out << buf;
    }
    for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

// ---------------------------------------------------------------------------

std::size_t component_count(const TriMesh& mesh) {
    DisjointSet ds(mesh.vertex_count());
    for (const auto& e : mesh.edges()) ds.unite(e[0], e[1]);
    return ds.count_roots();
}

ValidationReport validate(const TriMesh& mesh) {
    ValidationReport r;
    r.component_count = component_count(mesh);
    const auto faces = mesh.edge_triangle_counts();
    for (auto c : faces) {
        if (c == 1) ++r.boundary_edge_count;
        if (c > 2) ++r.non_manifold_edge_count;
    }
    r.is_manifold = r.non_manifold_edge_count == 0;

    std::map<Vec3, std::uint32_t> seen;
    for (const auto& p : mesh.vertices())
        if (!seen.emplace(p, 0).second) ++r.duplicate_vertex_warnings;
    return r;
}

TriMesh merge_vertices(const TriMesh& mesh, double epsilon) {
    const auto n = mesh.vertex_count();
    const auto verts = mesh.vertices();
    DisjointSet ds(n);
    if (epsilon > 0.0) {
        // Hash grid with cell size epsilon; neighbors lie in the 27 surrounding cells.
        struct CellHash {
            std::size_t operator()(const std::array<long long, 3>& c) const noexcept {
                return static_cast<std::size_t>(c[0] * 73856093LL ^ c[1] * 19349663LL ^ c[2] * 83492791LL);
            }
        };
        std::unordered_map<std::array<long long, 3>, std::vector<std::uint32_t>, CellHash> grid;
        auto cell_of = [&](const Vec3& p) {
            return std::array<long long, 3>{static_cast<long long>(std::floor(p[0] / epsilon)),
                                            static_cast<long long>(std::floor(p[1] / epsilon)),
                                            static_cast<long long>(std::floor(p[2] / epsilon))};
        };
        for (std::uint32_t v = 0; v < n; ++v) {
            const auto c = cell_of(verts[v]);
            for (long long dx = -1; dx <= 1; ++dx)
                for (long long dy = -1; dy <= 1; ++dy)
                    for (long long dz = -1; dz <= 1; ++dz) {
                        auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
                        if (it == grid.end()) continue;
                        for (auto u : it->second) {
                            const double d = std::hypot(verts[u][0] - verts[v][0], verts[u][1] - verts[v][1],
                                                        verts[u][2] - verts[v][2]);
                            if (d < epsilon) ds.unite(u, v);
                        }
                    }
            grid[c].push_back(v);
        }
    }

    // representative = lowest index in each class
    std::vector<std::uint32_t> lowest(n, UINT32_MAX);
    for (std::uint32_t v = 0; v < n; ++v) lowest[ds.find(v)] = std::min(lowest[ds.find(v)], v);
    std::vector<std::uint32_t> target(n);
    for (std::uint32_t v = 0; v < n; ++v) target[v] = lowest[ds.find(v)];

    std::vector<std::uint32_t> remap(n, UINT32_MAX);
    std::vector<Vec3> out_vertices;
    auto keep = [&](std::uint32_t v) {
        auto r = target[v];
        if (remap[r] == UINT32_MAX) {
            remap[r] = static_cast<std::uint32_t>(out_vertices.size());
            out_vertices.push_back(verts[r]);
        }
        return remap[r];
    };
    // Preserve original ordering of the representatives.
    for (std::uint32_t v = 0; v < n; ++v)
        if (target[v] == v) keep(v);

    std::vector<Triangle> tris;
    for (const auto& t : mesh.triangles()) {
        Triangle m{keep(t[0]), keep(t[1]), keep(t[2])};
        if (m[0] != m[1] && m[1] != m[2] && m[0] != m[2]) tris.push_back(m);
    }
    std::vector<Edge> lone;
    const auto faces = mesh.edge_triangle_counts();
    const auto edges = mesh.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (faces[i] != 0) continue;
        auto a = keep(edges[i][0]), b = keep(edges[i][1]);
        if (a != b) lone.push_back({a, b});
    }
    return TriMesh(std::move(out_vertices), std::move(tris), std::move(lone));
}

double bounding_box_diagonal(const TriMesh& mesh) {
    if (mesh.vertex_count() == 0) return 0.0;
    Vec3 lo = mesh.vertices()[0], hi = lo;
    for (const auto& p : mesh.vertices())
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    return std::hypot(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]);
}

TriMesh relabel(const TriMesh& mesh, std::span<const std::uint32_t> permutation) {
    const auto n = mesh.vertex_count();
    if (permutation.size() != n) throw DimensionError("relabel: permutation length mismatch");
    std::vector<Vec3> verts(n);
    for (std::size_t i = 0; i < n; ++i) verts[permutation[i]] = mesh.vertices()[i];
    std::vector<Triangle> tris;
    tris.reserve(mesh.triangle_count());
    for (const auto& t : mesh.triangles())
        tris.push_back({permutation[t[0]], permutation[t[1]], permutation[t[2]]});
    std::vector<Edge> edges;
    for (const auto& e : mesh.edges()) edges.push_back({permutation[e[0]], permutation[e[1]]});
    return TriMesh(std::move(verts), std::move(tris), std::move(edges));
}

} // namespace specdiag
