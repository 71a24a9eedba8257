#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace specdiag {

using Vec3 = std::array<double, 3>;
using Triangle = std::array<std::uint32_t, 3>;
/// Unordered vertex pair, stored with the smaller index first.
using Edge = std::array<std::uint32_t, 2>;

/// Indexed triangle mesh. Immutable once built; the constructor checks every
/// triangle and derives the unique edge list and the vertex adjacency.
///
/// Besides triangle boundaries a mesh may declare standalone edges, so that a
/// plain graph (a path, a cycle) is representable as a 1-dimensional complex.
class TriMesh {
public:
    TriMesh() = default;
    TriMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
            std::vector<Edge> standalone_edges = {});

    /// 1-skeleton only: n vertices at the origin plus the given edges.
    static TriMesh from_graph(std::size_t vertex_count, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t triangle_count() const noexcept { return triangles_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::span<const Vec3> vertices() const noexcept { return vertices_; }
    std::span<const Triangle> triangles() const noexcept { return triangles_; }
    /// Sorted lexicographically, each unordered pair exactly once.
    std::span<const Edge> edges() const noexcept { return edges_; }

    /// Neighbors of v in the 1-skeleton, ascending.
    std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
        return {adjacency_.data() + adjacency_offsets_[v],
                adjacency_.data() + adjacency_offsets_[v + 1]};
    }

    /// Number of triangles incident to each edge, aligned with edges().
    std::span<const std::uint32_t> edge_triangle_counts() const noexcept { return edge_faces_; }

private:
    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> edge_faces_;
    std::vector<std::uint32_t> adjacency_offsets_{0};
    std::vector<std::uint32_t> adjacency_;
};

struct ValidationReport {
    bool is_manifold = true;
    std::size_t component_count = 0;
    std::size_t boundary_edge_count = 0;
    std::size_t non_manifold_edge_count = 0;
    std::size_t duplicate_vertex_warnings = 0;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

TriMesh parse_off(std::istream& in);
TriMesh parse_obj(std::istream& in);

/// Dispatches on the extension (.off / .obj, case-insensitive).
TriMesh read_mesh(const std::filesystem::path& path);

/// OFF with coordinates at 9 significant digits.
void serialize_off(const TriMesh& mesh, std::ostream& out);

ValidationReport validate(const TriMesh& mesh);

/// Number of connected components of the 1-skeleton (0 for an empty mesh).
std::size_t component_count(const TriMesh& mesh);

/// Collapses vertices closer than epsilon (L2) onto the lowest-index representative.
/// Triangles that lose a vertex are dropped; unreferenced vertices are removed.
TriMesh merge_vertices(const TriMesh& mesh, double epsilon);

/// Axis-aligned bounding-box diagonal length.
double bounding_box_diagonal(const TriMesh& mesh);

/// Same complex with vertex i relabeled as permutation[i].
TriMesh relabel(const TriMesh& mesh, std::span<const std::uint32_t> permutation);

} // namespace specdiag
