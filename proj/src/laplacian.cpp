#include "specdiag/laplacian.hpp"

#include "specdiag/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace specdiag {

SparseSymOperator::SparseSymOperator(std::vector<std::uint32_t> row_offsets,
                                     std::vector<std::uint32_t> columns, std::vector<double> values,
                                     std::optional<std::vector<double>> mass)
    : row_offsets_(std::move(row_offsets)), columns_(std::move(columns)), values_(std::move(values)),
      mass_(std::move(mass)) {
    if (row_offsets_.empty() || row_offsets_.back() != columns_.size() || columns_.size() != values_.size())
        throw DimensionError("SparseSymOperator: inconsistent CSR arrays");
    if (mass_) {
        if (mass_->size() != dimension()) throw DimensionError("SparseSymOperator: mass length mismatch");
        for (double m : *mass_)
            if (!(m > 0.0)) throw GeometryError("SparseSymOperator: mass entries must be positive");
    }
}

double SparseSymOperator::entry(std::uint32_t i, std::uint32_t j) const {
    auto first = columns_.begin() + row_offsets_[i];
    auto last = columns_.begin() + row_offsets_[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - columns_.begin())];
}

namespace {

// CSR pattern: diagonal plus 1-skeleton neighbors, columns ascending.
struct Pattern {
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> columns;
    std::vector<std::uint32_t> diagonal_slot;
};

Pattern skeleton_pattern(const TriMesh& mesh) {
    const auto n = static_cast<std::uint32_t>(mesh.vertex_count());
    Pattern p;
    p.offsets.reserve(n + 1);
    p.offsets.push_back(0);
    p.diagonal_slot.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        bool placed = false;
        for (auto j : mesh.neighbors(i)) {
            if (!placed && j > i) {
                p.diagonal_slot[i] = static_cast<std::uint32_t>(p.columns.size());
                p.columns.push_back(i);
                placed = true;
            }
            p.columns.push_back(j);
        }
        if (!placed) {
            p.diagonal_slot[i] = static_cast<std::uint32_t>(p.columns.size());
            p.columns.push_back(i);
        }
        p.offsets.push_back(static_cast<std::uint32_t>(p.columns.size()));
    }
    return p;
}

std::size_t slot_of(const Pattern& p, std::uint32_t i, std::uint32_t j) {
    auto first = p.columns.begin() + p.offsets[i];
    auto last = p.columns.begin() + p.offsets[i + 1];
    return static_cast<std::size_t>(std::lower_bound(first, last, j) - p.columns.begin());
}

// Diagonal := -(sum of off-diagonals) so constants are annihilated.
void close_rows(const Pattern& p, std::vector<double>& values) {
    const auto n = p.diagonal_slot.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (auto k = p.offsets[i]; k < p.offsets[i + 1]; ++k)
            if (k != p.diagonal_slot[i]) s += values[k];
        values[p.diagonal_slot[i]] = -s;
    }
}

} // namespace

SparseSymOperator graph_laplacian(const TriMesh& mesh) {
    auto p = skeleton_pattern(mesh);
    std::vector<double> values(p.columns.size(), -1.0);
    close_rows(p, values);
    return SparseSymOperator(std::move(p.offsets), std::move(p.columns), std::move(values), std::nullopt);
}

SparseSymOperator cotangent_laplacian(const TriMesh& mesh) {
    auto p = skeleton_pattern(mesh);
    const auto n = mesh.vertex_count();
    const auto verts = mesh.vertices();
    const double diag = bounding_box_diagonal(mesh);
    const double min_area = 1e-14 * diag * diag;

    std::vector<double> values(p.columns.size(), 0.0);
    std::vector<double> mass(n, 0.0);

    auto sub = [](const Vec3& a, const Vec3& b) { return Vec3{a[0] - b[0], a[1] - b[1], a[2] - b[2]}; };
    auto dot = [](const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
    auto cross_norm = [](const Vec3& a, const Vec3& b) {
        return std::hypot(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
    };

    const auto tris = mesh.triangles();
    for (std::size_t t = 0; t < tris.size(); ++t) {
        const auto& tri = tris[t];
        // area from the sorted corner order so it does not depend on winding
        auto s = tri;
        std::sort(s.begin(), s.end());
        const double twice_area = cross_norm(sub(verts[s[1]], verts[s[0]]), sub(verts[s[2]], verts[s[0]]));
        if (0.5 * twice_area < min_area)
            throw GeometryError("degenerate triangle " + std::to_string(t) + " (area " +
                                std::to_string(0.5 * twice_area) + ")");
        for (int c = 0; c < 3; ++c) {
            // angle at corner c is opposite edge (a, b)
            const auto k = tri[c], a = tri[(c + 1) % 3], b = tri[(c + 2) % 3];
            const auto u = sub(verts[a], verts[k]);
            const auto v = sub(verts[b], verts[k]);
            const double half_cot = 0.5 * dot(u, v) / cross_norm(u, v);
            values[slot_of(p, a, b)] -= half_cot;
            values[slot_of(p, b, a)] -= half_cot;
            mass[k] += twice_area / 6.0;
        }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!(mass[v] > 0.0))
            throw GeometryError("vertex " + std::to_string(v) + " is not on any triangle; cotangent Laplacian needs a surface");
    close_rows(p, values);
    return SparseSymOperator(std::move(p.offsets), std::move(p.columns), std::move(values), std::move(mass));
}

SparseSymOperator build_laplacian(const TriMesh& mesh, LaplacianVariant variant) {
    return variant == LaplacianVariant::graph ? graph_laplacian(mesh) : cotangent_laplacian(mesh);
}

void apply_into(const SparseSymOperator& op, std::span<const double> x, std::span<double> y) {
    const auto n = op.dimension();
    if (x.size() != n || y.size() != n)
        throw DimensionError("apply: vector length " + std::to_string(x.size()) + " vs dimension " +
                             std::to_string(n));
    const auto rows = op.row_offsets();
    const auto cols = op.columns();
    const auto vals = op.values();
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (count > 4096)
    for (std::int64_t i = 0; i < count; ++i) {
        double s = 0.0;
        for (auto k = rows[i]; k < rows[i + 1]; ++k) s += vals[k] * x[cols[k]];
        y[i] = s;
    }
}

std::vector<double> apply(const SparseSymOperator& op, std::span<const double> x) {
    std::vector<double> y(op.dimension());
    apply_into(op, x, y);
    return y;
}

std::vector<double> apply_serial(const SparseSymOperator& op, std::span<const double> x) {
    const auto n = op.dimension();
    if (x.size() != n)
        throw DimensionError("apply: vector length " + std::to_string(x.size()) + " vs dimension " +
                             std::to_string(n));
    std::vector<double> y(n, 0.0);
    const auto rows = op.row_offsets();
    const auto cols = op.columns();
    const auto vals = op.values();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (auto k = rows[i]; k < rows[i + 1]; ++k) s += vals[k] * x[cols[k]];
        y[i] = s;
    }
    return y;
}

} // namespace specdiag
