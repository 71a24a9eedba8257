#pragma once

#include "specdiag/mesh.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace specdiag {

enum class LaplacianVariant { graph, cotangent };

/// Symmetric sparse matrix in CSR form with an optional lumped (diagonal) mass.
/// Every row stores its diagonal entry and one entry per 1-skeleton neighbor,
/// columns ascending.
class SparseSymOperator {
public:
    SparseSymOperator() = default;
    SparseSymOperator(std::vector<std::uint32_t> row_offsets, std::vector<std::uint32_t> columns,
                      std::vector<double> values, std::optional<std::vector<double>> mass);

    std::size_t dimension() const noexcept { return row_offsets_.size() - 1; }
    std::size_t nonzeros() const noexcept { return values_.size(); }

    std::span<const std::uint32_t> row_offsets() const noexcept { return row_offsets_; }
    std::span<const std::uint32_t> columns() const noexcept { return columns_; }
    std::span<const double> values() const noexcept { return values_; }

    bool has_mass() const noexcept { return mass_.has_value(); }
    /// Empty span when the mass is the identity.
    std::span<const double> mass() const noexcept {
        return mass_ ? std::span<const double>(*mass_) : std::span<const double>{};
    }

    /// Entry (i, j); zero if not stored.
    double entry(std::uint32_t i, std::uint32_t j) const;

private:
    std::vector<std::uint32_t> row_offsets_{0};
    std::vector<std::uint32_t> columns_;
    std::vector<double> values_;
    std::optional<std::vector<double>> mass_;
};

/// L = D - A on the 1-skeleton.
SparseSymOperator graph_laplacian(const TriMesh& mesh);

/// FEM Laplacian with half-cotangent edge weights and barycentric lumped mass.
/// Throws GeometryError on a triangle of area below 1e-14 * diag^2, or when a
/// vertex touches no triangle (its mass would be zero).
SparseSymOperator cotangent_laplacian(const TriMesh& mesh);

SparseSymOperator build_laplacian(const TriMesh& mesh, LaplacianVariant variant);

/// y = L x, mass not applied. Rows are distributed over OpenMP threads; each row
/// is summed in storage order so the result is identical to apply_serial.
std::vector<double> apply(const SparseSymOperator& op, std::span<const double> x);
void apply_into(const SparseSymOperator& op, std::span<const double> x, std::span<double> y);

/// Single-threaded reference for apply.
std::vector<double> apply_serial(const SparseSymOperator& op, std::span<const double> x);

} // namespace specdiag
