#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specdiag {

/// Symmetric corpus distance matrix, row-major, with mesh identifiers.
struct DistanceMatrix {
    std::vector<std::string> ids;
    std::vector<double> values;

    DistanceMatrix() = default;
    explicit DistanceMatrix(std::vector<std::string> names)
        : ids(std::move(names)), values(ids.size() * ids.size(), 0.0) {}

    std::size_t size() const noexcept { return ids.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * ids.size() + j]; }

    /// Throws std::invalid_argument unless square, exactly symmetric,
    /// nonnegative, finite and zero on the diagonal.
    void check() const;
};

/// Header `id,<id1>,<id2>,...`, then one row per mesh; shortest round-trip decimals.
void write_csv(const DistanceMatrix& m, std::ostream& out);
DistanceMatrix read_matrix_csv(std::istream& in);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

} // namespace specdiag
