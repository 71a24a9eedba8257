#pragma once

#include "specdiag/persistence.hpp"

#include <span>
#include <vector>

namespace specdiag {

/// Augmented bipartite instance between finite diagrams X and Y.
/// Left = X followed by the diagonal projections of Y; right = Y followed by
/// the diagonal projections of X. Cost is the L-infinity distance, except
/// between two diagonal projections where it is 0.
struct MatchingInstance {
    std::vector<PersistencePair> left;
    std::vector<PersistencePair> right;
    std::size_t x_count = 0;
    std::size_t y_count = 0;

    MatchingInstance(std::span<const PersistencePair> x, std::span<const PersistencePair> y);

    std::size_t size() const noexcept { return left.size(); }
    bool left_is_diagonal(std::size_t i) const noexcept { return i >= x_count; }
    bool right_is_diagonal(std::size_t j) const noexcept { return j >= y_count; }
    double cost(std::size_t i, std::size_t j) const noexcept;
};

PersistencePair diagonal_projection(const PersistencePair& p) noexcept;
double linf(const PersistencePair& a, const PersistencePair& b) noexcept;

/// Exact bottleneck distance: binary search over realized edge costs, each
/// threshold decided by a Hopcroft-Karp maximum matching.
double bottleneck(std::span<const PersistencePair> x, std::span<const PersistencePair> y);
double bottleneck(const PersistenceDiagram& x, const PersistenceDiagram& y);

/// Exact q-Wasserstein distance with L-infinity ground cost via the O(m^3)
/// Hungarian algorithm. Throws std::invalid_argument for q < 1.
double wasserstein(std::span<const PersistencePair> x, std::span<const PersistencePair> y, double q);
double wasserstein(const PersistenceDiagram& x, const PersistenceDiagram& y, double q);

enum class DistanceMode { bottleneck, wasserstein };

/// Enumerates every perfect matching of the MatchingInstance. |X| + |Y| <= 6.
double brute_force_distance(std::span<const PersistencePair> x, std::span<const PersistencePair> y,
                            DistanceMode mode, double q = 2.0);

} // namespace specdiag
