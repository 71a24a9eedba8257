#pragma once

#include "specdiag/mesh.hpp"
#include "specdiag/spectral.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace specdiag {

struct PersistencePair {
    double birth = 0.0;
    double death = 0.0;

    bool on_diagonal() const noexcept { return birth == death; }
    double persistence() const noexcept { return death - birth; }

    friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

/// 0-dimensional diagram of a lower-star filtration, in field values.
/// Points with birth == death are kept (they are marked by on_diagonal()).
struct PersistenceDiagram {
    std::vector<PersistencePair> points;
    /// One per connected component; these classes never die.
    std::vector<double> essential_births;
    /// Death assigned to essential classes by finitize(); the field maximum.
    double cap_value = 0.0;
    std::string provenance;
};

/// Vertex indices sorted by (value, index).
using FiltrationOrder = std::vector<std::uint32_t>;

FiltrationOrder lower_star_order(std::span<const double> values);

/// Union-find sweep over the lower-star filtration with the elder rule.
PersistenceDiagram zero_persistence(const TriMesh& mesh, std::span<const double> values);
PersistenceDiagram zero_persistence(const TriMesh& mesh, const ScalarField& field);

/// Test oracle: recomputes the components of every prefix complex from scratch
/// and reads births and deaths off the changes between consecutive prefixes.
/// Limited to 64 vertices.
PersistenceDiagram sublevel_betti_oracle(const TriMesh& mesh, std::span<const double> values);

/// Finite points for the matching distances: essential births capped at
/// cap_value, points on the diagonal dropped.
std::vector<PersistencePair> finitize(const PersistenceDiagram& diagram);

/// Vertices with no neighbor earlier in the filtration order.
std::size_t count_local_minima(const TriMesh& mesh, std::span<const double> values);

/// Canonical multiset form: points and essential births sorted ascending.
PersistenceDiagram sorted(PersistenceDiagram diagram);

bool same_multiset(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// JSON document {"points": [[b, d], ...], "essential_births": [...],
/// "cap_value": c, "provenance": "..."} with round-trip number rendering.
std::string to_json(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_json(const std::string& text);

} // namespace specdiag
