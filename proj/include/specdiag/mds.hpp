#pragma once

#include "specdiag/distance_matrix.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace specdiag {

struct Embedding {
    std::vector<std::string> ids;
    std::size_t dim = 0;
    /// Row-major, ids.size() x dim.
    std::vector<double> coords;
    /// Kruskal stress-1: sqrt(sum (d_emb - d)^2 / sum d^2), 0 for an all-zero matrix.
    double stress = 0.0;
    /// max over pairs of |d_emb - d|.
    double max_abs_error = 0.0;

    double coord(std::size_t i, std::size_t k) const { return coords[i * dim + k]; }
    double distance(std::size_t i, std::size_t j) const;
};

/// Classical (Torgerson) MDS: top eigenvectors of -1/2 J D^2 J scaled by the
/// square roots of their eigenvalues (negatives clamped to 0). Each axis is
/// flipped so its largest-magnitude coordinate is positive.
/// Throws std::invalid_argument when dim >= matrix size.
Embedding mds_embed(const DistanceMatrix& matrix, std::size_t dim = 2);

/// `id,x,y[,...]` rows with a header line.
void write_coordinates_csv(const Embedding& e, std::ostream& out);

} // namespace specdiag
