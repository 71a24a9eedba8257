#pragma once

#include "specdiag/mesh.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace specdiag::shapes {

/// Subdivided icosahedron on the unit sphere. Level s has 10*4^s + 2 vertices
/// (level 3: 642).
TriMesh icosphere(int subdivisions);

/// Icosphere scaled per axis.
TriMesh ellipsoid(double ax, double ay, double az, int subdivisions);

/// Ring torus in the xy-plane: major radius 1, tube radius `tube_ratio`.
TriMesh torus(double tube_ratio, std::uint32_t ring_segments, std::uint32_t tube_segments);

/// Moves every vertex by an independent uniform offset in [-amplitude, amplitude]^3.
/// Deterministic in `seed`.
TriMesh perturb(const TriMesh& mesh, double amplitude, std::uint64_t seed);

TriMesh path_graph(std::uint32_t n);
TriMesh cycle_graph(std::uint32_t n);
TriMesh complete_graph(std::uint32_t n);

/// Random spanning tree plus `extra_edges` random chords; always connected.
TriMesh random_connected_graph(std::uint32_t n, std::uint32_t extra_edges, std::uint64_t seed);

/// (nx+1) x (ny+1) planar grid in [0,1]^2, each cell split into two triangles.
TriMesh grid(std::uint32_t nx, std::uint32_t ny);

/// Three-class synthetic corpus: unit icosphere, torus with tube ratio 0.35 and
/// a 3:1:1 ellipsoid, `per_class` instances each. Every instance gets uniform
/// vertex noise of amplitude `noise_fraction` times its bounding-box diagonal.
/// Names are "<class>_<k>".
std::vector<std::pair<std::string, TriMesh>> benchmark_corpus(std::size_t per_class, double noise_fraction,
                                                              std::uint64_t seed);

/// Class label of a benchmark_corpus name (text before the last '_').
std::string class_of(const std::string& name);

} // namespace specdiag::shapes
