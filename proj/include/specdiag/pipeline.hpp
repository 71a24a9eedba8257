#pragma once

#include "specdiag/diagram_metrics.hpp"
#include "specdiag/distance_matrix.hpp"
#include "specdiag/laplacian.hpp"
#include "specdiag/mesh.hpp"
#include "specdiag/persistence.hpp"
#include "specdiag/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specdiag {

enum class Aggregation { sum, max };

struct DescriptorConfig {
    LaplacianVariant laplacian_variant = LaplacianVariant::cotangent;
    /// Eigenfunction indices above the kernel; 1 is the Fiedler vector.
    std::vector<std::size_t> eigenfunction_indices{1};
    double eigensolver_tol = 1e-8;
    DistanceMode metric = DistanceMode::bottleneck;
    double wasserstein_q = 2.0;
    Aggregation aggregation = Aggregation::sum;
    /// 0 disables vertex merging.
    double merge_epsilon = 0.0;
    bool allow_multicomponent = false;
    std::uint64_t solver_seed = default_solver_seed;

    /// Throws std::invalid_argument on an out-of-range field.
    void check() const;

    /// Hash of the fields that determine the diagrams (not the metric settings).
    std::uint64_t fingerprint() const;
};

struct MeshDescriptor {
    std::string mesh_id;
    std::map<std::size_t, PersistenceDiagram> diagrams;
    std::uint64_t fingerprint = 0;
};

/// Error raised for one mesh, carrying its id.
class MeshError : public std::runtime_error {
public:
    MeshError(std::string mesh_id, const std::string& what)
        : std::runtime_error(mesh_id + ": " + what), mesh_id_(std::move(mesh_id)) {}
    const std::string& mesh_id() const noexcept { return mesh_id_; }

private:
    std::string mesh_id_;
};

/// Per-vertex scalar fields for every configured eigenfunction index, already
/// canonicalized. In multi-component mode each component is solved and
/// rescaled on its own.
std::vector<ScalarField> descriptor_fields(const TriMesh& mesh, const DescriptorConfig& config);

MeshDescriptor compute_descriptor(const TriMesh& mesh, const std::string& mesh_id, const DescriptorConfig& config);
MeshDescriptor compute_descriptor(const std::filesystem::path& mesh_path, const DescriptorConfig& config);

/// Per-index diagram distance aggregated by sum or max.
/// Throws std::invalid_argument when the fingerprints differ.
double descriptor_distance(const MeshDescriptor& a, const MeshDescriptor& b, const DescriptorConfig& config);

/// Symmetric matrix of descriptor_distance over all pairs; pairs are spread
/// over OpenMP threads and each cell is written once.
DistanceMatrix pairwise_distances(const std::vector<MeshDescriptor>& descriptors, const DescriptorConfig& config);
/// Single-threaded reference for pairwise_distances.
DistanceMatrix pairwise_distances_serial(const std::vector<MeshDescriptor>& descriptors,
                                         const DescriptorConfig& config);

struct CorpusFailure {
    std::string mesh_id;
    std::string message;
};

struct CorpusResult {
    DistanceMatrix matrix;
    std::vector<MeshDescriptor> descriptors;
    std::vector<CorpusFailure> failures;
};

struct CorpusOptions {
    /// When set, descriptors are read from / written to this directory, keyed by
    /// mesh content hash and config fingerprint.
    std::optional<std::filesystem::path> cache_dir;
};

/// Every .off/.obj file in `dir` (sorted by file name), descriptors in
/// parallel, then the full matrix over the meshes that succeeded.
/// Throws std::runtime_error when fewer than 2 meshes survive.
CorpusResult corpus_matrix(const std::filesystem::path& dir, const DescriptorConfig& config,
                           const CorpusOptions& options = {});

std::vector<std::filesystem::path> list_mesh_files(const std::filesystem::path& dir);

/// JSON document: mesh_id, fingerprint (hex), config summary and one diagram per index.
std::string descriptor_to_json(const MeshDescriptor& d, const DescriptorConfig& config);
MeshDescriptor descriptor_from_json(const std::string& text);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string to_hex(std::uint64_t v);

} // namespace specdiag
