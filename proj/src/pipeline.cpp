#include "specdiag/pipeline.hpp"

#include "specdiag/diagram_metrics.hpp"
#include "specdiag/union_find.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace specdiag {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void DescriptorConfig::check() const {
    if (eigenfunction_indices.empty()) throw std::invalid_argument("at least one eigenfunction index is required");
    for (auto i : eigenfunction_indices)
        if (i < 1) throw std::invalid_argument("eigenfunction indices must be >= 1");
    if (!(eigensolver_tol > 0.0)) throw std::invalid_argument("eigensolver tolerance must be positive");
    if (!(wasserstein_q >= 1.0)) throw std::invalid_argument("wasserstein q must be >= 1");
    if (!(merge_epsilon >= 0.0)) throw std::invalid_argument("merge epsilon must be >= 0");
}

std::uint64_t DescriptorConfig::fingerprint() const {
    std::ostringstream s;
    s << "laplacian=" << to_string(laplacian_variant) << ";eigs=";
    for (auto i : eigenfunction_indices) s << i << ',';
    s << ";tol=" << format_double(eigensolver_tol) << ";merge=" << format_double(merge_epsilon)
      << ";multi=" << allow_multicomponent << ";seed=" << solver_seed;
    return fnv1a64(s.str());
}

namespace {

std::vector<std::size_t> sorted_indices(const DescriptorConfig& config) {
    std::vector<std::size_t> idx = config.eigenfunction_indices;
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

} // namespace

std::vector<ScalarField> descriptor_fields(const TriMesh& mesh, const DescriptorConfig& config) {
    const auto indices = sorted_indices(config);
    const EigenSolverOptions options{.tol = config.eigensolver_tol, .seed = config.solver_seed};
    const auto components = component_count(mesh);
    if (components <= 1 || !config.allow_multicomponent)
        return eigenfunction_fields(mesh, config.laplacian_variant, indices, options);

    // one solve per component; each piece is canonicalized on its own
    const auto n = mesh.vertex_count();
    DisjointSet ds(n);
    for (const auto& e : mesh.edges()) ds.unite(e[0], e[1]);
    std::map<std::uint32_t, std::vector<std::uint32_t>> members;
    for (std::uint32_t v = 0; v < n; ++v) members[ds.find(v)].push_back(v);

    std::vector<ScalarField> out(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        out[k].values.assign(n, 0.0);
        out[k].provenance = std::string("eigenfunction ") + std::to_string(indices[k]) + " (" +
                            to_string(config.laplacian_variant) + " Laplacian, per component)";
    }
    std::vector<std::uint32_t> local(n);
    for (const auto& [root, verts] : members) {
        for (std::uint32_t i = 0; i < verts.size(); ++i) local[verts[i]] = i;
        std::vector<Vec3> pos;
        for (auto v : verts) pos.push_back(mesh.vertices()[v]);
        std::vector<Triangle> tris;
        for (const auto& t : mesh.triangles())
            if (ds.find(t[0]) == root) tris.push_back({local[t[0]], local[t[1]], local[t[2]]});
        std::vector<Edge> edges;
        for (const auto& e : mesh.edges())
            if (ds.find(e[0]) == root) edges.push_back({local[e[0]], local[e[1]]});
        const TriMesh piece(std::move(pos), std::move(tris), std::move(edges));
        const auto fields = eigenfunction_fields(piece, config.laplacian_variant, indices, options);
        for (std::size_t k = 0; k < indices.size(); ++k)
            for (std::uint32_t i = 0; i < verts.size(); ++i) out[k].values[verts[i]] = fields[k].values[i];
    }
    return out;
}

MeshDescriptor compute_descriptor(const TriMesh& input, const std::string& mesh_id, const DescriptorConfig& config) {
    config.check();
    try {
        const TriMesh mesh = config.merge_epsilon > 0.0 ? merge_vertices(input, config.merge_epsilon) : input;
        const auto report = validate(mesh);
        if (!report.is_manifold)
            throw std::runtime_error(std::to_string(report.non_manifold_edge_count) +
                                     " edges are shared by more than two triangles");
        if (report.component_count > 1 && !config.allow_multicomponent)
            throw std::runtime_error("mesh has " + std::to_string(report.component_count) +
                                     " connected components (use --allow-multicomponent)");
        const auto indices = sorted_indices(config);
        const auto fields = descriptor_fields(mesh, config);
        MeshDescriptor d;
        d.mesh_id = mesh_id;
        d.fingerprint = config.fingerprint();
        for (std::size_t k = 0; k < indices.size(); ++k) d.diagrams.emplace(indices[k], zero_persistence(mesh, fields[k]));
        return d;
    } catch (const MeshError&) {
        throw;
    } catch (const std::exception& e) {
        throw MeshError(mesh_id, e.what());
    }
}

MeshDescriptor compute_descriptor(const std::filesystem::path& mesh_path, const DescriptorConfig& config) {
    const auto id = mesh_path.stem().string();
    TriMesh mesh;
    try {
        mesh = read_mesh(mesh_path);
    } catch (const std::exception& e) {
        throw MeshError(id, e.what());
    }
    return compute_descriptor(mesh, id, config);
}

double descriptor_distance(const MeshDescriptor& a, const MeshDescriptor& b, const DescriptorConfig& config) {
    if (a.fingerprint != b.fingerprint)
        throw std::invalid_argument("descriptors " + a.mesh_id + " and " + b.mesh_id +
                                    " were computed with different configurations");
    double total = 0.0;
    for (const auto& [index, da] : a.diagrams) {
        auto it = b.diagrams.find(index);
        if (it == b.diagrams.end())
            throw std::invalid_argument("descriptor " + b.mesh_id + " lacks eigenfunction " + std::to_string(index));
        const double d = config.metric == DistanceMode::bottleneck ? bottleneck(da, it->second)
                                                                   : wasserstein(da, it->second, config.wasserstein_q);
        total = config.aggregation == Aggregation::sum ? total + d : std::max(total, d);
    }
    return total;
}

DistanceMatrix pairwise_distances(const std::vector<MeshDescriptor>& descriptors, const DescriptorConfig& config) {
    std::vector<std::string> ids;
    for (const auto& d : descriptors) ids.push_back(d.mesh_id);
    DistanceMatrix m(std::move(ids));
    const auto n = static_cast<std::int64_t>(descriptors.size());
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    const auto count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t p = 0; p < count; ++p) {
        const auto [i, j] = pairs[p];
        const double d = descriptor_distance(descriptors[i], descriptors[j], config);
        m.at(i, j) = d;
        m.at(j, i) = d;
    }
    return m;
}

DistanceMatrix pairwise_distances_serial(const std::vector<MeshDescriptor>& descriptors,
                                         const DescriptorConfig& config) {
    std::vector<std::string> ids;
    for (const auto& d : descriptors) ids.push_back(d.mesh_id);
    DistanceMatrix m(std::move(ids));
    for (std::size_t i = 0; i < descriptors.size(); ++i)
        for (std::size_t j = i + 1; j < descriptors.size(); ++j) {
            const double d = descriptor_distance(descriptors[i], descriptors[j], config);
            m.at(i, j) = d;
            m.at(j, i) = d;
        }
    return m;
}

std::vector<std::filesystem::path> list_mesh_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".off" || ext == ".obj") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    return files;
}

std::string descriptor_to_json(const MeshDescriptor& d, const DescriptorConfig& config) {
    nlohmann::json j;
    j["mesh_id"] = d.mesh_id;
    j["fingerprint"] = to_hex(d.fingerprint);
    j["config"] = {{"laplacian", to_string(config.laplacian_variant)},
                   {"eigenfunction_indices", sorted_indices(config)},
                   {"eigensolver_tol", config.eigensolver_tol},
                   {"merge_epsilon", config.merge_epsilon},
                   {"allow_multicomponent", config.allow_multicomponent}};
    j["diagrams"] = nlohmann::json::object();
    for (const auto& [index, diagram] : d.diagrams)
        j["diagrams"][std::to_string(index)] = nlohmann::json::parse(to_json(diagram));
    return j.dump(2);
}

MeshDescriptor descriptor_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    MeshDescriptor d;
    d.mesh_id = j.at("mesh_id").get<std::string>();
    d.fingerprint = std::stoull(j.at("fingerprint").get<std::string>(), nullptr, 16);
    for (const auto& [key, value] : j.at("diagrams").items())
        d.diagrams.emplace(std::stoul(key), diagram_from_json(value.dump()));
    return d;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

MeshDescriptor descriptor_with_cache(const std::filesystem::path& file, const std::string& id,
                                     const DescriptorConfig& config, const CorpusOptions& options, std::size_t slot) {
    if (!options.cache_dir) return compute_descriptor(file, config);
    std::string bytes;
    try {
        bytes = read_file(file);
    } catch (const std::exception& e) {
        throw MeshError(id, e.what());
    }
    const auto key = to_hex(fnv1a64(bytes)) + "-" + to_hex(config.fingerprint()) + ".json";
    const auto cached = *options.cache_dir / key;
    if (std::filesystem::exists(cached)) {
        try {
            auto d = descriptor_from_json(read_file(cached));
            if (d.fingerprint == config.fingerprint()) {
                d.mesh_id = id;
                return d;
            }
        } catch (const std::exception&) {
            // unreadable cache entry: recompute and overwrite
        }
    }
    auto d = compute_descriptor(file, config);
    d.mesh_id = id;
    std::filesystem::create_directories(*options.cache_dir);
    // identical files share a key; write then rename so readers never see a partial entry
    auto staging = cached;
    staging += "." + std::to_string(slot) + ".tmp";
    {
        std::ofstream out(staging);
        out << descriptor_to_json(d, config);
    }
    std::filesystem::rename(staging, cached);
    return d;
}

} // namespace

CorpusResult corpus_matrix(const std::filesystem::path& dir, const DescriptorConfig& config,
                           const CorpusOptions& options) {
    config.check();
    const auto files = list_mesh_files(dir);

    // ids are file stems; colliding stems fall back to the full file name
    std::vector<std::string> ids;
    std::multiset<std::string> stems;
    for (const auto& f : files) stems.insert(f.stem().string());
    for (const auto& f : files)
        ids.push_back(stems.count(f.stem().string()) > 1 ? f.filename().string() : f.stem().string());

    const auto n = static_cast<std::int64_t>(files.size());
    std::vector<std::optional<MeshDescriptor>> slots(files.size());
    std::vector<std::string> errors(files.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            auto d = descriptor_with_cache(files[i], ids[i], config, options, static_cast<std::size_t>(i));
            d.mesh_id = ids[i];
            slots[i] = std::move(d);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }

    CorpusResult result;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (slots[i]) result.descriptors.push_back(std::move(*slots[i]));
        else result.failures.push_back({ids[i], errors[i]});
    }
    if (result.descriptors.size() < 2)
        throw std::runtime_error("need at least 2 usable meshes in " + dir.string() + ", found " +
                                 std::to_string(result.descriptors.size()));
    result.matrix = pairwise_distances(result.descriptors, config);
    return result;
}

} // namespace specdiag
