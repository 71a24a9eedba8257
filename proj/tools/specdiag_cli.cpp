// specdiag command line: persistence descriptors of Laplacian eigenfunctions.
//
//   specdiag compute <mesh> [--laplacian graph|cotangent] [--eigs 1,2,3] [--tol 1e-8] [--out file]
//   specdiag dist <dir> [--metric bottleneck|wasserstein] [--q 2] [--agg sum|max] [--out matrix.csv]
//   specdiag embed <matrix.csv> [--dim 2] [--out coords.csv]
//   specdiag validate <mesh>
//   specdiag generate <dir> [--per-class 5] [--noise 0.02] [--seed 1]
//
// Exit codes: 0 success, 1 partial failure (some meshes skipped by dist), 2 fatal.

#include "specdiag/mds.hpp"
#include "specdiag/pipeline.hpp"
#include "specdiag/shapes.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace specdiag;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_partial = 1;
constexpr int exit_fatal = 2;

struct DescriptorFlags {
    std::string laplacian = "cotangent";
    std::string eigs = "1";
    double tol = 1e-8;
    double merge_epsilon = 0.0;
    bool allow_multicomponent = false;
    std::uint64_t seed = default_solver_seed;

    void attach(CLI::App* cmd) {
        cmd->add_option("--laplacian", laplacian, "Laplacian discretization")
            ->check(CLI::IsMember({"graph", "cotangent"}));
        cmd->add_option("--eigs", eigs, "Comma-separated eigenfunction indices (1 = Fiedler vector)");
        cmd->add_option("--tol", tol, "Eigensolver residual tolerance")->check(CLI::PositiveNumber);
        cmd->add_option("--merge-epsilon", merge_epsilon, "Merge vertices closer than this distance")
            ->check(CLI::NonNegativeNumber);
        cmd->add_flag("--allow-multicomponent", allow_multicomponent,
                      "Accept meshes with several connected components (solved per component)");
        cmd->add_option("--seed", seed, "Eigensolver start-block seed");
    }

    DescriptorConfig config() const {
        DescriptorConfig c;
        c.laplacian_variant = laplacian == "graph" ? LaplacianVariant::graph : LaplacianVariant::cotangent;
        c.eigenfunction_indices.clear();
        std::stringstream ss(eigs);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            std::size_t pos = 0;
            const long long v = std::stoll(item, &pos);
            if (pos != item.size() || v < 1) throw std::invalid_argument("bad eigenfunction index '" + item + "'");
            c.eigenfunction_indices.push_back(static_cast<std::size_t>(v));
        }
        c.eigensolver_tol = tol;
        c.merge_epsilon = merge_epsilon;
        c.allow_multicomponent = allow_multicomponent;
        c.solver_seed = seed;
        c.check();
        return c;
    }
};

// Writes to `path`, or stdout when empty.
template <class Fn>
void emit(const std::string& path, Fn&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write(out);
}

void set_threads(int flag_value) {
    int threads = 0;
    if (const char* env = std::getenv("SPECDIAG_THREADS")) threads = std::atoi(env);
    if (flag_value > 0) threads = flag_value;
    if (threads > 0) omp_set_num_threads(threads);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persistence diagrams of Laplacian eigenfunctions on triangle meshes"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (overrides SPECDIAG_THREADS)");

    // compute
    auto* compute = app.add_subcommand("compute", "Descriptor (one 0-dim diagram per eigenfunction) of one mesh");
    std::string compute_mesh, compute_out;
    DescriptorFlags compute_flags;
    compute->add_option("mesh", compute_mesh, "OFF or OBJ mesh")->required();
    compute->add_option("--out", compute_out, "Output JSON file (default stdout)");
    compute_flags.attach(compute);

    // dist
    auto* dist = app.add_subcommand("dist", "Pairwise distance matrix over a directory of meshes");
    std::string dist_dir, dist_out, metric = "bottleneck", agg = "sum", cache_dir;
    double q = 2.0;
    DescriptorFlags dist_flags;
    dist->add_option("dir", dist_dir, "Directory of .off/.obj meshes")->required()->check(CLI::ExistingDirectory);
    dist->add_option("--metric", metric, "Diagram distance")->check(CLI::IsMember({"bottleneck", "wasserstein"}));
    dist->add_option("--q", q, "Wasserstein exponent")->check(CLI::Range(1.0, 1e300));
    dist->add_option("--agg", agg, "Aggregation over eigenfunctions")->check(CLI::IsMember({"sum", "max"}));
    dist->add_option("--out", dist_out, "Output CSV (default stdout)");
    dist->add_option("--cache", cache_dir, "Descriptor cache directory");
    dist_flags.attach(dist);

    // embed
    auto* embed = app.add_subcommand("embed", "Classical MDS of a distance matrix CSV");
    std::string embed_in, embed_out;
    std::size_t dim = 2;
    embed->add_option("matrix", embed_in, "Matrix CSV written by dist")->required()->check(CLI::ExistingFile);
    embed->add_option("--dim", dim, "Embedding dimension");
    embed->add_option("--out", embed_out, "Output CSV (default stdout)");

    // validate
    auto* check = app.add_subcommand("validate", "Report manifoldness and connectivity of a mesh");
    std::string check_mesh;
    check->add_option("mesh", check_mesh, "OFF or OBJ mesh")->required();

    // generate
    auto* generate = app.add_subcommand("generate", "Write the synthetic sphere/torus/ellipsoid corpus as OFF files");
    std::string gen_dir;
    std::size_t per_class = 5;
    double noise = 0.02;
    std::uint64_t gen_seed = 1;
    generate->add_option("dir", gen_dir, "Output directory")->required();
    generate->add_option("--per-class", per_class, "Instances per class");
    generate->add_option("--noise", noise, "Noise amplitude as a fraction of the bounding-box diagonal");
    generate->add_option("--seed", gen_seed, "Noise seed");

    CLI11_PARSE(app, argc, argv);
    set_threads(threads);

    try {
        if (*compute) {
            const auto config = compute_flags.config();
            const auto d = compute_descriptor(std::filesystem::path(compute_mesh), config);
            emit(compute_out, [&](std::ostream& out) { out << descriptor_to_json(d, config) << '\n'; });
            return exit_ok;
        }
        if (*dist) {
            auto config = dist_flags.config();
            config.metric = metric == "bottleneck" ? DistanceMode::bottleneck : DistanceMode::wasserstein;
            config.wasserstein_q = q;
            config.aggregation = agg == "sum" ? Aggregation::sum : Aggregation::max;
            CorpusOptions options;
            if (!cache_dir.empty()) options.cache_dir = cache_dir;
            const auto result = corpus_matrix(dist_dir, config, options);
            emit(dist_out, [&](std::ostream& out) { write_csv(result.matrix, out); });
            for (const auto& f : result.failures) std::cerr << "skipped " << f.message << '\n';
            return result.failures.empty() ? exit_ok : exit_partial;
        }
        if (*embed) {
            std::ifstream in(embed_in);
            const auto matrix = read_matrix_csv(in);
            const auto e = mds_embed(matrix, dim);
            emit(embed_out, [&](std::ostream& out) { write_coordinates_csv(e, out); });
            std::cerr << "stress " << format_double(e.stress) << " max_abs_error " << format_double(e.max_abs_error)
                      << '\n';
            return exit_ok;
        }
        if (*check) {
            const auto mesh = read_mesh(check_mesh);
            const auto r = validate(mesh);
            std::cout << "vertices " << mesh.vertex_count() << '\n'
                      << "triangles " << mesh.triangle_count() << '\n'
                      << "edges " << mesh.edge_count() << '\n'
                      << "is_manifold " << (r.is_manifold ? "true" : "false") << '\n'
                      << "component_count " << r.component_count << '\n'
                      << "boundary_edge_count " << r.boundary_edge_count << '\n'
                      << "non_manifold_edge_count " << r.non_manifold_edge_count << '\n'
                      << "duplicate_vertex_warnings " << r.duplicate_vertex_warnings << '\n';
            return exit_ok;
        }
        if (*generate) {
            std::filesystem::create_directories(gen_dir);
            for (const auto& [name, mesh] : shapes::benchmark_corpus(per_class, noise, gen_seed)) {
                std::ofstream out(std::filesystem::path(gen_dir) / (name + ".off"));
                serialize_off(mesh, out);
            }
            return exit_ok;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_fatal;
    }
    return exit_fatal;
}
