// Threaded kernels against their serial references.
//
//   bench_kernels [repetitions]
//
// Prints wall time per call and the speedup, and checks the outputs agree.

#include "specdiag/pipeline.hpp"
#include "specdiag/shapes.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <random>

using namespace specdiag;

namespace {

template <class Fn>
double seconds_per_call(int reps, Fn&& fn) {
    fn(); // warm-up
    const double t0 = omp_get_wtime();
    for (int r = 0; r < reps; ++r) fn();
    return (omp_get_wtime() - t0) / reps;
}

void line(const char* name, double serial, double parallel, bool same) {
    std::printf("%-28s serial %10.3f ms   parallel %10.3f ms   speedup %5.2fx   %s\n", name, serial * 1e3,
                parallel * 1e3, serial / parallel, same ? "outputs identical" : "OUTPUTS DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 20;
    std::printf("threads: %d\n", omp_get_max_threads());

    // sparse apply on a 163842-vertex icosphere
    {
        const auto op = cotangent_laplacian(shapes::icosphere(7));
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-1, 1);
        std::vector<double> x(op.dimension());
        for (auto& v : x) v = u(rng);
        std::vector<double> ys, yp;
        const double s = seconds_per_call(reps, [&] { ys = apply_serial(op, x); });
        const double p = seconds_per_call(reps, [&] { yp = specdiag::apply(op, x); });
        line("laplacian apply (n=163842)", s, p, ys == yp);
    }

    // pairwise diagram distances over 40 random-field descriptors (~30 points each)
    {
        const auto mesh = shapes::icosphere(2);
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0, 1);
        DescriptorConfig config;
        std::vector<MeshDescriptor> descriptors;
        for (int i = 0; i < 40; ++i) {
            std::vector<double> f(mesh.vertex_count());
            for (auto& v : f) v = u(rng);
            MeshDescriptor d;
            d.mesh_id = "m" + std::to_string(i);
            d.fingerprint = config.fingerprint();
            d.diagrams.emplace(1, zero_persistence(mesh, f));
            descriptors.push_back(std::move(d));
        }
        for (auto mode : {DistanceMode::bottleneck, DistanceMode::wasserstein}) {
            config.metric = mode;
            const int r = std::max(1, reps / 5);
            DistanceMatrix ms, mp;
            const double s = seconds_per_call(r, [&] { ms = pairwise_distances_serial(descriptors, config); });
            const double p = seconds_per_call(r, [&] { mp = pairwise_distances(descriptors, config); });
            line(mode == DistanceMode::bottleneck ? "pairwise bottleneck (40)" : "pairwise wasserstein (40)", s, p,
                 ms.values == mp.values);
        }
    }
    return 0;
}
