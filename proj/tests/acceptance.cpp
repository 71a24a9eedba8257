// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "oracles.hpp"

#include "specdiag/mds.hpp"
#include "specdiag/pipeline.hpp"
#include "specdiag/shapes.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace specdiag;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0 && secs > limit_seconds) {
        o.pass = false;
        o.detail += " [over time limit " + std::to_string(limit_seconds) + " s]";
    }
    if (!o.pass) ++failures;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << o.detail << " ("
              << timing << ")" << std::endl;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

PersistenceDiagram translated(PersistenceDiagram d, double c) {
    for (auto& p : d.points) p = {p.birth + c, p.death + c};
    for (auto& b : d.essential_births) b += c;
    d.cap_value += c;
    return d;
}

fs::path corpus_dir() {
    static const fs::path dir = [] {
        const auto p = fs::temp_directory_path() / ("specdiag_acceptance_" + std::to_string(std::random_device{}()));
        fs::create_directories(p);
        for (const auto& [name, mesh] : shapes::benchmark_corpus(5, 0.02, 1)) {
            std::ofstream out(p / (name + ".off"));
            serialize_off(mesh, out);
        }
        return p;
    }();
    return dir;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

int main() {
    report(1, "persistence oracle equivalence", 10.0, [] {
        std::mt19937_64 rng(2024);
        int mismatches = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const auto n = static_cast<std::uint32_t>(2 + rng() % 11);
            const auto extra = static_cast<std::uint32_t>(rng() % (n + 1));
            const auto g = shapes::random_connected_graph(n, extra, rng());
            // distinct values: a random permutation of 0..n-1, scaled and jittered
            const auto perm = oracle::random_permutation(n, rng());
            std::vector<double> f(n);
            for (std::uint32_t i = 0; i < n; ++i) f[i] = perm[i] + 0.5 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
            if (!same_multiset(zero_persistence(g, f), sublevel_betti_oracle(g, f))) ++mismatches;
        }
        return Outcome{mismatches == 0, std::to_string(200 - mismatches) + "/200 graphs match"};
    });

    report(2, "stability", 30.0, [] {
        const auto mesh = shapes::grid(19, 9); // 200 vertices
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst_excess = -1e300;
        int violations = 0, trials = 0;
        for (double eps : {1e-3, 1e-2, 1e-1})
            for (int t = 0; t < 100; ++t) {
                std::vector<double> f(mesh.vertex_count()), g(mesh.vertex_count());
                for (auto& x : f) x = u(rng);
                for (std::size_t i = 0; i < f.size(); ++i) g[i] = f[i] + eps * u(rng);
                g[0] = f[0] + eps; // attain the sup norm
                double sup = 0;
                for (std::size_t i = 0; i < f.size(); ++i) sup = std::max(sup, std::abs(f[i] - g[i]));
                auto df = zero_persistence(mesh, f);
                auto dg = zero_persistence(mesh, g);
                const double cap = std::max(df.cap_value, dg.cap_value);
                df.cap_value = dg.cap_value = cap;
                const double d = bottleneck(df, dg);
                worst_excess = std::max(worst_excess, d - sup);
                if (d > eps + 1e-9) ++violations;
                ++trials;
            }
        return Outcome{violations == 0, std::to_string(trials - violations) + "/" + std::to_string(trials) +
                                            " within eps, max(d_B - eps) = " + fmt(worst_excess)};
    });

    report(3, "matching oracle", 5.0, [] {
        std::mt19937_64 rng(31337);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0;
        for (int t = 0; t < 100; ++t) {
            const auto total = static_cast<std::size_t>(rng() % 7);
            const auto nx = static_cast<std::size_t>(rng() % (total + 1));
            std::vector<PersistencePair> x, y;
            for (std::size_t i = 0; i < total; ++i) {
                const double b = u(rng);
                (i < nx ? x : y).push_back({b, b + u(rng)});
            }
            worst = std::max(worst, std::abs(bottleneck(x, y) - brute_force_distance(x, y, DistanceMode::bottleneck)));
            for (double q : {1.0, 2.0})
                worst = std::max(worst, std::abs(wasserstein(x, y, q) -
                                                 brute_force_distance(x, y, DistanceMode::wasserstein, q)));
        }
        return Outcome{worst <= 1e-12, "max deviation " + fmt(worst) + " over 100 pairs"};
    });

    report(4, "spectrum fixture", 10.0, [] {
        double worst_rel = 0;
        for (std::uint32_t n : {4u, 10u, 50u}) {
            const auto pairs = smallest_nonzero_eigenpairs(graph_laplacian(shapes::path_graph(n)), 3);
            for (std::size_t j = 1; j <= 3; ++j) {
                const double exact = 2.0 - 2.0 * std::cos(std::numbers::pi * static_cast<double>(j) / n);
                worst_rel = std::max(worst_rel, std::abs(pairs[j - 1].value - exact) / exact);
            }
        }
        const auto sphere = shapes::icosphere(3);
        const auto op = cotangent_laplacian(sphere);
        const auto pairs = smallest_nonzero_eigenpairs(op, 3);
        double worst_res = 0;
        for (const auto& p : pairs) worst_res = std::max(worst_res, eigen_residual(op, p.value, p.vector));
        const bool ok = worst_rel <= 1e-6 && worst_res <= 1e-8 && sphere.vertex_count() == 642;
        return Outcome{ok, "path max rel error " + fmt(worst_rel) + ", icosphere(642) max residual " + fmt(worst_res)};
    });

    report(5, "invariance suite", 0.0, [] {
        const auto mesh = shapes::torus(0.35, 16, 8);
        const auto n = mesh.vertex_count();
        std::mt19937_64 rng(5);
        int relabel_ok = 0, negate_ok = 0, shift_ok = 0, skipped_ties = 0;
        for (int t = 0; t < 50; ++t) {
            const auto f = oracle::random_values(n, rng(), -1, 1);
            const auto perm = oracle::random_permutation(n, rng());
            std::vector<double> moved(n);
            for (std::size_t i = 0; i < n; ++i) moved[perm[i]] = f[i];
            if (same_multiset(zero_persistence(mesh, f), zero_persistence(relabel(mesh, perm), moved))) ++relabel_ok;
        }
        for (int t = 0; t < 50; ++t) {
            auto f = oracle::random_values(n, rng(), -1, 1);
            f[0] = 3.0; // skewed: the sign rule decides, not the tiebreak
            double mean = 0;
            for (double x : f) mean += x / static_cast<double>(n);
            double skew = 0;
            for (double x : f) skew += std::pow((x - mean) / 4.0, 3);
            if (std::abs(skew) <= 1e-12) ++skipped_ties;
            std::vector<double> neg(n);
            for (std::size_t i = 0; i < n; ++i) neg[i] = -f[i];
            if (canonicalize({f, ""}).values == canonicalize({neg, ""}).values) ++negate_ok;
        }
        for (int t = 0; t < 50; ++t) {
            // dyadic values and shift keep every sum exact
            std::vector<double> f(n), g(n);
            const double c = static_cast<double>(rng() % 64) / 16.0 - 2.0;
            for (std::size_t i = 0; i < n; ++i) {
                f[i] = static_cast<double>(rng() % (1u << 20)) * 0x1.0p-20;
                g[i] = f[i] + c;
            }
            const auto a = sorted(translated(zero_persistence(mesh, f), c));
            const auto b = sorted(zero_persistence(mesh, g));
            if (a.points == b.points && a.essential_births == b.essential_births && a.cap_value == b.cap_value) ++shift_ok;
        }
        const bool ok = relabel_ok == 50 && negate_ok == 50 && shift_ok == 50 && skipped_ties == 0;
        return Outcome{ok, "relabel " + std::to_string(relabel_ok) + "/50, negation " + std::to_string(negate_ok) +
                               "/50, shift " + std::to_string(shift_ok) + "/50"};
    });

    report(6, "corpus clustering", 120.0, [] {
        const DescriptorConfig config; // cotangent, Fiedler, bottleneck
        const auto result = corpus_matrix(corpus_dir(), config);
        const auto& m = result.matrix;
        const auto n = m.size();
        double intra = 0, inter = 0;
        int n_intra = 0, n_inter = 0, zero_pairs = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const bool same = shapes::class_of(m.ids[i]) == shapes::class_of(m.ids[j]);
                (same ? intra : inter) += m.at(i, j);
                ++(same ? n_intra : n_inter);
                if (m.at(i, j) == 0.0) ++zero_pairs;
            }
        intra /= n_intra;
        inter /= n_inter;
        // leave-one-out 1-NN, ties to the lowest index
        int correct = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = i == 0 ? 1 : 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && m.at(i, j) < m.at(i, best)) best = j;
            if (shapes::class_of(m.ids[best]) == shapes::class_of(m.ids[i])) ++correct;
        }
        const double accuracy = static_cast<double>(correct) / static_cast<double>(n);
        const bool ok = result.failures.empty() && n == 15 && intra < inter && accuracy >= 0.8;
        return Outcome{ok, "mean intra " + fmt(intra) + ", mean inter " + fmt(inter) + ", 1-NN accuracy " +
                               std::to_string(correct) + "/" + std::to_string(n) + ", zero-distance pairs " +
                               std::to_string(zero_pairs) + "/" + std::to_string(n_intra + n_inter)};
    });

    report(7, "determinism of dist", 0.0, [] {
        const auto out_a = corpus_dir() / "run_a.csv";
        const auto out_b = corpus_dir() / "run_b.csv";
        const std::string cli = SPECDIAG_CLI_PATH;
        const auto cmd = [&](const fs::path& out) {
            return "\"" + cli + "\" dist \"" + corpus_dir().string() + "\" --out \"" + out.string() + "\"";
        };
        const int ra = std::system(cmd(out_a).c_str());
        const int rb = std::system(cmd(out_b).c_str());
        const auto a = read_bytes(out_a), b = read_bytes(out_b);
        fs::remove(out_a);
        fs::remove(out_b);
        const bool ok = ra == 0 && rb == 0 && !a.empty() && a == b;
        return Outcome{ok, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different") +
                               ", exit codes " + std::to_string(ra) + "/" + std::to_string(rb)};
    });

    report(8, "MDS fixture", 0.0, [] {
        DistanceMatrix m({"a", "b", "c"});
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m.at(i, j) = i == j ? 0.0 : 1.0;
        const auto e = mds_embed(m, 2);
        return Outcome{e.max_abs_error < 1e-9, "max pairwise error " + fmt(e.max_abs_error)};
    });

    std::error_code ec;
    fs::remove_all(corpus_dir(), ec);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
