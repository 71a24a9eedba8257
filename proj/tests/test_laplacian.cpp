#include "oracles.hpp"

#include "specdiag/error.hpp"
#include "specdiag/laplacian.hpp"
#include "specdiag/shapes.hpp"
#include "specdiag/spectral.hpp"

#include <doctest.h>

#include <cmath>

using namespace specdiag;

namespace {

TriMesh right_isosceles() { return TriMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}}); }

TriMesh equilateral() { return TriMesh({{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}}, {{0, 1, 2}}); }

void check_against_dense(const SparseSymOperator& op, const Eigen::MatrixXd& L, double tol) {
    const auto n = op.dimension();
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) CHECK(std::abs(op.entry(i, j) - L(i, j)) <= tol);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

TEST_CASE("graph Laplacian of P3") {
    const auto op = graph_laplacian(shapes::path_graph(3));
    CHECK(op.dimension() == 3);
    CHECK(op.nonzeros() == 7);
    const double expected[3][3] = {{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}};
    for (std::uint32_t i = 0; i < 3; ++i)
        for (std::uint32_t j = 0; j < 3; ++j) CHECK(op.entry(i, j) == expected[i][j]);
    CHECK_FALSE(op.has_mass());
    CHECK(specdiag::apply(op, std::vector<double>{1, 0, -1}) == std::vector<double>{1, 0, -1});
}

TEST_CASE("graph Laplacian of a single vertex is the zero 1x1 matrix") {
    const auto op = graph_laplacian(TriMesh::from_graph(1, {}));
    CHECK(op.dimension() == 1);
    CHECK(op.entry(0, 0) == 0.0);
}

TEST_CASE("graph Laplacian matches the dense oracle") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto m = shapes::random_connected_graph(15, 10, seed);
        check_against_dense(graph_laplacian(m), oracle::dense_graph_laplacian(m), 0.0);
    }
    const auto torus = shapes::torus(0.35, 8, 6);
    check_against_dense(graph_laplacian(torus), oracle::dense_graph_laplacian(torus), 0.0);
}

TEST_CASE("cotangent Laplacian on a right isosceles triangle") {
    const auto op = cotangent_laplacian(right_isosceles());
    const double expected[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
    for (std::uint32_t i = 0; i < 3; ++i)
        for (std::uint32_t j = 0; j < 3; ++j) CHECK(op.entry(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-14));
    REQUIRE(op.has_mass());
    for (double m : op.mass()) CHECK(m == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("cotangent Laplacian on an equilateral triangle") {
    const auto op = cotangent_laplacian(equilateral());
    for (std::uint32_t i = 0; i < 3; ++i)
        for (std::uint32_t j = 0; j < 3; ++j) {
            const double want = i == j ? 0.5773502691896257 : -0.2886751345948128;
            CHECK(std::abs(op.entry(i, j) - want) <= 1e-12);
        }
    for (double m : op.mass()) CHECK(std::abs(m - 0.14433756729740643) <= 1e-12);
}

TEST_CASE("cotangent Laplacian matches the acos-based dense oracle") {
    for (const auto& m : {shapes::perturb(shapes::icosphere(1), 0.05, 3), shapes::perturb(shapes::grid(5, 4), 0.02, 9),
                          shapes::torus(0.35, 10, 6)}) {
        const auto op = cotangent_laplacian(m);
        const auto [L, M] = oracle::dense_cotangent(m);
        check_against_dense(op, L, 1e-10);
        for (std::size_t i = 0; i < m.vertex_count(); ++i) CHECK(std::abs(op.mass()[i] - M[i]) <= 1e-12);
    }
}

TEST_CASE("structural properties") {
    const auto meshes = {shapes::perturb(shapes::icosphere(2), 0.02, 11), shapes::torus(0.35, 16, 8)};
    for (const auto& m : meshes)
        for (auto variant : {LaplacianVariant::graph, LaplacianVariant::cotangent}) {
            CAPTURE(to_string(variant));
            const auto op = build_laplacian(m, variant);
            const auto n = op.dimension();

            // zero row sums and exact symmetry
            for (std::uint32_t i = 0; i < n; ++i) {
                double s = 0, scale = 0;
                for (auto k = op.row_offsets()[i]; k < op.row_offsets()[i + 1]; ++k) {
                    s += op.values()[k];
                    scale += std::abs(op.values()[k]);
                    CHECK(op.entry(op.columns()[k], i) == op.values()[k]);
                }
                CHECK(std::abs(s) <= 1e-12 * (1 + scale));
            }

            // constants in the kernel
            const auto ones = specdiag::apply(op, std::vector<double>(n, 1.0));
            for (double y : ones) CHECK(std::abs(y) <= 1e-12);

            // positive semidefinite on random vectors
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                const auto x = oracle::random_values(n, seed, -1, 1);
                CHECK(dot(x, specdiag::apply(op, x)) >= -1e-12);
            }

            // linearity
            const auto x = oracle::random_values(n, 1), y = oracle::random_values(n, 2);
            std::vector<double> comb(n);
            for (std::size_t i = 0; i < n; ++i) comb[i] = 2.5 * x[i] - 0.75 * y[i];
            const auto lx = specdiag::apply(op, x), ly = specdiag::apply(op, y), lc = specdiag::apply(op, comb);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(lc[i] - (2.5 * lx[i] - 0.75 * ly[i])) <= 1e-12);
        }
}

TEST_CASE("apply agrees with the dense product and with apply_serial") {
    const auto m = shapes::perturb(shapes::icosphere(2), 0.02, 5);
    const auto op = cotangent_laplacian(m);
    const auto [L, M] = oracle::dense_cotangent(m);
    const auto x = oracle::random_values(m.vertex_count(), 17, -1, 1);
    const auto dense = oracle::dense_apply(L, x);
    const auto sparse = specdiag::apply(op, x);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(dense[i] - sparse[i]) <= 1e-10);

    // large enough to take the threaded branch
    const auto big = cotangent_laplacian(shapes::icosphere(5));
    const auto xb = oracle::random_values(big.dimension(), 3, -1, 1);
    CHECK(specdiag::apply(big, xb) == apply_serial(big, xb));
}

TEST_CASE("triangle vertex order does not change the operator") {
    const auto m = shapes::perturb(shapes::icosphere(1), 0.05, 21);
    std::vector<Triangle> rotated, flipped;
    for (const auto& t : m.triangles()) {
        rotated.push_back({t[1], t[2], t[0]});
        flipped.push_back({t[0], t[2], t[1]});
    }
    const std::vector<Vec3> v(m.vertices().begin(), m.vertices().end());
    const auto base = cotangent_laplacian(m);
    for (const auto& tris : {rotated, flipped}) {
        const auto op = cotangent_laplacian(TriMesh(v, tris));
        CHECK(std::vector<double>(op.values().begin(), op.values().end()) ==
              std::vector<double>(base.values().begin(), base.values().end()));
        CHECK(std::vector<double>(op.mass().begin(), op.mass().end()) ==
              std::vector<double>(base.mass().begin(), base.mass().end()));
    }
}

TEST_CASE("uniform scaling leaves stiffness unchanged and scales mass by s^2") {
    const auto m = shapes::perturb(shapes::torus(0.35, 12, 6), 0.01, 4);
    const double s = 3.0;
    std::vector<Vec3> v(m.vertices().begin(), m.vertices().end());
    for (auto& p : v) p = {s * p[0], s * p[1], s * p[2]};
    const auto a = cotangent_laplacian(m);
    const auto b = cotangent_laplacian(TriMesh(v, {m.triangles().begin(), m.triangles().end()}));
    for (std::size_t k = 0; k < a.nonzeros(); ++k) CHECK(std::abs(a.values()[k] - b.values()[k]) <= 1e-12);
    for (std::size_t i = 0; i < m.vertex_count(); ++i)
        CHECK(b.mass()[i] == doctest::Approx(s * s * a.mass()[i]).epsilon(1e-12));
}

TEST_CASE("cotangent errors") {
    SUBCASE("degenerate triangle") {
        const TriMesh m({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 1, 3}});
        CHECK_THROWS_AS(cotangent_laplacian(m), GeometryError);
        CHECK_NOTHROW(graph_laplacian(m));
    }
    SUBCASE("vertex without a triangle") {
        CHECK_THROWS_AS(cotangent_laplacian(shapes::path_graph(4)), GeometryError);
    }
}

TEST_CASE("apply rejects a wrong-length vector") {
    const auto op = graph_laplacian(shapes::path_graph(4));
    CHECK_THROWS_AS(specdiag::apply(op, std::vector<double>(3, 0.0)), DimensionError);
    CHECK_THROWS_AS(apply_serial(op, std::vector<double>(5, 0.0)), DimensionError);
}
