#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// they are used to check.

#include "specdiag/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using specdiag::TriMesh;

// Dense D - A from the edge list.
inline Eigen::MatrixXd dense_graph_laplacian(const TriMesh& mesh) {
    const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : mesh.edges()) {
        L(e[0], e[1]) -= 1.0;
        L(e[1], e[0]) -= 1.0;
        L(e[0], e[0]) += 1.0;
        L(e[1], e[1]) += 1.0;
    }
    return L;
}

// Dense cotangent stiffness and lumped mass, evaluated triangle by triangle
// with angles from acos rather than dot/cross ratios.
inline std::pair<Eigen::MatrixXd, Eigen::VectorXd> dense_cotangent(const TriMesh& mesh) {
    const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd M = Eigen::VectorXd::Zero(n);
    auto P = [&](std::uint32_t i) {
        const auto& p = mesh.vertices()[i];
        return Eigen::Vector3d(p[0], p[1], p[2]);
    };
    for (const auto& t : mesh.triangles()) {
        for (int c = 0; c < 3; ++c) {
            const auto k = t[c], a = t[(c + 1) % 3], b = t[(c + 2) % 3];
            const Eigen::Vector3d u = P(a) - P(k), v = P(b) - P(k);
            const double angle = std::acos(u.dot(v) / (u.norm() * v.norm()));
            const double w = 0.5 / std::tan(angle);
            L(a, b) -= w;
            L(b, a) -= w;
            L(a, a) += w;
            L(b, b) += w;
        }
        const double area = 0.5 * (P(t[1]) - P(t[0])).cross(P(t[2]) - P(t[0])).norm();
        for (auto v : t) M[v] += area / 3.0;
    }
    return {L, M};
}

inline std::vector<double> dense_apply(const Eigen::MatrixXd& A, const std::vector<double>& x) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::VectorXd y = A * v;
    return {y.data(), y.data() + y.size()};
}

// Ascending generalized eigenvalues of L phi = lambda M phi.
inline Eigen::VectorXd dense_generalized_eigenvalues(const Eigen::MatrixXd& L, const Eigen::VectorXd& mass) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(L, mass.asDiagonal().toDenseMatrix(),
                                                                 Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline std::vector<double> random_values(std::size_t n, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

inline std::vector<std::uint32_t> random_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::uint32_t> p(n);
    for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

} // namespace oracle
