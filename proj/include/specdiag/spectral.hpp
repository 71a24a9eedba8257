#pragma once

#include "specdiag/laplacian.hpp"
#include "specdiag/mesh.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace specdiag {

struct EigenPair {
    double value = 0.0;
    /// Unit norm in the mass inner product.
    std::vector<double> vector;
    /// ||L phi - lambda M phi||_2, measured by a direct sparse apply.
    double residual = 0.0;
};

/// One value per mesh vertex.
struct ScalarField {
    std::vector<double> values;
    std::string provenance;
};

inline constexpr std::uint64_t default_solver_seed = 0x9e3779b97f4a7c15ULL;

struct EigenSolverOptions {
    double tol = 1e-8;
    std::uint64_t seed = default_solver_seed;
    /// 0 selects max(50 * k, 100).
    std::size_t max_iterations = 0;
};

/// The k smallest eigenpairs of L phi = lambda M phi above the constant kernel,
/// ascending. Block subspace iteration on the shift-inverted, mass-symmetrized
/// operator, with the M-weighted constant projected out every step.
///
/// Throws DisconnectedError when a second numerically-zero eigenvalue shows up,
/// ConvergenceError when the iteration budget runs out.
std::vector<EigenPair> smallest_nonzero_eigenpairs(const SparseSymOperator& op, std::size_t k,
                                                   const EigenSolverOptions& options = {});

inline std::vector<EigenPair> smallest_nonzero_eigenpairs(const SparseSymOperator& op, std::size_t k, double tol) {
    return smallest_nonzero_eigenpairs(op, k, EigenSolverOptions{.tol = tol});
}

/// ||L phi - lambda M phi||_2.
double eigen_residual(const SparseSymOperator& op, double value, std::span<const double> vector);

/// Sign fixed by a non-negative third central moment (fallback: the entry of
/// largest magnitude is positive), then affinely mapped onto [0, 1].
/// Throws std::invalid_argument on a constant field.
ScalarField canonicalize(const ScalarField& field);

/// Canonicalized eigenfunctions for each requested index (1 = Fiedler vector),
/// computed from a single solve of size max(indices).
std::vector<ScalarField> eigenfunction_fields(const TriMesh& mesh, LaplacianVariant variant,
                                              std::span<const std::size_t> indices,
                                              const EigenSolverOptions& options = {});

ScalarField fiedler_field(const TriMesh& mesh, LaplacianVariant variant, const EigenSolverOptions& options = {});

const char* to_string(LaplacianVariant variant) noexcept;

} // namespace specdiag
