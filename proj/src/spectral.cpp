#include "specdiag/spectral.hpp"

#include "specdiag/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace specdiag {

const char* to_string(LaplacianVariant variant) noexcept {
    return variant == LaplacianVariant::graph ? "graph" : "cotangent";
}

double eigen_residual(const SparseSymOperator& op, double value, std::span<const double> vector) {
    const auto lv = apply(op, vector);
    const auto mass = op.mass();
    double sq = 0.0;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        const double m = mass.empty() ? 1.0 : mass[i];
        const double r = lv[i] - value * m * vector[i];
        sq += r * r;
    }
    return std::sqrt(sq);
}

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Removes the component along unit vector z (twice, for orthogonality to working precision).
void deflate(Matrix& X, const Vector& z) {
    for (int pass = 0; pass < 2; ++pass) X -= z * (z.transpose() * X);
}

Matrix orthonormal_basis(const Matrix& Y) {
    Eigen::HouseholderQR<Matrix> qr(Y);
    return qr.householderQ() * Matrix::Identity(Y.rows(), Y.cols());
}

} // namespace

std::vector<EigenPair> smallest_nonzero_eigenpairs(const SparseSymOperator& op, std::size_t k,
                                                   const EigenSolverOptions& options) {
    const auto n = op.dimension();
    if (k < 1) throw std::invalid_argument("smallest_nonzero_eigenpairs: k must be >= 1");
    if (k + 1 > n)
        throw std::invalid_argument("smallest_nonzero_eigenpairs: k + 1 = " + std::to_string(k + 1) +
                                    " exceeds dimension " + std::to_string(n));
    if (!(options.tol > 0.0)) throw std::invalid_argument("smallest_nonzero_eigenpairs: tol must be positive");

    Vector mass = Vector::Ones(static_cast<Eigen::Index>(n));
    if (op.has_mass())
        for (std::size_t i = 0; i < n; ++i) mass[static_cast<Eigen::Index>(i)] = op.mass()[i];
    const Vector sqrt_m = mass.cwiseSqrt();
    const Vector inv_sqrt_m = sqrt_m.cwiseInverse();
    const Vector kernel = sqrt_m / sqrt_m.norm();

    // Spectrum scale of M^{-1/2} L M^{-1/2}: largest diagonal ratio.
    double scale = 0.0;
    const auto rows = op.row_offsets();
    const auto cols = op.columns();
    const auto vals = op.values();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(op.nonzeros());
    for (std::size_t i = 0; i < n; ++i)
        for (auto s = rows[i]; s < rows[i + 1]; ++s) {
            if (cols[s] == i) scale = std::max(scale, vals[s] / mass[static_cast<Eigen::Index>(i)]);
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(cols[s]), vals[s]);
        }
    if (scale <= 0.0) throw DisconnectedError("operator has no edges; every eigenvalue is zero");

    // Shift-invert operator (A + sigma I)^{-1} = M^{1/2} (L + sigma M)^{-1} M^{1/2}.
    const double sigma = 1e-8 * scale;
    Eigen::SparseMatrix<double> shifted(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    shifted.setFromTriplets(triplets.begin(), triplets.end());
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        shifted.coeffRef(ii, ii) += sigma * mass[ii];
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
    if (factor.info() != Eigen::Success) throw std::runtime_error("shifted Laplacian factorization failed");

    const auto block = static_cast<Eigen::Index>(std::min<std::size_t>(std::max<std::size_t>(2 * k + 8, 20), n - 1));
    const std::size_t budget = options.max_iterations ? options.max_iterations : std::max<std::size_t>(50 * k, 100);

    std::mt19937_64 rng(options.seed);
    Matrix X(static_cast<Eigen::Index>(n), block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            X(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    deflate(X, kernel);
    X = orthonormal_basis(X);

    std::vector<double> buf_in(n), buf_out(n);
    auto apply_reduced = [&](const Matrix& Q) {
        Matrix AQ(Q.rows(), Q.cols());
        for (Eigen::Index j = 0; j < Q.cols(); ++j) {
            for (std::size_t i = 0; i < n; ++i) buf_in[i] = inv_sqrt_m[static_cast<Eigen::Index>(i)] * Q(static_cast<Eigen::Index>(i), j);
            apply_into(op, buf_in, buf_out);
            for (std::size_t i = 0; i < n; ++i) AQ(static_cast<Eigen::Index>(i), j) = inv_sqrt_m[static_cast<Eigen::Index>(i)] * buf_out[i];
        }
        return AQ;
    };

    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < budget; ++iter) {
        Matrix Y(X.rows(), X.cols());
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            Vector rhs = sqrt_m.cwiseProduct(X.col(j));
            Y.col(j) = sqrt_m.cwiseProduct(factor.solve(rhs));
        }
        deflate(Y, kernel);
        const Matrix Q = orthonormal_basis(Y);
        const Matrix AQ = apply_reduced(Q);
        Matrix H = Q.transpose() * AQ;
        H = 0.5 * (H + H.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> small(H);
        X = Q * small.eigenvectors();
        const Matrix AX = AQ * small.eigenvectors();
        const Vector theta = small.eigenvalues();

        worst = 0.0;
        bool converged = true;
        for (std::size_t i = 0; i < k; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double r = sqrt_m.cwiseProduct(AX.col(ii) - theta[ii] * X.col(ii)).norm();
            worst = std::max(worst, r / (1.0 + std::abs(theta[ii])));
            if (r > options.tol * (1.0 + std::abs(theta[ii]))) converged = false;
        }
        if (!converged) continue;

        if (theta[0] < 1e-10 * scale)
            throw DisconnectedError("second numerically-zero eigenvalue (" + std::to_string(theta[0]) +
                                    "): the mesh 1-skeleton is disconnected");

        std::vector<EigenPair> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            Matrix col = X.col(ii);
            deflate(col, kernel);
            col /= col.norm();
            EigenPair pair;
            pair.value = theta[ii];
            pair.vector.resize(n);
            for (std::size_t v = 0; v < n; ++v)
                pair.vector[v] = inv_sqrt_m[static_cast<Eigen::Index>(v)] * col(static_cast<Eigen::Index>(v), 0);
            pair.residual = eigen_residual(op, pair.value, pair.vector);
            out.push_back(std::move(pair));
        }
        const bool certified = std::all_of(out.begin(), out.end(), [&](const EigenPair& p) {
            return p.residual <= options.tol * (1.0 + std::abs(p.value));
        });
        if (certified) return out;
    }
    throw ConvergenceError("eigensolver did not converge in " + std::to_string(budget) +
                               " iterations; achieved relative residual " + std::to_string(worst),
                           worst);
}

ScalarField canonicalize(const ScalarField& field) {
    const auto& v = field.values;
    if (v.empty()) throw std::invalid_argument("canonicalize: empty field");
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) throw std::invalid_argument("canonicalize: constant field");

    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    const double range = hi - lo;
    double skew = 0.0;
    for (double x : v) {
        const double c = (x - mean) / range;
        skew += c * c * c;
    }
    bool flip = skew < 0.0;
    if (std::abs(skew) <= 1e-12) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
        flip = v[arg] < 0.0;
    }

    ScalarField out;
    out.provenance = field.provenance;
    out.values.resize(v.size());
    if (flip) {
        // -x mapped by (-x - (-hi)) / (hi - lo)
        for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = (hi - v[i]) / range;
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = (v[i] - lo) / range;
    }
    return out;
}

std::vector<ScalarField> eigenfunction_fields(const TriMesh& mesh, LaplacianVariant variant,
                                              std::span<const std::size_t> indices,
                                              const EigenSolverOptions& options) {
    if (indices.empty()) throw std::invalid_argument("eigenfunction_fields: no indices requested");
    for (auto i : indices)
        if (i < 1) throw std::invalid_argument("eigenfunction index must be >= 1");
    if (auto c = component_count(mesh); c != 1)
        throw DisconnectedError("mesh has " + std::to_string(c) +
                                " connected components; eigenfunctions need a connected mesh");
    const auto op = build_laplacian(mesh, variant);
    const auto k = *std::max_element(indices.begin(), indices.end());
    const auto pairs = smallest_nonzero_eigenpairs(op, k, options);
    std::vector<ScalarField> out;
    out.reserve(indices.size());
    for (auto i : indices) {
        ScalarField raw{pairs[i - 1].vector,
                        std::string("eigenfunction ") + std::to_string(i) + " (" + to_string(variant) + " Laplacian)"};
        out.push_back(canonicalize(raw));
    }
    return out;
}

ScalarField fiedler_field(const TriMesh& mesh, LaplacianVariant variant, const EigenSolverOptions& options) {
    const std::size_t one = 1;
    return eigenfunction_fields(mesh, variant, std::span<const std::size_t>(&one, 1), options).front();
}

} // namespace specdiag
