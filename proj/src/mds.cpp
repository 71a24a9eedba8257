#include "specdiag/mds.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace specdiag {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

void DistanceMatrix::check() const {
    const auto n = ids.size();
    if (values.size() != n * n) throw std::invalid_argument("distance matrix is not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (at(i, i) != 0.0) throw std::invalid_argument("distance matrix diagonal entry " + ids[i] + " is nonzero");
        for (std::size_t j = 0; j < n; ++j) {
            const double v = at(i, j);
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("distance matrix has a negative or non-finite entry");
            if (v != at(j, i)) throw std::invalid_argument("distance matrix is not symmetric");
        }
    }
}

void write_csv(const DistanceMatrix& m, std::ostream& out) {
    out << "id";
    for (const auto& id : m.ids) out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << m.ids[i];
        for (std::size_t j = 0; j < m.size(); ++j) out << ',' << format_double(m.at(i, j));
        out << '\n';
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

DistanceMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("matrix CSV is empty");
    auto header = split_csv(line);
    if (header.empty() || header[0] != "id") throw std::invalid_argument("matrix CSV must start with 'id'");
    DistanceMatrix m(std::vector<std::string>(header.begin() + 1, header.end()));
    const auto n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw std::invalid_argument("matrix CSV has fewer rows than columns");
        auto cells = split_csv(line);
        if (cells.size() != n + 1) throw std::invalid_argument("matrix CSV row " + std::to_string(i + 2) + " has wrong width");
        if (cells[0] != m.ids[i]) throw std::invalid_argument("matrix CSV row id '" + cells[0] + "' does not match header");
        for (std::size_t j = 0; j < n; ++j) {
            const auto& c = cells[j + 1];
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || ptr != c.data() + c.size())
                throw std::invalid_argument("matrix CSV cell '" + c + "' is not a number");
            m.at(i, j) = v;
        }
    }
    m.check();
    return m;
}

double Embedding::distance(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = coord(i, k) - coord(j, k);
        s += d * d;
    }
    return std::sqrt(s);
}

Embedding mds_embed(const DistanceMatrix& matrix, std::size_t dim) {
    matrix.check();
    const auto n = matrix.size();
    if (dim == 0 || dim >= n)
        throw std::invalid_argument("mds_embed: dim " + std::to_string(dim) + " must be in [1, " +
                                    std::to_string(n) + ")");
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd sq(ni, ni);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d = matrix.at(i, j);
            sq(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d * d;
        }
    const Eigen::MatrixXd centering =
        Eigen::MatrixXd::Identity(ni, ni) - Eigen::MatrixXd::Constant(ni, ni, 1.0 / static_cast<double>(n));
    Eigen::MatrixXd gram = -0.5 * centering * sq * centering;
    gram = 0.5 * (gram + gram.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);

    Embedding out;
    out.ids = matrix.ids;
    out.dim = dim;
    out.coords.assign(n * dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        const auto col = ni - 1 - static_cast<Eigen::Index>(k); // descending eigenvalues
        const double scale = std::sqrt(std::max(eig.eigenvalues()[col], 0.0));
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(eig.eigenvectors()(static_cast<Eigen::Index>(i), col)) >
                std::abs(eig.eigenvectors()(static_cast<Eigen::Index>(arg), col)))
                arg = i;
        const double sign = eig.eigenvectors()(static_cast<Eigen::Index>(arg), col) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i)
            out.coords[i * dim + k] = sign * scale * eig.eigenvectors()(static_cast<Eigen::Index>(i), col) + 0.0;
    }

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double err = out.distance(i, j) - matrix.at(i, j);
            num += err * err;
            den += matrix.at(i, j) * matrix.at(i, j);
            out.max_abs_error = std::max(out.max_abs_error, std::abs(err));
        }
    out.stress = den > 0.0 ? std::sqrt(num / den) : 0.0;
    return out;
}

void write_coordinates_csv(const Embedding& e, std::ostream& out) {
    static const char* axis_names[] = {"x", "y", "z"};
    out << "id";
    for (std::size_t k = 0; k < e.dim; ++k) {
        if (k < 3) out << ',' << axis_names[k];
        else out << ",x" << k;
    }
    out << '\n';
    for (std::size_t i = 0; i < e.ids.size(); ++i) {
        out << e.ids[i];
        for (std::size_t k = 0; k < e.dim; ++k) out << ',' << format_double(e.coord(i, k));
        out << '\n';
    }
}

} // namespace specdiag
