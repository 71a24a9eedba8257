#include "specdiag/diagram_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace specdiag {

PersistencePair diagonal_projection(const PersistencePair& p) noexcept {
    const double mid = 0.5 * (p.birth + p.death);
    return {mid, mid};
}

double linf(const PersistencePair& a, const PersistencePair& b) noexcept {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

MatchingInstance::MatchingInstance(std::span<const PersistencePair> x, std::span<const PersistencePair> y)
    : x_count(x.size()), y_count(y.size()) {
    left.assign(x.begin(), x.end());
    for (const auto& p : y) left.push_back(diagonal_projection(p));
    right.assign(y.begin(), y.end());
    for (const auto& p : x) right.push_back(diagonal_projection(p));
}

double MatchingInstance::cost(std::size_t i, std::size_t j) const noexcept {
    if (left_is_diagonal(i) && right_is_diagonal(j)) return 0.0;
    return linf(left[i], right[j]);
}

namespace {

std::vector<PersistencePair> off_diagonal(std::span<const PersistencePair> d) {
    std::vector<PersistencePair> out;
    out.reserve(d.size());
    for (const auto& p : d)
        if (!p.on_diagonal()) out.push_back(p);
    return out;
}

struct WeightedEdge {
    std::uint32_t left;
    std::uint32_t right;
    double cost;
};

// Hopcroft-Karp on a bipartite graph with `n` vertices per side.
class HopcroftKarp {
public:
    explicit HopcroftKarp(std::size_t n) : n_(n), adj_(n), match_left_(n), match_right_(n), dist_(n) {}

    void clear_edges() {
        for (auto& a : adj_) a.clear();
    }
    void add_edge(std::uint32_t l, std::uint32_t r) { adj_[l].push_back(r); }

    std::size_t maximum_matching() {
        std::fill(match_left_.begin(), match_left_.end(), none);
        std::fill(match_right_.begin(), match_right_.end(), none);
        std::size_t size = 0;
        while (bfs())
            for (std::uint32_t l = 0; l < n_; ++l)
                if (match_left_[l] == none && dfs(l)) ++size;
        return size;
    }

private:
    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    static constexpr std::uint32_t inf = std::numeric_limits<std::uint32_t>::max();

    bool bfs() {
        std::queue<std::uint32_t> q;
        for (std::uint32_t l = 0; l < n_; ++l) {
            if (match_left_[l] == none) {
                dist_[l] = 0;
                q.push(l);
            } else {
                dist_[l] = inf;
            }
        }
        bool found = false;
        while (!q.empty()) {
            auto l = q.front();
            q.pop();
            for (auto r : adj_[l]) {
                auto next = match_right_[r];
                if (next == none) {
                    found = true;
                } else if (dist_[next] == inf) {
                    dist_[next] = dist_[l] + 1;
                    q.push(next);
                }
            }
        }
        return found;
    }

    bool dfs(std::uint32_t l) {
        for (auto r : adj_[l]) {
            auto next = match_right_[r];
            if (next == none || (dist_[next] == dist_[l] + 1 && dfs(next))) {
                match_left_[l] = r;
                match_right_[r] = l;
                return true;
            }
        }
        dist_[l] = inf;
        return false;
    }

    std::size_t n_;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<std::uint32_t> match_left_, match_right_, dist_;
};

// Minimum-cost perfect assignment on a dense square matrix (row-major).
// Returns assignment[row] = column.
std::vector<std::size_t> hungarian(const std::vector<double>& cost, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            std::size_t j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != 0) assignment[p[j] - 1] = j - 1;
    return assignment;
}

} // namespace

double bottleneck(std::span<const PersistencePair> x_in, std::span<const PersistencePair> y_in) {
    const auto x = off_diagonal(x_in);
    const auto y = off_diagonal(y_in);
    const auto nx = x.size(), ny = y.size();
    const auto m = nx + ny;
    if (m == 0) return 0.0;

    // Sparse reduction: a point may go to any opposite point or to its own
    // projection; projections pair up among themselves at zero cost.
    std::vector<WeightedEdge> edges;
    edges.reserve(nx * ny * 2 + m);
    for (std::uint32_t i = 0; i < nx; ++i) {
        for (std::uint32_t j = 0; j < ny; ++j) edges.push_back({i, j, linf(x[i], y[j])});
        edges.push_back({i, static_cast<std::uint32_t>(ny + i), linf(x[i], diagonal_projection(x[i]))});
    }
    for (std::uint32_t j = 0; j < ny; ++j) {
        const auto l = static_cast<std::uint32_t>(nx + j);
        edges.push_back({l, j, linf(diagonal_projection(y[j]), y[j])});
        for (std::uint32_t i = 0; i < nx; ++i) edges.push_back({l, static_cast<std::uint32_t>(ny + i), 0.0});
    }
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) { return a.cost < b.cost; });

    std::vector<double> thresholds;
    thresholds.reserve(edges.size());
    for (const auto& e : edges)
        if (thresholds.empty() || thresholds.back() != e.cost) thresholds.push_back(e.cost);

    HopcroftKarp hk(m);
    auto feasible = [&](double t) {
        hk.clear_edges();
        for (const auto& e : edges) {
            if (e.cost > t) break;
            hk.add_edge(e.left, e.right);
        }
        return hk.maximum_matching() == m;
    };
    // the largest threshold admits every edge, which always contains a perfect matching
    std::size_t lo = 0, hi = thresholds.size() - 1;
    while (lo < hi) {
        const auto mid = lo + (hi - lo) / 2;
        if (feasible(thresholds[mid])) hi = mid;
        else lo = mid + 1;
    }
    return thresholds[lo];
}

double bottleneck(const PersistenceDiagram& x, const PersistenceDiagram& y) {
    const auto fx = finitize(x);
    const auto fy = finitize(y);
    return bottleneck(std::span<const PersistencePair>(fx), std::span<const PersistencePair>(fy));
}

double wasserstein(std::span<const PersistencePair> x_in, std::span<const PersistencePair> y_in, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("wasserstein: q must be >= 1");
    const auto x = off_diagonal(x_in);
    const auto y = off_diagonal(y_in);
    const MatchingInstance inst(x, y);
    const auto m = inst.size();
    if (m == 0) return 0.0;

    std::vector<double> weight(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) weight[i * m + j] = std::pow(inst.cost(i, j), q);
    const auto assignment = hungarian(weight, m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += weight[i * m + assignment[i]];
    return std::pow(total, 1.0 / q);
}

double wasserstein(const PersistenceDiagram& x, const PersistenceDiagram& y, double q) {
    const auto fx = finitize(x);
    const auto fy = finitize(y);
    return wasserstein(std::span<const PersistencePair>(fx), std::span<const PersistencePair>(fy), q);
}

double brute_force_distance(std::span<const PersistencePair> x_in, std::span<const PersistencePair> y_in,
                            DistanceMode mode, double q) {
    if (mode == DistanceMode::wasserstein && !(q >= 1.0))
        throw std::invalid_argument("brute_force_distance: q must be >= 1");
    const auto x = off_diagonal(x_in);
    const auto y = off_diagonal(y_in);
    if (x.size() + y.size() > 6) throw std::invalid_argument("brute_force_distance: at most 6 points in total");
    const MatchingInstance inst(x, y);
    const auto m = inst.size();
    if (m == 0) return 0.0;

    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double value = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double c = inst.cost(i, perm[i]);
            value = mode == DistanceMode::bottleneck ? std::max(value, c) : value + std::pow(c, q);
        }
        best = std::min(best, value);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return mode == DistanceMode::bottleneck ? best : std::pow(best, 1.0 / q);
}

} // namespace specdiag
