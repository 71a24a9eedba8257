#include "specdiag/persistence.hpp"

#include "specdiag/error.hpp"
#include "specdiag/union_find.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace specdiag {

FiltrationOrder lower_star_order(std::span<const double> values) {
    FiltrationOrder order(values.size());
    std::iota(order.begin(), order.end(), std::uint32_t{0});
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    return order;
}

namespace {

void check_field(const TriMesh& mesh, std::span<const double> values) {
    if (values.size() != mesh.vertex_count())
        throw DimensionError("field has " + std::to_string(values.size()) + " values for " +
                             std::to_string(mesh.vertex_count()) + " vertices");
    for (double x : values)
        if (!std::isfinite(x)) throw std::invalid_argument("field contains a non-finite value");
}

std::vector<std::uint32_t> ranks_of(const FiltrationOrder& order) {
    std::vector<std::uint32_t> rank(order.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    return rank;
}

double field_max(std::span<const double> values) {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

} // namespace

PersistenceDiagram zero_persistence(const TriMesh& mesh, std::span<const double> values) {
    check_field(mesh, values);
    const auto n = mesh.vertex_count();
    const auto order = lower_star_order(values);
    const auto rank = ranks_of(order);

    DisjointSet ds(n);
    // creator[root]: vertex that opened the component (earliest in the order)
    std::vector<std::uint32_t> creator(n);
    std::iota(creator.begin(), creator.end(), std::uint32_t{0});

    PersistenceDiagram out;
    std::vector<std::uint32_t> roots;
    for (auto v : order) {
        roots.clear();
        for (auto u : mesh.neighbors(v))
            if (rank[u] < rank[v]) roots.push_back(ds.find(u));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        if (roots.empty()) continue; // v opens a new component

        auto elder = *std::min_element(roots.begin(), roots.end(), [&](std::uint32_t a, std::uint32_t b) {
            return rank[creator[a]] < rank[creator[b]];
        });
        const auto survivor = creator[elder];
        for (auto r : roots) {
            if (r == elder) continue;
            out.points.push_back({values[creator[r]], values[v]});
        }
        std::uint32_t root = v;
        for (auto r : roots) root = ds.unite(root, r);
        creator[root] = survivor;
    }
    for (std::uint32_t v = 0; v < n; ++v)
        if (ds.find(v) == v) out.essential_births.push_back(values[creator[v]]);
    std::sort(out.essential_births.begin(), out.essential_births.end());
    out.cap_value = field_max(values);
    return out;
}

PersistenceDiagram zero_persistence(const TriMesh& mesh, const ScalarField& field) {
    auto d = zero_persistence(mesh, std::span<const double>(field.values));
    d.provenance = field.provenance;
    return d;
}

PersistenceDiagram sublevel_betti_oracle(const TriMesh& mesh, std::span<const double> values) {
    check_field(mesh, values);
    const auto n = mesh.vertex_count();
    if (n > 64) throw std::invalid_argument("sublevel_betti_oracle: limited to 64 vertices");
    const auto order = lower_star_order(values);
    const auto rank = ranks_of(order);

    // Component label of every vertex in K_i: the earliest vertex (in filtration
    // order) of its component, found by a breadth-first search over the edges of K_i.
    auto components = [&](std::size_t prefix) {
        std::vector<std::int64_t> label(n, -1);
        for (std::size_t s = 0; s < prefix; ++s) {
            const auto start = order[s];
            if (label[start] != -1) continue;
            std::vector<std::uint32_t> members{start};
            label[start] = start;
            std::queue<std::uint32_t> q;
            q.push(start);
            while (!q.empty()) {
                auto a = q.front();
                q.pop();
                for (const auto& e : mesh.edges()) {
                    if (rank[e[0]] >= prefix || rank[e[1]] >= prefix) continue;
                    std::uint32_t b;
                    if (e[0] == a) b = e[1];
                    else if (e[1] == a) b = e[0];
                    else continue;
                    if (label[b] == -1) {
                        label[b] = start;
                        q.push(b);
                    }
                }
            }
        }
        return label;
    };

    PersistenceDiagram out;
    std::vector<std::int64_t> previous(n, -1);
    for (std::size_t i = 1; i <= n; ++i) {
        auto current = components(i);
        const double t = values[order[i - 1]];
        // every representative alive before step i whose vertex now carries another label died here
        std::vector<bool> seen(n, false);
        for (std::uint32_t v = 0; v < n; ++v) {
            if (previous[v] != static_cast<std::int64_t>(v)) continue; // v was not a representative
            if (current[v] != static_cast<std::int64_t>(v) && !seen[v]) {
                seen[v] = true;
                out.points.push_back({values[v], t});
            }
        }
        previous = std::move(current);
    }
    for (std::uint32_t v = 0; v < n; ++v)
        if (previous[v] == static_cast<std::int64_t>(v)) out.essential_births.push_back(values[v]);
    std::sort(out.essential_births.begin(), out.essential_births.end());
    out.cap_value = field_max(values);
    return out;
}

std::vector<PersistencePair> finitize(const PersistenceDiagram& diagram) {
    std::vector<PersistencePair> out;
    out.reserve(diagram.points.size() + diagram.essential_births.size());
    for (const auto& p : diagram.points)
        if (!p.on_diagonal()) out.push_back(p);
    for (double b : diagram.essential_births)
        if (b != diagram.cap_value) out.push_back({b, diagram.cap_value});
    return out;
}

std::size_t count_local_minima(const TriMesh& mesh, std::span<const double> values) {
    check_field(mesh, values);
    const auto rank = ranks_of(lower_star_order(values));
    std::size_t count = 0;
    for (std::uint32_t v = 0; v < mesh.vertex_count(); ++v) {
        const auto nb = mesh.neighbors(v);
        if (std::none_of(nb.begin(), nb.end(), [&](std::uint32_t u) { return rank[u] < rank[v]; })) ++count;
    }
    return count;
}

PersistenceDiagram sorted(PersistenceDiagram diagram) {
    std::sort(diagram.points.begin(), diagram.points.end());
    std::sort(diagram.essential_births.begin(), diagram.essential_births.end());
    return diagram;
}

bool same_multiset(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    const auto x = sorted(a);
    const auto y = sorted(b);
    return x.points == y.points && x.essential_births == y.essential_births && x.cap_value == y.cap_value;
}

std::string to_json(const PersistenceDiagram& diagram) {
    nlohmann::json j;
    j["points"] = nlohmann::json::array();
    for (const auto& p : diagram.points) j["points"].push_back({p.birth, p.death});
    j["essential_births"] = diagram.essential_births;
    j["cap_value"] = diagram.cap_value;
    j["provenance"] = diagram.provenance;
    return j.dump(2);
}

PersistenceDiagram diagram_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PersistenceDiagram d;
    for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != 2) throw std::invalid_argument("diagram point must be [birth, death]");
        d.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    d.essential_births = j.at("essential_births").get<std::vector<double>>();
    d.cap_value = j.at("cap_value").get<double>();
    d.provenance = j.value("provenance", std::string{});
    return d;
}

} // namespace specdiag
