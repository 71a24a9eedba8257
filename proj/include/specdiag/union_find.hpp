#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace specdiag {

// Disjoint-set forest with path halving and union by size.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t size) : parent_(size), size_(size, 1) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns the surviving root, or the common root if already joined.
    std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return a;
    }

    std::size_t count_roots() {
        std::size_t n = 0;
        for (std::uint32_t i = 0; i < parent_.size(); ++i)
            if (find(i) == i) ++n;
        return n;
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

} // namespace specdiag
