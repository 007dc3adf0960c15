#pragma once

// Independent reference implementations used only by tests. They favour
// obviousness over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

/// Minimum cost over every monotone warping path, by explicit enumeration.
inline double dtw_brute_force(const std::vector<double>& a, const std::vector<double>& b) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = a.size(), m = b.size();
    // Depth-first walk from (0,0) to (n-1,m-1) using right, down and diagonal steps.
    struct Frame {
        std::size_t i, j;
        double cost;
    };
    std::vector<Frame> stack{{0, 0, std::abs(a[0] - b[0])}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.i == n - 1 && f.j == m - 1) {
            best = std::min(best, f.cost);
            continue;
        }
        if (f.i + 1 < n) stack.push_back({f.i + 1, f.j, f.cost + std::abs(a[f.i + 1] - b[f.j])});
        if (f.j + 1 < m) stack.push_back({f.i, f.j + 1, f.cost + std::abs(a[f.i] - b[f.j + 1])});
        if (f.i + 1 < n && f.j + 1 < m) {
            stack.push_back({f.i + 1, f.j + 1, f.cost + std::abs(a[f.i + 1] - b[f.j + 1])});
        }
    }
    return best;
}

struct Pairs {
    std::uint64_t a = 0, b = 0, c = 0, d = 0;
};

/// Classifies every unordered pair directly.
inline Pairs pair_counts_enumerated(const std::vector<int>& g, const std::vector<int>& t) {
    Pairs p;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            const bool sg = g[i] == g[j];
            const bool st = t[i] == t[j];
            if (sg && st) ++p.a;
            else if (sg) ++p.b;
            else if (st) ++p.c;
            else ++p.d;
        }
    }
    return p;
}

enum class Link { Single, Complete, Average };

/// Merge simulation that recomputes every cluster distance from the item
/// distances at each step. Clusters are identified by their lowest item;
/// ties go to the lexicographically smallest pair of lowest items.
/// Returns, per item, the lowest item index of its final cluster, plus the
/// merge distances.
inline std::pair<std::vector<std::size_t>, std::vector<double>> agglomerative_naive(
    const std::vector<std::vector<double>>& dist, Link link, std::size_t k_stop) {
    const std::size_t n = dist.size();
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
    std::vector<double> merges;
    auto linkage = [&](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
        for (auto i : x) {
            for (auto j : y) {
                const double d = dist[std::min(i, j)][std::max(i, j)];
                lo = std::min(lo, d);
                hi = std::max(hi, d);
                sum += d;
            }
        }
        if (link == Link::Single) return lo;
        if (link == Link::Complete) return hi;
        return sum / static_cast<double>(x.size() * y.size());
    };
    while (clusters.size() > k_stop) {
        std::sort(clusters.begin(), clusters.end());
        std::size_t bp = 0, bq = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < clusters.size(); ++p) {
            for (std::size_t q = p + 1; q < clusters.size(); ++q) {
                const double d = linkage(clusters[p], clusters[q]);
                if (d < best) {
                    best = d;
                    bp = p;
                    bq = q;
                }
            }
        }
        merges.push_back(best);
        clusters[bp].insert(clusters[bp].end(), clusters[bq].begin(), clusters[bq].end());
        std::sort(clusters[bp].begin(), clusters[bp].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bq));
    }
    std::vector<std::size_t> root(n);
    for (const auto& c : clusters) {
        for (auto i : c) root[i] = c.front();
    }
    return {root, merges};
}

}  // namespace oracle
