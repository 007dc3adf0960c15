#include "nocs/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "nocs/rng.hpp"
#include "nocs/types.hpp"

namespace nocs {

namespace {

void validate_dataset(const Dataset& data, int k, const char* what) {
    if (data.empty()) throw InvalidArgument(std::string(what) + ": empty dataset");
    const auto w = data.front().size();
    if (w == 0) throw InvalidArgument(std::string(what) + ": items must be non-empty");
    for (const auto& item : data) {
        if (item.size() != w) throw InvalidArgument(std::string(what) + ": items differ in length");
    }
    if (k < 1) throw InvalidArgument(std::string(what) + ": k must be >= 1");
    if (static_cast<std::size_t>(k) > data.size()) {
        throw InvalidArgument(std::string(what) + ": k = " + std::to_string(k) + " exceeds n = " +
                              std::to_string(data.size()));
    }
}

/// Index of the nearest center; lowest index wins ties.
int nearest(const Metric& metric, const std::vector<double>& item, const std::vector<std::vector<double>>& centers,
            double* best_out = nullptr) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = metric(item, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    if (best_out) *best_out = best_d;
    return best;
}

std::vector<std::vector<double>> gather(const Dataset& data, const std::vector<std::size_t>& idx) {
    std::vector<std::vector<double>> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(data[i]);
    return out;
}

}  // namespace

std::vector<std::size_t> initial_centers(const Dataset& data, int k, std::uint64_t seed) {
    validate_dataset(data, k, "initial_centers");
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    // Prefer items with distinct values so identical points never seed two
    // clusters; fall back to duplicates only when there are fewer than k
    // distinct values.
    std::vector<std::size_t> chosen;
    std::vector<bool> used(data.size(), false);
    for (auto i : order) {
        if (chosen.size() == static_cast<std::size_t>(k)) break;
        const bool dup = std::any_of(chosen.begin(), chosen.end(), [&](std::size_t c) { return data[c] == data[i]; });
        if (!dup) {
            chosen.push_back(i);
            used[i] = true;
        }
    }
    for (auto i : order) {
        if (chosen.size() == static_cast<std::size_t>(k)) break;
        if (!used[i]) {
            chosen.push_back(i);
            used[i] = true;
        }
    }
    return chosen;
}

std::vector<std::size_t> spread_medoids(const Dataset& data, int k, const Metric& metric, std::uint64_t seed) {
    validate_dataset(data, k, "spread_medoids");
    const std::size_t n = data.size();
    Rng rng(seed);
    std::vector<std::size_t> chosen{static_cast<std::size_t>(rng.below(n))};
    std::vector<bool> used(n, false);
    used[chosen[0]] = true;
    // Distance from each item to its nearest chosen medoid.
    std::vector<double> nearest_d(n);
    for (std::size_t i = 0; i < n; ++i) nearest_d[i] = metric(data[i], data[chosen[0]]);
    auto potential = [&] {
        double p = 0.0;
        for (std::size_t i = 0; i < n; ++i) p += used[i] ? 0.0 : nearest_d[i] * nearest_d[i];
        return p;
    };
    // Several draws per step; keep the one that lowers the total most.
    const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
    std::vector<double> cand_d(n), best_d(n);
    while (chosen.size() < static_cast<std::size_t>(k)) {
        const double total = potential();
        std::size_t pick = n;
        if (total > 0.0 && std::isfinite(total)) {
            double best_potential = std::numeric_limits<double>::infinity();
            for (int t = 0; t < trials; ++t) {
                const double target = rng.uniform01() * total;
                double acc = 0.0;
                std::size_t cand = n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (used[i] || nearest_d[i] == 0.0) continue;
                    acc += nearest_d[i] * nearest_d[i];
                    cand = i;
                    if (acc > target) break;
                }
                double p = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    cand_d[i] = std::min(nearest_d[i], metric(data[i], data[cand]));
                    if (!used[i] && i != cand) p += cand_d[i] * cand_d[i];
                }
                if (p < best_potential) {
                    best_potential = p;
                    pick = cand;
                    best_d = cand_d;
                }
            }
        }
        if (pick == n) {
            // Only duplicates of chosen medoids remain.
            pick = static_cast<std::size_t>(std::find(used.begin(), used.end(), false) - used.begin());
            for (std::size_t i = 0; i < n; ++i) best_d[i] = std::min(nearest_d[i], metric(data[i], data[pick]));
        }
        chosen.push_back(pick);
        used[pick] = true;
        nearest_d = best_d;
    }
    return chosen;
}

Clustering kmeans(const Dataset& data, const KMeansOptions& opt) {
    validate_dataset(data, opt.k, "kmeans");
    if (opt.metric.elastic()) {
        throw UnsupportedMetric("kmeans: metric '" + opt.metric.name() +
                                "' is elastic; use kmedoids or agglomerative");
    }
    if (opt.max_iter < 1) throw InvalidArgument("kmeans: max_iter must be >= 1");

    const std::size_t n = data.size();
    const std::size_t w = data.front().size();
    const auto k = static_cast<std::size_t>(opt.k);

    Clustering out;
    out.centers = gather(data, initial_centers(data, opt.k, opt.seed));
    std::vector<int> previous;
    std::vector<double> dist(n);

    for (int iter = 0; iter < opt.max_iter; ++iter) {
        out.assignment.assign(n, 0);
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            out.assignment[i] = nearest(opt.metric, data[i], out.centers, &dist[i]);
            ++sizes[static_cast<std::size_t>(out.assignment[i])];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) continue;
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[static_cast<std::size_t>(out.assignment[i])] < 2) continue;
                if (far == n || dist[i] > dist[far]) far = i;
            }
            --sizes[static_cast<std::size_t>(out.assignment[far])];
            out.assignment[far] = static_cast<int>(c);
            sizes[c] = 1;
            dist[far] = 0.0;
            out.centers[c] = data[far];
        }

        for (auto& center : out.centers) std::fill(center.begin(), center.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& center = out.centers[static_cast<std::size_t>(out.assignment[i])];
            for (std::size_t t = 0; t < w; ++t) center[t] += data[i][t];
        }
        for (std::size_t c = 0; c < k; ++c) {
            for (auto& v : out.centers[c]) v /= static_cast<double>(sizes[c]);
        }

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = opt.metric(data[i], out.centers[static_cast<std::size_t>(out.assignment[i])]);
            inertia += d * d;
        }
        out.history.push_back(inertia);
        out.iterations = iter + 1;

        if (out.assignment == previous) break;
        if (opt.tol > 0.0 && out.history.size() >= 2 &&
            out.history[out.history.size() - 2] - inertia < opt.tol) {
            break;
        }
        previous = out.assignment;
    }
    return out;
}

Clustering kmedoids(const Dataset& data, const KMedoidsOptions& opt) {
    validate_dataset(data, opt.k, "kmedoids");
    if (opt.max_iter < 1) throw InvalidArgument("kmedoids: max_iter must be >= 1");

    const std::size_t n = data.size();
    const auto k = static_cast<std::size_t>(opt.k);

    Clustering out;
    out.medoids = spread_medoids(data, opt.k, opt.metric, opt.seed);

    for (int iter = 0; iter < opt.max_iter; ++iter) {
        // Assignment. A medoid always belongs to its own cluster, even when
        // another medoid has the same value.
        out.assignment.assign(n, -1);
        for (std::size_t c = 0; c < k; ++c) out.assignment[out.medoids[c]] = static_cast<int>(c);
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (out.assignment[i] >= 0) continue;
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = opt.metric(data[i], data[out.medoids[c]]);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            out.assignment[i] = best;
            cost += best_d;
        }
        out.history.push_back(cost);
        out.iterations = iter + 1;

        // Update: the member minimising the summed distance from the other
        // members. The current medoid is kept unless strictly beaten.
        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(out.assignment[i])].push_back(i);
        bool changed = false;
        for (std::size_t c = 0; c < k; ++c) {
            auto sum_to = [&](std::size_t cand) {
                double s = 0.0;
                for (auto m : members[c]) {
                    if (m != cand) s += opt.metric(data[m], data[cand]);
                }
                return s;
            };
            std::size_t best = out.medoids[c];
            double best_s = sum_to(best);
            for (auto cand : members[c]) {
                if (cand == out.medoids[c]) continue;
                const double s = sum_to(cand);
                if (s < best_s) {
                    best_s = s;
                    best = cand;
                }
            }
            if (best != out.medoids[c]) {
                out.medoids[c] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }
    if (out.iterations == opt.max_iter) {
        // Leave assignment consistent with the final medoids.
        const auto centers = gather(data, out.medoids);
        for (std::size_t i = 0; i < n; ++i) {
            auto self = std::find(out.medoids.begin(), out.medoids.end(), i);
            if (self != out.medoids.end()) {
                out.assignment[i] = static_cast<int>(self - out.medoids.begin());
                continue;
            }
            out.assignment[i] = nearest(opt.metric, data[i], centers);
        }
    }
    out.centers = gather(data, out.medoids);
    return out;
}

const char* linkage_name(Linkage l) noexcept {
    switch (l) {
        case Linkage::Single: return "single";
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
    }
    return "?";
}

Linkage parse_linkage(const std::string& name) {
    if (name == "single") return Linkage::Single;
    if (name == "complete") return Linkage::Complete;
    if (name == "average") return Linkage::Average;
    throw InvalidArgument("unknown linkage '" + name + "'");
}

Clustering agglomerative(const Dataset& data, const Metric& metric, Linkage linkage, int k_stop) {
    validate_dataset(data, k_stop, "agglomerative");
    const std::size_t n = data.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<double> dm(n * n, 0.0);
    auto D = [&](std::size_t i, std::size_t j) -> double& { return dm[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            D(i, j) = D(j, i) = metric(data[i], data[j]);
        }
    }

    // Each cluster lives in the slot of its lowest item index, so comparing
    // slot pairs lexicographically is the required tie-break.
    std::vector<bool> active(n, true);
    std::vector<std::size_t> size(n, 1);
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::size_t> nn(n, n);
    std::vector<double> nnd(n, inf);
    auto refresh = [&](std::size_t i) {
        nn[i] = n;
        nnd[i] = inf;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (active[j] && D(i, j) < nnd[i]) {
                nnd[i] = D(i, j);
                nn[i] = j;
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i) refresh(i);

    Clustering out;
    for (std::size_t clusters = n; clusters > static_cast<std::size_t>(k_stop); --clusters) {
        std::size_t p = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (active[i] && nn[i] < n && (p == n || nnd[i] < nnd[p])) p = i;
        }
        const std::size_t q = nn[p];
        out.history.push_back(nnd[p]);

        for (std::size_t x = 0; x < n; ++x) {
            if (!active[x] || x == p || x == q) continue;
            double v = 0.0;
            switch (linkage) {
                case Linkage::Single: v = std::min(D(p, x), D(q, x)); break;
                case Linkage::Complete: v = std::max(D(p, x), D(q, x)); break;
                case Linkage::Average:
                    v = (static_cast<double>(size[p]) * D(p, x) + static_cast<double>(size[q]) * D(q, x)) /
                        static_cast<double>(size[p] + size[q]);
                    break;
            }
            D(p, x) = D(x, p) = v;
        }
        active[q] = false;
        size[p] += size[q];
        parent[q] = p;

        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            if (i == p || nn[i] == p || nn[i] == q) {
                refresh(i);
            } else if (i < p && (D(i, p) < nnd[i] || (D(i, p) == nnd[i] && p < nn[i]))) {
                nnd[i] = D(i, p);
                nn[i] = p;
            }
        }
    }
    out.iterations = static_cast<int>(out.history.size());

    // Resolve each item to its root slot; number clusters by root order.
    std::vector<int> id_of_root(n, -1);
    int next_id = 0;
    out.assignment.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = i;
        while (parent[r] != r) r = parent[r];
        if (id_of_root[r] < 0) id_of_root[r] = next_id++;
        out.assignment[i] = id_of_root[r];
    }

    // Medoid per cluster from the original pairwise distances.
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(next_id));
    for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(out.assignment[i])].push_back(i);
    for (const auto& group : members) {
        std::size_t best = group.front();
        double best_s = inf;
        for (auto cand : group) {
            double s = 0.0;
            for (auto m : group) {
                if (m != cand) s += metric(data[m], data[cand]);
            }
            if (s < best_s) {
                best_s = s;
                best = cand;
            }
        }
        out.medoids.push_back(best);
        out.centers.push_back(data[best]);
    }
    return out;
}

PairCounts pair_counts(std::span<const int> g, std::span<const int> t) {
    if (g.size() != t.size()) throw InvalidArgument("pair_counts: label vectors differ in length");
    if (g.size() < 2) throw InvalidArgument("pair_counts: need at least 2 items");
    auto choose2 = [](std::uint64_t m) { return m * (m - 1) / 2; };
    std::map<int, std::uint64_t> rows, cols;
    std::map<std::pair<int, int>, std::uint64_t> cells;
    for (std::size_t i = 0; i < g.size(); ++i) {
        ++rows[g[i]];
        ++cols[t[i]];
        ++cells[{g[i], t[i]}];
    }
    std::uint64_t same_both = 0, same_g = 0, same_t = 0;
    for (const auto& [key, m] : cells) same_both += choose2(m);
    for (const auto& [key, m] : rows) same_g += choose2(m);
    for (const auto& [key, m] : cols) same_t += choose2(m);
    PairCounts pc;
    pc.a = same_both;
    pc.b = same_g - same_both;
    pc.c = same_t - same_both;
    pc.d = choose2(g.size()) - pc.a - pc.b - pc.c;
    return pc;
}

ExternalIndices external_indices(const PairCounts& pc) {
    if (pc.total() == 0) throw InvalidArgument("external_indices: no pairs");
    const auto a = static_cast<double>(pc.a);
    const auto b = static_cast<double>(pc.b);
    const auto c = static_cast<double>(pc.c);
    const auto d = static_cast<double>(pc.d);
    ExternalIndices out;
    out.rand = (a + d) / (a + b + c + d);
    out.jaccard = (pc.a + pc.b + pc.c == 0) ? 1.0 : a / (a + b + c);
    out.fowlkes_mallows = pc.a == 0 ? 0.0 : std::sqrt((a / (a + b)) * (a / (a + c)));
    return out;
}

}  // namespace nocs
