#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nocs/distance.hpp"

namespace nocs {

/// n items of identical length.
using Dataset = std::vector<std::vector<double>>;

struct Clustering {
    /// Item index -> cluster id in [0, k).
    std::vector<int> assignment;
    /// One series per cluster: the mean (k-means) or the medoid's series.
    std::vector<std::vector<double>> centers;
    /// Medoid item per cluster (k-medoids, agglomerative); empty for k-means.
    std::vector<std::size_t> medoids;
    /// k-means: inertia after each iteration. k-medoids: total cost after
    /// each iteration. Agglomerative: distance of each merge, in order.
    std::vector<double> history;
    int iterations = 0;

    int k() const noexcept { return static_cast<int>(centers.size()); }

    friend bool operator==(const Clustering&, const Clustering&) = default;
};

struct KMeansOptions {
    int k = 2;
    Metric metric = Metric::euclidean();
    std::uint64_t seed = 1;
    int max_iter = 100;
    /// Stop early when inertia improves by less than this; 0 disables.
    double tol = 0.0;
};

/// Lloyd iteration with pointwise-mean centers. Lockstep metrics only; DTW
/// throws UnsupportedMetric.
Clustering kmeans(const Dataset& data, const KMeansOptions& options);

struct KMedoidsOptions {
    int k = 2;
    Metric metric = Metric::euclidean();
    std::uint64_t seed = 1;
    int max_iter = 100;
};

/// Alternates nearest-medoid assignment and per-cluster medoid update, starting
/// from spread_medoids. Any metric.
Clustering kmedoids(const Dataset& data, const KMedoidsOptions& options);

enum class Linkage { Single, Complete, Average };

const char* linkage_name(Linkage l) noexcept;
Linkage parse_linkage(const std::string& name);

/// Bottom-up merging until `k_stop` clusters remain. Cluster ids are
/// numbered by each cluster's lowest item index. For an asymmetric metric
/// the pair distance is metric(lower index, higher index).
Clustering agglomerative(const Dataset& data, const Metric& metric, Linkage linkage, int k_stop);

/// k distinct items (by value where possible) drawn by a seeded shuffle.
std::vector<std::size_t> initial_centers(const Dataset& data, int k, std::uint64_t seed);

/// k-medoids seeding: a uniform first pick, then for each further medoid
/// 2 + ln k candidates drawn with probability proportional to their squared
/// distance from the nearest chosen medoid, keeping the candidate that
/// lowers the summed squared distance most. Duplicates of chosen items are
/// never drawn while other items remain.
std::vector<std::size_t> spread_medoids(const Dataset& data, int k, const Metric& metric, std::uint64_t seed);

struct PairCounts {
    std::uint64_t a = 0;  // same cluster in both
    std::uint64_t b = 0;  // same in G only
    std::uint64_t c = 0;  // same in T only
    std::uint64_t d = 0;  // separated in both

    std::uint64_t total() const noexcept { return a + b + c + d; }
    friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

PairCounts pair_counts(std::span<const int> g, std::span<const int> t);

struct ExternalIndices {
    double rand = 0.0;
    double jaccard = 0.0;
    double fowlkes_mallows = 0.0;
};

/// Degenerate denominators: a = 0 gives FM 0; a+b+c = 0 gives Jaccard 1.
ExternalIndices external_indices(const PairCounts& counts);

}  // namespace nocs
