#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "nocs/clustering.hpp"
#include "nocs/rng.hpp"
#include "nocs/types.hpp"
#include "oracles.hpp"

using namespace nocs;

namespace {

struct Blobs {
    Dataset data;
    std::vector<int> labels;
};

/// Two 1-sample blobs around 0 and 100, sigma 1, interleaved.
Blobs two_blobs(std::uint64_t seed, int n = 40) {
    Rng rng(seed);
    Blobs b;
    for (int i = 0; i < n; ++i) {
        const int label = i % 2;
        b.data.push_back({100.0 * label + rng.normal()});
        b.labels.push_back(label);
    }
    return b;
}

Dataset random_dataset(Rng& rng, std::size_t n, std::size_t w) {
    Dataset d(n, std::vector<double>(w));
    for (auto& item : d) {
        for (auto& v : item) v = 10.0 * rng.uniform01();
    }
    return d;
}

double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    return external_indices(pair_counts(a, b)).rand;
}

bool all_clusters_non_empty(const Clustering& c) {
    std::vector<int> sizes(static_cast<std::size_t>(c.k()), 0);
    for (int a : c.assignment) ++sizes.at(static_cast<std::size_t>(a));
    return std::all_of(sizes.begin(), sizes.end(), [](int s) { return s > 0; });
}

}  // namespace

TEST(InitialCenters, DistinctByValueWhenPossible) {
    const Dataset d{{1}, {1}, {1}, {2}, {3}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto c = initial_centers(d, 3, seed);
        std::vector<double> values;
        for (auto i : c) values.push_back(d[i][0]);
        std::sort(values.begin(), values.end());
        EXPECT_EQ(values, (std::vector<double>{1, 2, 3}));
    }
    const auto all = initial_centers(d, 5, 1);
    EXPECT_EQ(std::set<std::size_t>(all.begin(), all.end()).size(), 5u);
}

TEST(KMeans, KEqualsNGivesZeroInertia) {
    Rng rng(1);
    const auto d = random_dataset(rng, 12, 4);
    const auto c = kmeans(d, {12, Metric::euclidean(), 3, 100, 0.0});
    EXPECT_EQ(c.history.back(), 0.0);
    EXPECT_TRUE(all_clusters_non_empty(c));
}

TEST(KMeans, KOneIsPointwiseMean) {
    const Dataset d{{0, 2}, {2, 4}, {4, 12}};
    const auto c = kmeans(d, {1, Metric::euclidean(), 3, 100, 0.0});
    EXPECT_EQ(c.centers[0], (std::vector<double>{2, 6}));
}

TEST(KMeans, SeparatesBlobs) {
    const auto b = two_blobs(5);
    const auto c = kmeans(b.data, {2, Metric::euclidean(), 9, 100, 0.0});
    EXPECT_EQ(rand_index(c.assignment, b.labels), 1.0);
}

TEST(KMeans, InertiaNeverIncreases) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const auto d = random_dataset(rng, 60, 3);
        const auto c = kmeans(d, {5, Metric::euclidean(), seed, 100, 0.0});
        for (std::size_t i = 1; i < c.history.size(); ++i) {
            EXPECT_LE(c.history[i], c.history[i - 1] * (1 + 1e-12)) << "seed " << seed;
        }
        EXPECT_LE(c.iterations, 100);
        EXPECT_TRUE(all_clusters_non_empty(c));
    }
}

TEST(KMeans, RepairsEmptyClusters) {
    // Four copies of one point plus one outlier: k=3 leaves a center with no
    // nearest item after the first assignment unless repaired.
    const Dataset d{{0}, {0}, {0}, {0}, {10}};
    const auto c = kmeans(d, {3, Metric::euclidean(), 2, 100, 0.0});
    EXPECT_TRUE(all_clusters_non_empty(c));
}

TEST(KMeans, ErrorsAndDeterminism) {
    Rng rng(2);
    const auto d = random_dataset(rng, 10, 3);
    EXPECT_THROW(kmeans(d, {11, Metric::euclidean(), 1, 100, 0.0}), InvalidArgument);
    EXPECT_THROW(kmeans(d, {2, Metric::dtw(), 1, 100, 0.0}), UnsupportedMetric);
    EXPECT_EQ(kmeans(d, {3, Metric::manhattan(), 4, 100, 0.0}), kmeans(d, {3, Metric::manhattan(), 4, 100, 0.0}));
}

TEST(KMedoids, PicksTheCheaperMedoid) {
    const Dataset d{{0}, {0}, {100}};
    const auto c = kmedoids(d, {1, Metric::manhattan(), 5, 100});
    EXPECT_EQ(d[c.medoids[0]][0], 0.0);
    EXPECT_EQ(c.history.back(), 100.0);
    // Exhaustive evaluation of every candidate medoid.
    double best = 1e300;
    for (const auto& cand : d) {
        double s = 0;
        for (const auto& x : d) s += std::abs(x[0] - cand[0]);
        best = std::min(best, s);
    }
    EXPECT_EQ(c.history.back(), best);
}

TEST(KMedoids, SingleItem) {
    const Dataset d{{4, 2}};
    const auto c = kmedoids(d, {1, Metric::euclidean(), 1, 100});
    EXPECT_EQ(c.medoids, (std::vector<std::size_t>{0}));
    EXPECT_EQ(c.history.back(), 0.0);
}

TEST(KMedoids, SeparatesBlobsWithDtw) {
    const auto b = two_blobs(8);
    const auto c = kmedoids(b.data, {2, Metric::dtw(), 3, 100});
    EXPECT_EQ(rand_index(c.assignment, b.labels), 1.0);
}

TEST(KMedoids, CostNeverIncreasesAndMedoidsAreMembers) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto d = random_dataset(rng, 50, 6);
        for (const auto& metric : {Metric::euclidean(), Metric::dtw(), Metric::kl()}) {
            const auto c = kmedoids(d, {4, metric, seed, 100});
            for (std::size_t i = 1; i < c.history.size(); ++i) {
                EXPECT_LE(c.history[i], c.history[i - 1] * (1 + 1e-12));
            }
            for (std::size_t k = 0; k < c.medoids.size(); ++k) {
                ASSERT_LT(c.medoids[k], d.size());
                EXPECT_EQ(c.centers[k], d[c.medoids[k]]);
                EXPECT_EQ(c.assignment[c.medoids[k]], static_cast<int>(k));
            }
            EXPECT_TRUE(all_clusters_non_empty(c));
        }
    }
}

TEST(KMedoids, ErrorsAndDeterminism) {
    Rng rng(4);
    const auto d = random_dataset(rng, 10, 3);
    EXPECT_THROW(kmedoids(d, {11, Metric::euclidean(), 1, 100}), InvalidArgument);
    EXPECT_THROW(kmedoids(d, {0, Metric::euclidean(), 1, 100}), InvalidArgument);
    EXPECT_EQ(kmedoids(d, {3, Metric::dtw(), 4, 100}), kmedoids(d, {3, Metric::dtw(), 4, 100}));
}

TEST(SpreadMedoids, DistinctDeterministicAndSkipsDuplicates) {
    Rng rng(12);
    const auto d = random_dataset(rng, 30, 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto m = spread_medoids(d, 6, Metric::euclidean(), seed);
        EXPECT_EQ(std::set<std::size_t>(m.begin(), m.end()).size(), 6u);
        EXPECT_EQ(m, spread_medoids(d, 6, Metric::euclidean(), seed));
    }
    // Three distinct values, each repeated: the first three picks cover them all.
    const Dataset dup{{1}, {1}, {1}, {5}, {5}, {9}, {9}, {9}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto m = spread_medoids(dup, 4, Metric::manhattan(), seed);
        std::set<double> values;
        for (std::size_t i = 0; i < 3; ++i) values.insert(dup[m[i]][0]);
        EXPECT_EQ(values.size(), 3u);
        EXPECT_EQ(std::set<std::size_t>(m.begin(), m.end()).size(), 4u);
    }
}

TEST(SpreadMedoids, FavoursFarItems) {
    // One far outlier group; with two medoids it is essentially always seeded.
    Dataset d;
    for (int i = 0; i < 20; ++i) d.push_back({static_cast<double>(i % 3)});
    d.push_back({1000.0});
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = spread_medoids(d, 2, Metric::euclidean(), seed);
        hits += std::count(m.begin(), m.end(), 20u) > 0 ? 1 : 0;
    }
    EXPECT_EQ(hits, 50);
}

TEST(Agglomerative, TwoObviousGroups) {
    const Dataset d{{0}, {0.1}, {10}, {10.1}};
    for (auto link : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
        const auto c = agglomerative(d, Metric::euclidean(), link, 2);
        EXPECT_EQ(c.assignment, (std::vector<int>{0, 0, 1, 1})) << linkage_name(link);
        EXPECT_EQ(c.history.size(), 2u);
    }
}

TEST(Agglomerative, MatchesNaiveMergeSimulation) {
    const std::pair<Linkage, oracle::Link> links[] = {{Linkage::Single, oracle::Link::Single},
                                                      {Linkage::Complete, oracle::Link::Complete},
                                                      {Linkage::Average, oracle::Link::Average}};
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Rng rng(seed);
        const auto d = random_dataset(rng, 9, 3);
        std::vector<std::vector<double>> dist(d.size(), std::vector<double>(d.size(), 0.0));
        for (std::size_t i = 0; i < d.size(); ++i) {
            for (std::size_t j = i + 1; j < d.size(); ++j) dist[i][j] = Metric::euclidean()(d[i], d[j]);
        }
        for (const auto& [lib, ref] : links) {
            for (int k = 1; k <= static_cast<int>(d.size()); ++k) {
                const auto c = agglomerative(d, Metric::euclidean(), lib, k);
                const auto [root, merges] = oracle::agglomerative_naive(dist, ref, static_cast<std::size_t>(k));
                ASSERT_EQ(c.history.size(), merges.size());
                for (std::size_t m = 0; m < merges.size(); ++m) EXPECT_NEAR(c.history[m], merges[m], 1e-9);
                for (std::size_t i = 0; i < d.size(); ++i) {
                    for (std::size_t j = 0; j < d.size(); ++j) {
                        EXPECT_EQ(c.assignment[i] == c.assignment[j], root[i] == root[j]);
                    }
                }
            }
        }
    }
}

TEST(Agglomerative, ExactlyTwoPartitionIsOptimalForSeparatedData) {
    // Every 2-partition of the four points, scored by the worst within-group
    // gap; the merge result must be the unique best one.
    const Dataset d{{0}, {0.1}, {10}, {10.1}};
    int best_mask = -1;
    double best = 1e300;
    for (int mask = 1; mask < 15; ++mask) {
        if (mask & 1) continue;  // fix item 0 in group A to avoid mirrored duplicates
        double worst = 0;
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                if (((mask >> i) & 1) == ((mask >> j) & 1)) worst = std::max(worst, std::abs(d[i][0] - d[j][0]));
            }
        }
        if (worst < best) {
            best = worst;
            best_mask = mask;
        }
    }
    const auto c = agglomerative(d, Metric::euclidean(), Linkage::Complete, 2);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(c.assignment[i], (best_mask >> i) & 1);
}

TEST(Agglomerative, MergeCountsAndMonotoneDendrogram) {
    Rng rng(6);
    const auto d = random_dataset(rng, 30, 5);
    for (auto link : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
        EXPECT_TRUE(agglomerative(d, Metric::dtw(), link, 30).history.empty());
        const auto c = agglomerative(d, Metric::dtw(), link, 1);
        ASSERT_EQ(c.history.size(), 29u);
        for (std::size_t i = 1; i < c.history.size(); ++i) EXPECT_LE(c.history[i - 1], c.history[i] * (1 + 1e-12));
        EXPECT_TRUE(std::all_of(c.assignment.begin(), c.assignment.end(), [](int a) { return a == 0; }));
    }
    EXPECT_THROW(agglomerative(d, Metric::euclidean(), Linkage::Single, 31), InvalidArgument);
}

TEST(PairCounts, HandExample) {
    const std::vector<int> g{0, 0, 1}, t{0, 1, 2};
    EXPECT_EQ(pair_counts(g, t), (PairCounts{0, 1, 0, 2}));
}

TEST(PairCounts, TrivialCases) {
    const std::vector<int> same{3, 3, 3, 3, 3};
    EXPECT_EQ(pair_counts(same, same), (PairCounts{10, 0, 0, 0}));
    const std::vector<int> g{0, 1, 1, 2, 0};
    const auto pc = pair_counts(g, g);
    EXPECT_EQ(pc.b, 0u);
    EXPECT_EQ(pc.c, 0u);
    const std::vector<int> short_one{0, 1};
    EXPECT_THROW(pair_counts(g, short_one), InvalidArgument);
}

TEST(PairCounts, MatchesEnumerationAndIsPermutationInvariant) {
    Rng rng(21);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + rng.below(40);
        std::vector<int> g(n), t(n);
        for (auto& v : g) v = static_cast<int>(rng.below(5));
        for (auto& v : t) v = static_cast<int>(rng.below(4));
        const auto pc = pair_counts(g, t);
        const auto ref = oracle::pair_counts_enumerated(g, t);
        EXPECT_EQ(pc, (PairCounts{ref.a, ref.b, ref.c, ref.d}));
        EXPECT_EQ(pc.total(), n * (n - 1) / 2);

        std::vector<int> perm{0, 1, 2, 3, 4};
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        auto g2 = g;
        for (auto& v : g2) v = perm[static_cast<std::size_t>(v)] + 100;
        EXPECT_EQ(pair_counts(g2, t), pc);
    }
}

TEST(ExternalIndices, DegenerateConventions) {
    const auto hand = external_indices({0, 1, 0, 2});
    EXPECT_EQ(hand.rand, 2.0 / 3.0);
    EXPECT_EQ(hand.jaccard, 0.0);
    EXPECT_EQ(hand.fowlkes_mallows, 0.0);

    const auto same = external_indices({4, 0, 0, 6});
    EXPECT_EQ(same.rand, 1.0);
    EXPECT_EQ(same.jaccard, 1.0);
    EXPECT_EQ(same.fowlkes_mallows, 1.0);

    const auto separated = external_indices({0, 0, 0, 3});
    EXPECT_EQ(separated.jaccard, 1.0);
    EXPECT_EQ(separated.fowlkes_mallows, 0.0);

    EXPECT_THROW(external_indices({0, 0, 0, 0}), InvalidArgument);
}

TEST(ExternalIndices, AlwaysInUnitInterval) {
    Rng rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        const PairCounts pc{rng.below(50), rng.below(50), rng.below(50), 1 + rng.below(50)};
        const auto x = external_indices(pc);
        for (double v : {x.rand, x.jaccard, x.fowlkes_mallows}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}
