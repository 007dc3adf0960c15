#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nocs {

/// Uniform-width bins over [min, max] of the data.
struct Histogram {
    std::vector<double> edges;  // bins + 1, strictly increasing
    std::vector<std::uint64_t> counts;
};

/// Probabilities that sum to 1.
struct ProbDist {
    std::vector<double> p;
};

/// The maximum lands in the last bin. A constant series uses [v, v + 1] so
/// the edges stay strictly increasing.
Histogram histogram(std::span<const double> series, int bins);

ProbDist normalize(const Histogram& h);

/// -sum P log_B P with 0 log 0 = 0. B > 1.
double shannon(const ProbDist& d, double base = 2.0);

/// (1 - sum P^Q) / (Q - 1). Q != 1.
double tsallis(const ProbDist& d, double q);

/// log_B(sum P^Q) / (1 - Q), with 0^Q = 0. Q != 1, B > 1.
double renyi(const ProbDist& d, double q, double base = 2.0);

/// Compact window descriptor: {shannon, tsallis, renyi} of the window's
/// value histogram. Not used by the default detector.
std::vector<double> entropy_features(std::span<const double> window, int bins = 16, double q = 2.0);

}  // namespace nocs
