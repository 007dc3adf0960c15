#include "nocs/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nocs/types.hpp"

namespace nocs {

namespace {

void check_base(double base) {
    if (!(base > 1.0) || !std::isfinite(base)) throw InvalidArgument("entropy base must be > 1");
}

void check_order(double q) {
    if (q == 1.0) throw InvalidArgument("entropy order Q = 1 is the Shannon limit; call shannon()");
    if (!std::isfinite(q)) throw InvalidArgument("entropy order must be finite");
}

double power_sum(const ProbDist& d, double q) {
    double s = 0.0;
    for (double p : d.p) {
        if (p > 0.0) s += std::pow(p, q);
    }
    return s;
}

/// Uses the dedicated functions for the common bases so that exact
/// powers come out exact.
double log_base(double x, double base) {
    if (base == 2.0) return std::log2(x);
    if (base == 10.0) return std::log10(x);
    return std::log(x) / std::log(base);
}

}  // namespace

Histogram histogram(std::span<const double> series, int bins) {
    if (series.empty()) throw InvalidArgument("histogram: empty series");
    if (bins < 1) throw InvalidArgument("histogram: bins must be >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
    const double lo = *lo_it;
    double hi = *hi_it;
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("histogram: non-finite sample");
    if (hi == lo) hi = lo + 1.0;

    Histogram h;
    const double width = (hi - lo) / bins;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + width * b;
    h.edges.back() = hi;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : series) {
        auto b = static_cast<int>((v - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

ProbDist normalize(const Histogram& h) {
    std::uint64_t total = 0;
    for (auto c : h.counts) total += c;
    if (total == 0) throw InvalidArgument("normalize: histogram has no samples");
    ProbDist d;
    d.p.reserve(h.counts.size());
    for (auto c : h.counts) d.p.push_back(static_cast<double>(c) / static_cast<double>(total));
    return d;
}

double shannon(const ProbDist& d, double base) {
    check_base(base);
    double h = 0.0;
    for (double p : d.p) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h / std::log(base);
}

double tsallis(const ProbDist& d, double q) {
    check_order(q);
    return (1.0 - power_sum(d, q)) / (q - 1.0);
}

double renyi(const ProbDist& d, double q, double base) {
    check_order(q);
    check_base(base);
    // Factor out the largest probability: log sum p^q = q log p_max + log sum (p/p_max)^q.
    double p_max = 0.0;
    for (double p : d.p) p_max = std::max(p_max, p);
    if (!(p_max > 0.0)) throw InvalidArgument("renyi: distribution has no mass");
    double s = 0.0;
    for (double p : d.p) {
        if (p > 0.0) s += std::pow(p / p_max, q);
    }
    return (q * log_base(p_max, base) + log_base(s, base)) / (1.0 - q);
}

std::vector<double> entropy_features(std::span<const double> window, int bins, double q) {
    const auto d = normalize(histogram(window, bins));
    return {shannon(d, 2.0), tsallis(d, q), renyi(d, q, 2.0)};
}

}  // namespace nocs
