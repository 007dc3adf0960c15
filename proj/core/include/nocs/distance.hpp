#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nocs {

/// Order p of a Minkowski distance; p >= 1 keeps it a metric.
class MinkowskiOrder {
public:
    explicit MinkowskiOrder(double p);
    double value() const noexcept { return p_; }

private:
    double p_;
};

/// (sum_t |s[t] - z[t]|^p)^(1/p). Throws InvalidArgument on length mismatch or empty input.
double minkowski(std::span<const double> s, std::span<const double> z, MinkowskiOrder order);

/// KL divergence sum_t s[t] ln(s[t]/z[t]) of the two series after each is
/// normalised to sum 1. When a series has a zero bin, `epsilon` is added to
/// every one of its bins before normalising. Inputs must be non-negative and
/// not all zero.
double kullback_leibler(std::span<const double> s, std::span<const double> z, double epsilon = 1e-9);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Accumulated-cost grid with the sentinel row and column: (n+1) x (m+1),
/// cell (0,0) = 0, the rest of row 0 and column 0 = +inf.
class DtwMatrix {
public:
    DtwMatrix() = default;
    DtwMatrix(std::size_t n, std::size_t m);

    std::size_t rows() const noexcept { return n_; }  // n, excluding the sentinel
    std::size_t cols() const noexcept { return m_; }
    double& at(std::size_t i, std::size_t j) { return cells_[i * (m_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return cells_[i * (m_ + 1) + j]; }

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> cells_;
};

struct DtwResult {
    double distance = 0.0;
    DtwMatrix matrix;
};

/// Full-matrix DTW with absolute-difference cost and no window constraint.
DtwResult dtw(std::span<const double> a, std::span<const double> b);

/// Same value as dtw(a, b).distance using two rows of storage.
double dtw_distance(std::span<const double> a, std::span<const double> b);

/// 1-based (i, j) cells from (1,1) to (n,m).
using WarpingPath = std::vector<std::pair<std::size_t, std::size_t>>;

/// Backtracks from (n,m) to (1,1) taking the smallest predecessor; ties
/// prefer the diagonal, then (i-1, j), then (i, j-1).
WarpingPath dtw_path(const DtwMatrix& matrix);

/// Sum of |a[i] - b[j]| along a path.
double path_cost(std::span<const double> a, std::span<const double> b, const WarpingPath& path);

/// Re-indexes `b` along the path's first coordinate. A row of the path
/// matched to a single b sample emits it (rows that share one b sample
/// duplicate it); a row matched to several b samples is a deletion and
/// emits nothing.
std::vector<double> align(std::span<const double> b, const WarpingPath& path);

enum class MetricKind { Manhattan, Euclidean, Minkowski, KullbackLeibler, Dtw };

/// A distance function selectable at run time.
struct Metric {
    MetricKind kind = MetricKind::Euclidean;
    double p = 2.0;             // Minkowski only
    double kl_epsilon = 1e-9;   // KullbackLeibler only

    static Metric manhattan() { return {MetricKind::Manhattan, 1.0}; }
    static Metric euclidean() { return {MetricKind::Euclidean, 2.0}; }
    static Metric minkowski(double p) { return {MetricKind::Minkowski, p}; }
    static Metric kl(double epsilon = 1e-9) { return {MetricKind::KullbackLeibler, 2.0, epsilon}; }
    static Metric dtw() { return {MetricKind::Dtw}; }

    bool elastic() const noexcept { return kind == MetricKind::Dtw; }
    bool symmetric() const noexcept { return kind != MetricKind::KullbackLeibler; }
    bool minkowski_family() const noexcept {
        return kind == MetricKind::Manhattan || kind == MetricKind::Euclidean || kind == MetricKind::Minkowski;
    }

    /// "manhattan", "euclidean", "minkowski:3", "kl", "kl:1e-06", "dtw".
    std::string name() const;
    static Metric parse(const std::string& name);

    double operator()(std::span<const double> a, std::span<const double> b) const;

    friend bool operator==(const Metric&, const Metric&) = default;
};

}  // namespace nocs
