#include "nocs/distance.hpp"

#include <algorithm>
#include <cmath>

#include "nocs/types.hpp"
#include "text_util.hpp"

namespace nocs {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.empty() || b.empty()) throw InvalidArgument(std::string(what) + ": empty series");
    if (a.size() != b.size()) {
        throw InvalidArgument(std::string(what) + ": series lengths differ (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    }
}

std::vector<double> to_distribution(std::span<const double> v, double epsilon) {
    double sum = 0.0;
    bool has_zero = false;
    for (double x : v) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("kullback_leibler: samples must be finite and >= 0");
        sum += x;
        has_zero = has_zero || x == 0.0;
    }
    if (sum == 0.0) throw InvalidArgument("kullback_leibler: all-zero series");
    std::vector<double> out(v.begin(), v.end());
    if (has_zero && epsilon > 0.0) {
        for (double& x : out) x += epsilon;
        sum += epsilon * static_cast<double>(out.size());
    }
    for (double& x : out) x /= sum;
    return out;
}

}  // namespace

MinkowskiOrder::MinkowskiOrder(double p) : p_(p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("Minkowski order must be a finite p >= 1");
}

double minkowski(std::span<const double> s, std::span<const double> z, MinkowskiOrder order) {
    require_same_length(s, z, "minkowski");
    const double p = order.value();
    double acc = 0.0;
    if (p == 1.0) {
        for (std::size_t t = 0; t < s.size(); ++t) acc += std::abs(s[t] - z[t]);
        return acc;
    }
    if (p == 2.0) {
        for (std::size_t t = 0; t < s.size(); ++t) acc += (s[t] - z[t]) * (s[t] - z[t]);
        return std::sqrt(acc);
    }
    for (std::size_t t = 0; t < s.size(); ++t) acc += std::pow(std::abs(s[t] - z[t]), p);
    return std::pow(acc, 1.0 / p);
}

double kullback_leibler(std::span<const double> s, std::span<const double> z, double epsilon) {
    require_same_length(s, z, "kullback_leibler");
    if (!(epsilon >= 0.0)) throw InvalidArgument("kullback_leibler: epsilon must be >= 0");
    const auto ps = to_distribution(s, epsilon);
    const auto pz = to_distribution(z, epsilon);
    double d = 0.0;
    for (std::size_t t = 0; t < ps.size(); ++t) {
        if (ps[t] == 0.0) continue;
        if (pz[t] == 0.0) return kInf;
        d += ps[t] * std::log(ps[t] / pz[t]);
    }
    return d;
}

DtwMatrix::DtwMatrix(std::size_t n, std::size_t m) : n_(n), m_(m), cells_((n + 1) * (m + 1), kInf) {
    cells_[0] = 0.0;
}

DtwResult dtw(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InvalidArgument("dtw: empty series");
    DtwResult r{0.0, DtwMatrix(a.size(), b.size())};
    auto& d = r.matrix;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const double best = std::min({d.at(i - 1, j - 1), d.at(i - 1, j), d.at(i, j - 1)});
            d.at(i, j) = std::abs(a[i - 1] - b[j - 1]) + best;
        }
    }
    r.distance = d.at(a.size(), b.size());
    return r;
}

double dtw_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InvalidArgument("dtw: empty series");
    const std::size_t m = b.size();
    std::vector<double> prev(m + 1, kInf), curr(m + 1, kInf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        curr[0] = kInf;
        for (std::size_t j = 1; j <= m; ++j) {
            const double best = std::min({prev[j - 1], prev[j], curr[j - 1]});
            curr[j] = std::abs(a[i - 1] - b[j - 1]) + best;
        }
        std::swap(prev, curr);
    }
    return prev[m];
}

WarpingPath dtw_path(const DtwMatrix& d) {
    const std::size_t n = d.rows();
    const std::size_t m = d.cols();
    if (n == 0 || m == 0) throw InvalidArgument("dtw_path: empty matrix");
    if (d.at(0, 0) != 0.0) throw InvalidArgument("dtw_path: origin cell must be 0");
    for (std::size_t j = 1; j <= m; ++j) {
        if (d.at(0, j) != kInf) throw InvalidArgument("dtw_path: row 0 must be +inf sentinels");
    }
    for (std::size_t i = 1; i <= n; ++i) {
        if (d.at(i, 0) != kInf) throw InvalidArgument("dtw_path: column 0 must be +inf sentinels");
    }
    if (!std::isfinite(d.at(n, m))) throw InvalidArgument("dtw_path: final cell is not finite");

    WarpingPath path;
    std::size_t i = n, j = m;
    path.emplace_back(i, j);
    while (i > 1 || j > 1) {
        const double diag = d.at(i - 1, j - 1);
        const double up = d.at(i - 1, j);
        const double left = d.at(i, j - 1);
        if (diag <= up && diag <= left && std::isfinite(diag) && !(i - 1 == 0 || j - 1 == 0)) {
            --i;
            --j;
        } else if (up <= left && std::isfinite(up) && i > 1) {
            --i;
        } else if (std::isfinite(left) && j > 1) {
            --j;
        } else {
            throw InvalidArgument("dtw_path: no finite predecessor at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
        }
        path.emplace_back(i, j);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double path_cost(std::span<const double> a, std::span<const double> b, const WarpingPath& path) {
    double sum = 0.0;
    for (const auto& [i, j] : path) {
        if (i < 1 || i > a.size() || j < 1 || j > b.size()) throw InvalidArgument("path_cost: index out of range");
        sum += std::abs(a[i - 1] - b[j - 1]);
    }
    return sum;
}

std::vector<double> align(std::span<const double> b, const WarpingPath& path) {
    std::vector<double> out;
    std::size_t k = 0;
    while (k < path.size()) {
        const std::size_t row = path[k].first;
        std::size_t end = k;
        while (end < path.size() && path[end].first == row) {
            const std::size_t j = path[end].second;
            if (j < 1 || j > b.size()) throw InvalidArgument("align: path column " + std::to_string(j) + " out of range");
            ++end;
        }
        if (end - k == 1) out.push_back(b[path[k].second - 1]);
        k = end;
    }
    return out;
}

std::string Metric::name() const {
    switch (kind) {
        case MetricKind::Manhattan: return "manhattan";
        case MetricKind::Euclidean: return "euclidean";
        case MetricKind::Minkowski: return "minkowski:" + detail::format_double(p);
        case MetricKind::KullbackLeibler:
            return kl_epsilon == 1e-9 ? "kl" : "kl:" + detail::format_double(kl_epsilon);
        case MetricKind::Dtw: return "dtw";
    }
    return "?";
}

Metric Metric::parse(const std::string& name) {
    if (name == "manhattan") return manhattan();
    if (name == "euclidean") return euclidean();
    if (name == "dtw") return dtw();
    if (name == "kl") return kl();
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
        const auto head = name.substr(0, colon);
        const auto value = detail::parse_double(std::string_view(name).substr(colon + 1));
        if (value && head == "minkowski") {
            MinkowskiOrder checked(*value);
            return minkowski(checked.value());
        }
        if (value && head == "kl" && *value >= 0.0) return kl(*value);
    }
    throw InvalidArgument("unknown metric '" + name + "'");
}

double Metric::operator()(std::span<const double> a, std::span<const double> b) const {
    switch (kind) {
        case MetricKind::Manhattan: return nocs::minkowski(a, b, MinkowskiOrder(1.0));
        case MetricKind::Euclidean: return nocs::minkowski(a, b, MinkowskiOrder(2.0));
        case MetricKind::Minkowski: return nocs::minkowski(a, b, MinkowskiOrder(p));
        case MetricKind::KullbackLeibler: return kullback_leibler(a, b, kl_epsilon);
        case MetricKind::Dtw: return dtw_distance(a, b);
    }
    throw InvalidArgument("unknown metric kind");
}

}  // namespace nocs
