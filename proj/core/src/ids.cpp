#include "nocs/ids.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nocs/rng.hpp"

namespace nocs {

const char* normalization_name(Normalization n) noexcept {
    return n == Normalization::MinMax ? "minmax" : "none";
}

Normalization parse_normalization(const std::string& name) {
    if (name == "none") return Normalization::None;
    if (name == "minmax") return Normalization::MinMax;
    throw InvalidArgument("unknown normalization '" + name + "'");
}

void WindowSpec::validate() const {
    if (width < 2) throw InvalidArgument("window width must be >= 2");
    if (stride < 1 || stride > width) throw InvalidArgument("window stride must be in [1, width]");
}

std::vector<double> minmax_normalize(std::span<const double> window) {
    std::vector<double> out(window.begin(), window.end());
    if (out.empty()) return out;
    const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
    const double a = *lo;
    const double range = *hi - a;
    for (double& v : out) v = range > 0.0 ? (v - a) / range : 0.0;
    return out;
}

std::vector<std::vector<double>> slide_windows(std::span<const double> series, const WindowSpec& spec) {
    spec.validate();
    const auto w = static_cast<std::size_t>(spec.width);
    const auto s = static_cast<std::size_t>(spec.stride);
    if (series.size() < w) {
        throw InvalidArgument("series of length " + std::to_string(series.size()) + " is shorter than the window (" +
                              std::to_string(w) + ")");
    }
    std::vector<std::vector<double>> out;
    out.reserve((series.size() - w) / s + 1);
    for (std::size_t start = 0; start + w <= series.size(); start += s) {
        auto view = series.subspan(start, w);
        if (spec.normalization == Normalization::MinMax) {
            out.push_back(minmax_normalize(view));
        } else {
            out.emplace_back(view.begin(), view.end());
        }
    }
    return out;
}

const char* algorithm_name(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::KMeans: return "kmeans";
        case Algorithm::KMedoids: return "kmedoids";
        case Algorithm::Agglomerative: return "agglomerative";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "kmeans") return Algorithm::KMeans;
    if (name == "kmedoids") return Algorithm::KMedoids;
    if (name == "agglomerative") return Algorithm::Agglomerative;
    throw InvalidArgument("unknown algorithm '" + name + "'");
}

double ShapeDictionary::threshold(Coordinate router) const {
    if (!dims.contains(router)) throw InvalidArgument("router " + to_string(router) + " outside dictionary mesh");
    return thresholds.at(static_cast<std::size_t>(dims.index(router)));
}

Encoding encode(std::span<const double> window, const ShapeDictionary& dict) {
    if (dict.centers.empty()) throw InvalidArgument("encode: dictionary has no centers");
    if (window.size() != static_cast<std::size_t>(dict.spec.width)) {
        throw InvalidArgument("encode: window length " + std::to_string(window.size()) +
                              " does not match dictionary width " + std::to_string(dict.spec.width));
    }
    std::size_t best = 0;
    double best_d = kInf;
    for (std::size_t c = 0; c < dict.centers.size(); ++c) {
        const double d = dict.metric(window, dict.centers[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return {static_cast<int>(best), dict.centers[best]};
}

Reconstruction reconstruction_error(std::span<const double> x, std::span<const double> x_prime, const Metric& metric) {
    if (x.size() != x_prime.size()) throw InvalidArgument("reconstruction_error: lengths differ");
    Reconstruction r;
    r.delta = metric(x, x_prime);
    r.residual.reserve(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) r.residual.push_back(x[t] - x_prime[t]);
    return r;
}

double percentile_nearest_rank(std::vector<double> values, double q) {
    if (values.empty()) throw InvalidArgument("percentile of an empty set");
    if (!(q > 0.0 && q <= 100.0)) throw InvalidArgument("percentile must be in (0, 100]");
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return values[rank - 1];
}

std::vector<double> calibrate_threshold(const std::vector<std::vector<double>>& errors_per_router, double q,
                                        double floor) {
    if (!(floor >= 0.0)) throw InvalidArgument("threshold floor must be >= 0");
    std::vector<double> h;
    h.reserve(errors_per_router.size());
    for (std::size_t r = 0; r < errors_per_router.size(); ++r) {
        if (errors_per_router[r].empty()) {
            throw InvalidArgument("no training errors for router index " + std::to_string(r));
        }
        h.push_back(std::max(percentile_nearest_rank(errors_per_router[r], q), floor));
    }
    return h;
}

ShapeDictionary train_dictionary(std::span<const TrafficTrace> traces, const TrainOptions& opt) {
    opt.window.validate();
    if (traces.empty()) throw InvalidArgument("train_dictionary: no training traces");
    if (opt.k < 1) throw InvalidArgument("train_dictionary: k must be >= 1");
    if (!(opt.percentile > 0.0 && opt.percentile <= 100.0)) throw InvalidArgument("percentile must be in (0, 100]");
    const MeshDims dims = traces.front().dims();
    for (std::size_t i = 0; i < traces.size(); ++i) {
        if (traces[i].dims() != dims) throw InvalidArgument("train_dictionary: traces use different mesh sizes");
        if (traces[i].any_attacked() || traces[i].meta().attack_count > 0) {
            throw InvalidArgument("train_dictionary: training trace " + std::to_string(i) +
                                  " carries attack labels; training data must be attack-free");
        }
    }

    Dataset windows;
    std::vector<int> owner;
    for (const auto& trace : traces) {
        for (int r = 0; r < dims.routers(); ++r) {
            const auto series = extract_series(trace, dims.at(r));
            for (auto& w : slide_windows(series.samples, opt.window)) {
                windows.push_back(std::move(w));
                owner.push_back(r);
            }
        }
    }
    if (windows.size() < static_cast<std::size_t>(opt.k)) {
        throw InvalidArgument("train_dictionary: " + std::to_string(windows.size()) + " windows for k = " +
                              std::to_string(opt.k));
    }

    Clustering clustering;
    switch (opt.algorithm) {
        case Algorithm::KMeans:
            clustering = kmeans(windows, {opt.k, opt.metric, opt.seed, opt.max_iter, 0.0});
            break;
        case Algorithm::KMedoids:
            clustering = kmedoids(windows, {opt.k, opt.metric, opt.seed, opt.max_iter});
            break;
        case Algorithm::Agglomerative:
            clustering = agglomerative(windows, opt.metric, opt.linkage, opt.k);
            break;
    }

    ShapeDictionary dict;
    dict.spec = opt.window;
    dict.metric = opt.metric;
    dict.algorithm = opt.algorithm;
    dict.linkage = opt.linkage;
    dict.k = opt.k;
    dict.seed = opt.seed;
    dict.percentile = opt.percentile;
    dict.floor = opt.floor;
    dict.dims = dims;
    dict.centers = std::move(clustering.centers);
    if (opt.fingerprint.empty()) {
        std::string fp = "traces=" + std::to_string(traces.size()) + ";seeds=";
        for (std::size_t i = 0; i < traces.size(); ++i) {
            fp += (i ? "/" : "") + std::to_string(traces[i].meta().seed);
        }
        dict.fingerprint = fp;
    } else {
        dict.fingerprint = opt.fingerprint;
    }

    std::vector<std::vector<double>> errors(static_cast<std::size_t>(dims.routers()));
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto enc = encode(windows[i], dict);
        errors[static_cast<std::size_t>(owner[i])].push_back(dict.metric(windows[i], enc.reconstruction));
    }
    dict.thresholds = calibrate_threshold(errors, opt.percentile, opt.floor);
    return dict;
}

std::size_t DetectionReport::anomalies() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const ReconstructionRecord& r) { return r.anomalous; }));
}

DetectionReport detect(const TrafficTrace& trace, const ShapeDictionary& dict) {
    if (trace.dims() != dict.dims) {
        throw InvalidArgument("detect: trace mesh " + std::to_string(trace.dims().width) + "x" +
                              std::to_string(trace.dims().height) + " does not match dictionary mesh " +
                              std::to_string(dict.dims.width) + "x" + std::to_string(dict.dims.height));
    }
    DetectionReport report;
    report.dims = dict.dims;
    report.spec = dict.spec;
    report.quanta = trace.quanta();
    for (int r = 0; r < dict.dims.routers(); ++r) {
        const Coordinate router = dict.dims.at(r);
        const auto series = extract_series(trace, router);
        const double h = dict.threshold(router);
        int start = 0;
        for (auto& x : slide_windows(series.samples, dict.spec)) {
            auto enc = encode(x, dict);
            ReconstructionRecord rec;
            rec.router = router;
            rec.window_start = start;
            rec.cluster = enc.cluster;
            rec.delta = dict.metric(x, enc.reconstruction);
            rec.threshold = h;
            rec.anomalous = rec.delta > h;
            rec.x = std::move(x);
            rec.x_prime = std::move(enc.reconstruction);
            report.records.push_back(std::move(rec));
            start += dict.spec.stride;
        }
    }
    return report;
}

EvalMetrics EvalMetrics::from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn) {
    EvalMetrics m;
    m.tp = tp;
    m.fp = fp;
    m.tn = tn;
    m.fn = fn;
    m.precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    const auto total = tp + fp + tn + fn;
    m.accuracy = total == 0 ? 1.0 : static_cast<double>(tp + tn) / static_cast<double>(total);
    return m;
}

EvalMetrics evaluate_detection(const DetectionReport& report, const LabelGrid& labels) {
    if (report.records.empty()) throw InvalidArgument("evaluate_detection: report has no windows");
    if (labels.dims != report.dims) throw InvalidArgument("evaluate_detection: label mesh differs from report mesh");
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (const auto& rec : report.records) {
        const int end = rec.window_start + report.spec.width;
        if (rec.window_start < 0 || end > labels.quanta) {
            throw InvalidArgument("evaluate_detection: no labels for quanta [" + std::to_string(rec.window_start) +
                                  ", " + std::to_string(end) + ") at " + to_string(rec.router));
        }
        bool attacked = false;
        for (int q = rec.window_start; q < end && !attacked; ++q) attacked = labels.at(q, rec.router);
        if (rec.anomalous) {
            ++(attacked ? tp : fp);
        } else {
            ++(attacked ? fn : tn);
        }
    }
    return EvalMetrics::from_counts(tp, fp, tn, fn);
}

const std::vector<std::string>& shape_family_names() {
    static const std::vector<std::string> names{"constant", "ramp", "spike", "square_pulse", "triangle_wave",
                                                "half_sine"};
    return names;
}

std::vector<double> shape_template(int family, int width) {
    if (width < 2) throw InvalidArgument("shape width must be >= 2");
    if (family < 0 || family >= static_cast<int>(shape_family_names().size())) {
        throw InvalidArgument("unknown shape family " + std::to_string(family));
    }
    // Base level 1, unit amplitude; positive everywhere so KL applies.
    constexpr double base = 1.0;
    std::vector<double> s(static_cast<std::size_t>(width), base);
    const double last = width - 1;
    for (int t = 0; t < width; ++t) {
        double& v = s[static_cast<std::size_t>(t)];
        switch (family) {
            case 0: v = base + 0.5; break;
            case 1: v = base + t / last; break;
            case 2: v = t == width / 2 ? base + 1.0 : base; break;
            case 3: v = (3 * t >= width && 3 * t < 2 * width) ? base + 0.5 : base; break;
            case 4: {
                const double u = 2.0 * t / width;
                v = base + 1.0 - std::abs(2.0 * (u - std::floor(u)) - 1.0);
                break;
            }
            case 5: v = base + std::sin(std::numbers::pi * t / last); break;
        }
    }
    return s;
}

LabeledDataset gen_shape_benchmark(const ShapeBenchmarkOptions& opt) {
    const int max_families = static_cast<int>(shape_family_names().size());
    if (opt.families < 2 || opt.families > max_families) {
        throw InvalidArgument("shape benchmark families must be in [2, " + std::to_string(max_families) + "]");
    }
    if (opt.per_family < 1) throw InvalidArgument("shape benchmark needs at least one item per family");
    if (!(opt.noise >= 0.0)) throw InvalidArgument("shape benchmark noise must be >= 0");

    Rng rng(opt.seed);
    LabeledDataset out;
    for (int f = 0; f < opt.families; ++f) {
        const auto clean = shape_template(f, opt.width);
        for (int i = 0; i < opt.per_family; ++i) {
            auto item = clean;
            if (opt.noise > 0.0) {
                for (double& v : item) v += opt.noise * rng.normal();
            }
            out.data.push_back(std::move(item));
            out.labels.push_back(f);
        }
    }
    return out;
}

}  // namespace nocs
