#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nocs/clustering.hpp"
#include "nocs/distance.hpp"
#include "nocs/monitor.hpp"
#include "nocs/types.hpp"

namespace nocs {

enum class Normalization { None, MinMax };

const char* normalization_name(Normalization n) noexcept;
Normalization parse_normalization(const std::string& name);

struct WindowSpec {
    int width = 32;  // quanta
    int stride = 8;  // quanta
    Normalization normalization = Normalization::None;

    /// Throws InvalidArgument unless width >= 2 and 1 <= stride <= width.
    void validate() const;

    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

/// Maps a window onto [0, 1]; a constant window becomes all zeros.
std::vector<double> minmax_normalize(std::span<const double> window);

/// Windows starting at 0, s, 2s, ... that fit entirely in the series,
/// normalised per the spec.
std::vector<std::vector<double>> slide_windows(std::span<const double> series, const WindowSpec& spec);

enum class Algorithm { KMeans, KMedoids, Agglomerative };

const char* algorithm_name(Algorithm a) noexcept;
Algorithm parse_algorithm(const std::string& name);

/// Shared dictionary of window shapes plus a threshold per router.
struct ShapeDictionary {
    WindowSpec spec;
    Metric metric = Metric::euclidean();
    Algorithm algorithm = Algorithm::KMeans;
    Linkage linkage = Linkage::Average;  // agglomerative only
    int k = 0;
    std::uint64_t seed = 0;
    double percentile = 99.5;
    double floor = 1e-9;
    MeshDims dims;
    std::string fingerprint;
    std::vector<std::vector<double>> centers;
    std::vector<double> thresholds;  // indexed by MeshDims::index

    double threshold(Coordinate router) const;

    friend bool operator==(const ShapeDictionary&, const ShapeDictionary&) = default;
};

struct TrainOptions {
    WindowSpec window;
    int k = 8;
    Algorithm algorithm = Algorithm::KMeans;
    Metric metric = Metric::euclidean();
    Linkage linkage = Linkage::Average;
    std::uint64_t seed = 1;
    double percentile = 99.5;
    double floor = 1e-9;
    int max_iter = 100;
    /// Free-form provenance of the training data; derived from the traces
    /// when empty.
    std::string fingerprint;
};

/// Clusters every router's AggregateIn windows from attack-free traces and
/// calibrates per-router thresholds from the training reconstruction errors.
/// Throws InvalidArgument for traces carrying attack labels, mismatched
/// meshes, or fewer windows than k.
ShapeDictionary train_dictionary(std::span<const TrafficTrace> traces, const TrainOptions& options);

struct Encoding {
    int cluster = 0;
    std::vector<double> reconstruction;
};

/// Nearest center under the dictionary metric; lowest index wins ties.
Encoding encode(std::span<const double> window, const ShapeDictionary& dict);

struct Reconstruction {
    double delta = 0.0;
    std::vector<double> residual;  // x - x'
};

Reconstruction reconstruction_error(std::span<const double> x, std::span<const double> x_prime, const Metric& metric);

/// Nearest-rank percentile: the ceil(q/100 * N)-th smallest value.
double percentile_nearest_rank(std::vector<double> values, double q);

/// h = max(percentile_q(errors), floor) for each router's error set.
std::vector<double> calibrate_threshold(const std::vector<std::vector<double>>& errors_per_router, double q,
                                        double floor);

struct ReconstructionRecord {
    Coordinate router;
    int window_start = 0;
    int cluster = 0;
    std::vector<double> x;        // empty when read back from a report file
    std::vector<double> x_prime;  // likewise
    double delta = 0.0;
    double threshold = 0.0;
    bool anomalous = false;
};

struct DetectionReport {
    MeshDims dims;
    WindowSpec spec;
    int quanta = 0;
    /// Sorted by (router index, window start).
    std::vector<ReconstructionRecord> records;

    std::size_t anomalies() const noexcept;
};

/// Encodes every window of every router; anomalous exactly when delta > h.
DetectionReport detect(const TrafficTrace& trace, const ShapeDictionary& dict);

struct EvalMetrics {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;
    double precision = 1.0;
    double recall = 1.0;
    double accuracy = 1.0;

    /// Empty denominators give 1 for precision and recall.
    static EvalMetrics from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn);
};

/// A window is attacked when any of its quanta is labelled attacked at its
/// router. Throws InvalidArgument when labels do not cover a window or the
/// report is empty.
EvalMetrics evaluate_detection(const DetectionReport& report, const LabelGrid& labels);

struct ShapeBenchmarkOptions {
    int families = 6;
    int per_family = 20;
    double noise = 0.05;  // standard deviation, relative to the unit amplitude
    int width = 32;
    std::uint64_t seed = 7;
};

struct LabeledDataset {
    Dataset data;
    std::vector<int> labels;
};

/// Family order: constant, ramp, spike, square pulse, triangle wave, half sine.
const std::vector<std::string>& shape_family_names();

/// The noise-free member of a family.
std::vector<double> shape_template(int family, int width);

/// per_family noisy copies of each of the first `families` shapes, grouped by family.
LabeledDataset gen_shape_benchmark(const ShapeBenchmarkOptions& options);

// Dictionary file: `# key=value` metadata, k center lines of w values,
// then one `x,y,h` line per router in index order.
void write_dictionary(const ShapeDictionary& dict, std::ostream& out);
void write_dictionary(const ShapeDictionary& dict, const std::filesystem::path& path);
ShapeDictionary read_dictionary(std::istream& in);
ShapeDictionary read_dictionary(const std::filesystem::path& path);

// Report file: `# key=value` metadata (mesh, window, quanta) and
// `x,y,window_start,cluster,delta,threshold,anomalous`.
void write_report(const DetectionReport& report, std::ostream& out);
void write_report(const DetectionReport& report, const std::filesystem::path& path);
DetectionReport read_report(std::istream& in);
DetectionReport read_report(const std::filesystem::path& path);

/// `quantum_offset,x_value,x_prime_value,residual` for one record.
void write_residuals(const ReconstructionRecord& record, std::ostream& out);

}  // namespace nocs
