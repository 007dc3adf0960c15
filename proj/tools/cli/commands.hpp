#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nocs::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDeadlock = 3, kLivelock = 4, kAnomaly = 5 };

struct SimulateArgs {
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::filesystem::path> labels;  // default: <out>.labels.csv
};

struct TrainArgs {
    std::vector<std::filesystem::path> traces;
    std::filesystem::path out;
    std::optional<std::filesystem::path> config;  // [ids] section supplies defaults
    std::optional<int> width;
    std::optional<int> stride;
    std::optional<int> k;
    std::optional<std::string> metric;
    std::optional<std::string> algorithm;
    std::optional<std::string> normalization;
    std::optional<std::string> linkage;
    std::optional<double> percentile;
    std::optional<std::uint64_t> seed;
};

struct DetectArgs {
    std::filesystem::path trace;
    std::filesystem::path dictionary;
    std::filesystem::path out;
    std::optional<std::filesystem::path> residuals_dir;
};

struct EvaluateArgs {
    std::filesystem::path report;
    std::filesystem::path labels;
};

struct BenchShapesArgs {
    int families = 6;
    int count = 20;  // per family
    double noise = 0.05;
    int width = 32;
    std::uint64_t seed = 7;
};

// Each command reports progress on `out`, problems on `err`, and returns
// an ExitCode. Errors never escape as exceptions.
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_detect(const DetectArgs& args, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);
int cmd_bench_shapes(const BenchShapesArgs& args, std::ostream& out, std::ostream& err);

}  // namespace nocs::cli
