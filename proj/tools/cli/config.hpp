#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nocs/ids.hpp"
#include "nocs/noc.hpp"
#include "nocs/workload.hpp"

namespace nocs::cli {

struct IdsParams {
    WindowSpec window;
    int k = 8;
    Metric metric = Metric::euclidean();
    Algorithm algorithm = Algorithm::KMeans;
    Linkage linkage = Linkage::Average;
    double percentile = 99.5;
    double floor = 1e-9;
    std::uint64_t seed = 1;
};

struct RunConfig {
    MeshConfig mesh;
    PatternSpec traffic;
    std::vector<AttackSpec> attacks;
    IdsParams ids;
};

/// `[section]` headers and `key = value` lines; `#` starts a comment.
/// Sections: mesh, traffic, attack (repeatable), ids. Throws ConfigError
/// whose message starts with "line N:" when the problem has a line.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::filesystem::path& path);

/// NOC_SENTINEL_SEED, when set, replaces the simulation seed.
std::optional<std::uint64_t> seed_from_env();

}  // namespace nocs::cli
