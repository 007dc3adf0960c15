#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nocs {

// Error taxonomy. Everything derives from std::invalid_argument or
// std::runtime_error so callers that only care about "bad input" can catch
// the standard types.

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedMetric : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file. `line()` is 1-based; 0 means "whole file".
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Mesh position. Origin at the south-west corner, x grows east, y grows north.
/// Signed so that out-of-mesh addresses (used by misrouting) are representable.
struct Coordinate {
    int x = 0;
    int y = 0;

    friend constexpr bool operator==(Coordinate, Coordinate) = default;
    friend constexpr auto operator<=>(Coordinate, Coordinate) = default;
};

std::string to_string(Coordinate c);

struct MeshDims {
    int width = 0;
    int height = 0;

    constexpr int routers() const noexcept { return width * height; }
    constexpr bool contains(Coordinate c) const noexcept {
        return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
    }
    /// Row-major index, y outer. This is also the canonical router order
    /// used by traces and reports.
    constexpr int index(Coordinate c) const noexcept { return c.y * width + c.x; }
    constexpr Coordinate at(int index) const noexcept { return {index % width, index / width}; }

    friend constexpr bool operator==(MeshDims, MeshDims) = default;
};

/// Router ports in canonical order; the order is the arbitration tie-break.
enum class PortId : std::uint8_t { Local = 0, East = 1, West = 2, North = 3, South = 4 };

inline constexpr std::size_t kPortCount = 5;
inline constexpr std::array<PortId, kPortCount> kAllPorts{
    PortId::Local, PortId::East, PortId::West, PortId::North, PortId::South};

constexpr std::size_t port_index(PortId p) noexcept { return static_cast<std::size_t>(p); }
char port_letter(PortId p) noexcept;
std::optional<PortId> port_from_letter(char c) noexcept;
std::string_view port_name(PortId p) noexcept;

/// The input port on the neighbour that receives what leaves through `p`.
PortId opposite(PortId p) noexcept;

/// Neighbour coordinate in direction `p` (may fall outside the mesh).
Coordinate step(Coordinate c, PortId p) noexcept;

enum class Direction : std::uint8_t { In = 0, Out = 1 };

enum class Label : std::uint8_t { Benign = 0, Attack = 1 };

}  // namespace nocs
