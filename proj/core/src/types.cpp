#include "nocs/types.hpp"

namespace nocs {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

std::string to_string(Coordinate c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

char port_letter(PortId p) noexcept {
    switch (p) {
        case PortId::Local: return 'L';
        case PortId::East: return 'E';
        case PortId::West: return 'W';
        case PortId::North: return 'N';
        case PortId::South: return 'S';
    }
    return '?';
}

std::optional<PortId> port_from_letter(char c) noexcept {
    switch (c) {
        case 'L': return PortId::Local;
        case 'E': return PortId::East;
        case 'W': return PortId::West;
        case 'N': return PortId::North;
        case 'S': return PortId::South;
        default: return std::nullopt;
    }
}

std::string_view port_name(PortId p) noexcept {
    switch (p) {
        case PortId::Local: return "Local";
        case PortId::East: return "East";
        case PortId::West: return "West";
        case PortId::North: return "North";
        case PortId::South: return "South";
    }
    return "?";
}

PortId opposite(PortId p) noexcept {
    switch (p) {
        case PortId::East: return PortId::West;
        case PortId::West: return PortId::East;
        case PortId::North: return PortId::South;
        case PortId::South: return PortId::North;
        case PortId::Local: return PortId::Local;
    }
    return PortId::Local;
}

Coordinate step(Coordinate c, PortId p) noexcept {
    switch (p) {
        case PortId::East: return {c.x + 1, c.y};
        case PortId::West: return {c.x - 1, c.y};
        case PortId::North: return {c.x, c.y + 1};
        case PortId::South: return {c.x, c.y - 1};
        case PortId::Local: return c;
    }
    return c;
}

}  // namespace nocs
