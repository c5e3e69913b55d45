#pragma once

#include <string>

#include "vkdelay/dynamics.hpp"

namespace vkd {

// Binary state file: magic "VKDS", u32 version (1), u32 nx, u32 ny,
// f64 time, then u and u_t as little-endian f64, row-major. Round trips are
// bit-exact.
void write_snapshot(const std::string& path, const PlateState& state, bool force = true);

// Reads and validates against the expected grid shape.
PlateState read_snapshot(const std::string& path, const Grid& g);

}  // namespace vkd
