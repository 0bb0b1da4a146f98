#pragma once

#include <iosfwd>
#include <string>

#include "rfidloc/solver.hpp"

namespace rfidloc {

// Hologram text format:
//
//   # rfidloc hologram v1
//   # tag_id=<id>
//   # method=<label>
//   # axis_x=<min>,<max>,<resolution>     (likewise axis_y, axis_z)
//   # dims=<nx>,<ny>,<nz>
//   # raw_range=<min>,<max>
//   y,z,score                             (included axes only)
//   <one row per cell in linear-index order>
//
// All numbers use the shortest representation that round-trips exactly.

void export_hologram(std::ostream& out, const Hologram& holo);
void export_hologram(const Hologram& holo, const std::string& path);

/// Throws DataError on any structural mismatch.
Hologram parse_hologram(std::istream& in);
Hologram load_hologram(const std::string& path);

}  // namespace rfidloc
