#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfidloc/solver.hpp"
#include "rfidloc/synthesis.hpp"

namespace rfidloc {

/// Everything a scenario config file describes.
///
/// The file format is flat `key = value` lines; `#` starts a comment. Keys
/// use dotted sections:
///
///   seed                       integer
///   carrier.frequency_hz       Hz
///   trajectory.start           x, y, z
///   trajectory.step            x, y, z
///   trajectory.count           integer >= 2
///   noise.sigma_slope          rad/m
///   noise.sigma_intercept      rad
///   noise.constant_sigma       rad (overrides the linear model)
///   jumps.probability          [0,1]
///   jumps.guard_band           rad
///   jumps.mirror_ratio         [0,1]
///   interference.bias          rad
///   interference.fraction      [0,1]
///   tag.<id>                   x, y, z, phi0
///   tags.random_phi0           true|false (bench: redraw phi0 per trial)
///   search.x / .y / .z         value (fixed) or min, max
///   search.resolution          m
///   search.cell_cap            integer
///   baseline.tagoram_sigma     rad
struct RunConfig {
  Scenario scenario;
  SearchRegion region = SearchRegion::plane_yz(1.4, {0.0, 1.0}, {0.0, 1.0}, 0.01);
  bool random_phi0 = false;
  std::optional<double> tagoram_sigma;
  // source of scenario.interference, kept so the config can be re-rendered
  std::optional<double> interference_bias;
  double interference_fraction = 0.0;
};

/// Throws DataError with the offending line number.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Renders `cfg` in the format accepted by parse_config.
std::string format_config(const RunConfig& cfg);

/// Default scenario and rack-plane region.
RunConfig default_config(std::size_t tag_count = 14);

/// Parses "x=1.4,y=0:1,z=0:1"; omitted axes keep their value from `base`.
SearchRegion parse_region(std::string_view text, const SearchRegion& base, std::optional<double> resolution);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
/// Parses a whole string as a double; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);

}  // namespace rfidloc
