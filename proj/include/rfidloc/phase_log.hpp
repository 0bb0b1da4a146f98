#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfidloc/synthesis.hpp"

namespace rfidloc {

enum class PhaseUnit { Radians, Ticks };

inline constexpr double kTickRadians = kTwoPi / 4096.0;
inline constexpr std::string_view kPhaseLogHeader = "tag_id,ant_x,ant_y,ant_z,freq_hz,phase,phase_unit";

/// "radians"/"rad" or "ticks"; throws DataError otherwise.
PhaseUnit parse_phase_unit(std::string_view text);
std::string_view to_string(PhaseUnit unit);

struct IngestOptions {
  /// Conjugate phase convention: phase -> wrap(-phase).
  bool sign_flip = false;
  /// Unit for rows whose phase_unit column is empty.
  PhaseUnit default_unit = PhaseUnit::Radians;
  /// sigma_hint given to every ingested sample.
  std::optional<double> sigma_default;
  /// Wrap out-of-range phases instead of rejecting them.
  bool auto_wrap = false;
};

/// Reads a phase log (header `kPhaseLogHeader`, optionally followed by a
/// `timestamp` column). Samples are grouped by tag in order of first
/// appearance and indexed in record order. Throws DataError naming the line.
std::vector<TagSamples> ingest_log(std::istream& in, const IngestOptions& options = {});
std::vector<TagSamples> ingest_log(const std::string& path, const IngestOptions& options = {});

/// Writes samples in the phase log format. In tick units the phase is rounded
/// to the nearest whole tick.
void write_log(std::ostream& out, const std::vector<TagSamples>& tags, PhaseUnit unit = PhaseUnit::Radians);
void write_log(const std::string& path, const std::vector<TagSamples>& tags, PhaseUnit unit = PhaseUnit::Radians);

}  // namespace rfidloc
