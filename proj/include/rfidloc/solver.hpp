#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfidloc/method.hpp"
#include "rfidloc/phase_model.hpp"

namespace rfidloc {

/// Closed interval on one axis. `min == max` pins the axis to that value.
struct AxisRange {
  double min = 0.0;
  double max = 0.0;
  bool fixed() const { return min == max; }
  friend bool operator==(const AxisRange&, const AxisRange&) = default;
};

/// Axis-aligned box (or plane, or line) of candidate cells. Cell i on an
/// included axis is centered at min + (i + 0.5) * resolution; the last cell
/// may overhang max by less than one resolution step.
class SearchRegion {
 public:
  static constexpr std::size_t kDefaultCellCap = 10'000'000;

  /// Throws DataError for inverted/non-finite ranges, non-positive
  /// resolutions on included axes, or more than `cell_cap` cells.
  SearchRegion(std::array<AxisRange, 3> axes, std::array<double, 3> resolution,
               std::size_t cell_cap = kDefaultCellCap);

  /// Rack-plane search at fixed x.
  static SearchRegion plane_yz(double x, AxisRange y, AxisRange z, double resolution);

  const std::array<AxisRange, 3>& axes() const { return axes_; }
  const std::array<double, 3>& resolution() const { return resolution_; }
  const std::array<std::size_t, 3>& dims() const { return dims_; }
  std::size_t cell_count() const { return dims_[0] * dims_[1] * dims_[2]; }

  /// Linear index is (ix * ny + iy) * nz + iz.
  std::array<std::size_t, 3> unravel(std::size_t index) const;
  std::size_t ravel(const std::array<std::size_t, 3>& ijk) const;
  Position3D cell_center(std::size_t index) const;

  friend bool operator==(const SearchRegion&, const SearchRegion&) = default;

 private:
  std::array<AxisRange, 3> axes_;
  std::array<double, 3> resolution_;
  std::array<std::size_t, 3> dims_{};
};

struct Hologram {
  SearchRegion region;
  std::vector<double> scores;  // min-max normalized, one per cell
  double raw_min = 0.0;
  double raw_max = 0.0;
  std::string tag_id;
  std::string method;
};

struct AxisErrors {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double combined_yz = 0.0;
};

struct TagEstimate {
  std::string tag_id;
  Position3D position;
  std::size_t cell_index = 0;
  std::optional<AxisErrors> errors;
  std::string method;
  /// Peak score over the next-highest local maximum; 1 for tied peaks,
  /// +inf when the peak is the only local maximum above zero.
  double peak_ratio = 0.0;
};

struct Peak {
  std::size_t index = 0;
  Position3D position;
  double score = 0.0;
};

/// Scores every cell center with `method` and normalizes to [0,1].
/// `threads == 0` uses the hardware concurrency. Deterministic regardless of
/// thread count.
Hologram evaluate_hologram(std::span<const PhaseSample> samples, const SearchRegion& region,
                           const Method& method, unsigned threads = 0);

/// Scores several methods over one grid, sharing the distance computation.
std::vector<Hologram> evaluate_holograms(std::span<const PhaseSample> samples, const SearchRegion& region,
                                         std::span<const Method> methods, unsigned threads = 0);

AxisErrors axis_errors(const Position3D& estimate, const Position3D& truth);

/// Center of the highest cell; ties go to the lowest linear index.
TagEstimate argmax_estimate(const Hologram& holo, const std::optional<Position3D>& truth = std::nullopt);

/// Local maxima (score >= every neighbor, including diagonals) with score at
/// least `threshold`, greedily suppressed within `min_separation` meters of a
/// higher peak. Sorted by descending score, then index.
std::vector<Peak> find_peaks(const Hologram& holo, double threshold, double min_separation);

struct RefineResult {
  Position3D position;
  bool refined = false;  // false: peak not unique, coarse center returned
};

/// Rescans the 3x3 coarse-cell neighborhood of the peak at a tenth of the
/// coarse resolution and returns the fine argmax.
RefineResult refine_local(const Hologram& holo, std::span<const PhaseSample> samples, const Method& method);

}  // namespace rfidloc
