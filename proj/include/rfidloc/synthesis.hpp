#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rfidloc/phase_model.hpp"

namespace rfidloc {

/// Ordered antenna sampling positions along the track.
class Trajectory {
 public:
  /// Throws DataError for fewer than two poses or non-finite coordinates.
  explicit Trajectory(std::vector<Position3D> poses);

  /// `count` evenly spaced poses from `start` stepping by `step`.
  static Trajectory linear(Position3D start, Position3D step, std::size_t count);

  const std::vector<Position3D>& poses() const { return poses_; }
  std::size_t size() const { return poses_.size(); }
  /// Mean distance between consecutive poses.
  double spacing() const;

 private:
  std::vector<Position3D> poses_;
};

/// Phase noise standard deviation sigma(d) = slope * d + intercept, or a
/// constant when the override is set.
struct NoiseModel {
  double sigma_slope = 0.006;       // rad/m
  double sigma_intercept = 0.0084;  // rad
  std::optional<double> constant_sigma;

  double sigma(double d) const {
    return constant_sigma ? *constant_sigma : sigma_slope * d + sigma_intercept;
  }
};

/// Boundary phase-jump injection. A read within `guard_band` of 0 or 2pi is
/// flipped to the other side of the boundary with the given probability,
/// landing at `mirror_ratio` times its original distance from the boundary.
struct JumpInjection {
  double probability = 0.0;
  double guard_band = 0.1 * std::numbers::pi;
  double mirror_ratio = 0.6;
};

/// Deterministic additive phase bias per pose index, standing in for
/// multipath contamination. Empty means no interference.
struct InterferenceSchedule {
  std::vector<double> bias;  // rad, indexed by pose; shorter schedules leave the rest unbiased

  /// Biases `fraction` of `count` poses by `bias_rad`, spread evenly
  /// (pose n is hit when floor((n+1)f) > floor(n f)).
  static InterferenceSchedule evenly_spaced(std::size_t count, double fraction, double bias_rad);

  double at(std::size_t n) const { return n < bias.size() ? bias[n] : 0.0; }
};

struct TagTruth {
  std::string tag_id;
  Position3D position;
  double phi0 = 0.0;
};

struct Scenario {
  std::vector<TagTruth> tags;
  Trajectory trajectory{{Position3D{}, Position3D{0.0, 0.01, 0.0}}};
  CarrierConfig carrier{866.9e6};
  NoiseModel noise;
  JumpInjection jumps;
  InterferenceSchedule interference;
  std::uint64_t rng_seed = 0;

  /// Throws DataError describing the first violated invariant.
  void validate() const;
};

struct TagSamples {
  std::string tag_id;
  std::vector<PhaseSample> samples;
};

/// Wrapped noisy reads for every tag at every pose, in tag order.
std::vector<TagSamples> synthesize(const Scenario& scenario);

/// Applies `config` to one sample using `rng`. Samples outside the guard band
/// are returned unchanged and consume no randomness.
PhaseSample inject_jump(const PhaseSample& sample, const JumpInjection& config, std::mt19937_64& rng);

/// Stable 64-bit seed derived from a base seed and a key (FNV-1a + splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key);

/// Reference scenario: 1.4 m standoff, 866.9 MHz, 100 poses at 1 cm spacing
/// along Y at altitude 1.0 m, and `tag_count` tags spread over two rack levels
/// below the track.
Scenario default_scenario(std::size_t tag_count = 14);

}  // namespace rfidloc
