#include "rfidloc/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <string_view>

#include "rfidloc/errors.hpp"

namespace rfidloc {

Trajectory::Trajectory(std::vector<Position3D> poses) : poses_(std::move(poses)) {
  if (poses_.size() < 2) throw DataError("trajectory needs at least two poses");
  for (std::size_t i = 0; i < poses_.size(); ++i) {
    if (!poses_[i].finite()) throw DataError("trajectory pose " + std::to_string(i) + " is not finite");
  }
}

Trajectory Trajectory::linear(Position3D start, Position3D step, std::size_t count) {
  std::vector<Position3D> poses;
  poses.reserve(count);
  for (std::size_t i = 0; i < count; ++i) poses.push_back(start + static_cast<double>(i) * step);
  return Trajectory(std::move(poses));
}

double Trajectory::spacing() const {
  double total = 0.0;
  for (std::size_t i = 1; i < poses_.size(); ++i) total += distance(poses_[i - 1], poses_[i]);
  return total / static_cast<double>(poses_.size() - 1);
}

InterferenceSchedule InterferenceSchedule::evenly_spaced(std::size_t count, double fraction,
                                                         double bias_rad) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw DataError("interference fraction must be in [0,1]");
  InterferenceSchedule s;
  s.bias.assign(count, 0.0);
  for (std::size_t n = 0; n < count; ++n) {
    const auto hits_before = std::floor(static_cast<double>(n) * fraction);
    const auto hits_after = std::floor(static_cast<double>(n + 1) * fraction);
    if (hits_after > hits_before) s.bias[n] = bias_rad;
  }
  return s;
}

void Scenario::validate() const {
  if (tags.empty()) throw DataError("scenario has no tags");
  for (const auto& t : tags) {
    if (!t.position.finite() || !std::isfinite(t.phi0)) {
      throw DataError("tag '" + t.tag_id + "' has non-finite position or phi0");
    }
  }
  for (std::size_t i = 0; i < tags.size(); ++i) {
    for (std::size_t j = i + 1; j < tags.size(); ++j) {
      if (tags[i].tag_id == tags[j].tag_id) throw DataError("duplicate tag id '" + tags[i].tag_id + "'");
    }
  }
  if (!(jumps.probability >= 0.0 && jumps.probability <= 1.0)) {
    throw DataError("jump probability must be in [0,1]");
  }
  if (!(jumps.guard_band >= 0.0 && jumps.guard_band < std::numbers::pi)) {
    throw DataError("jump guard band must be in [0,pi)");
  }
  if (!(jumps.mirror_ratio >= 0.0 && jumps.mirror_ratio <= 1.0)) {
    throw DataError("jump mirror ratio must be in [0,1]");
  }
  for (double b : interference.bias) {
    if (!std::isfinite(b)) throw DataError("interference bias must be finite");
  }
  if (noise.constant_sigma) {
    if (!(*noise.constant_sigma >= 0.0)) throw DataError("constant sigma must be >= 0");
    return;
  }
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (const auto& t : tags) {
    for (const auto& p : trajectory.poses()) {
      const double d = distance(p, t.position);
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
  }
  if (!(noise.sigma(dmin) >= 0.0 && noise.sigma(dmax) >= 0.0)) {
    throw DataError("noise model yields negative sigma over the scenario's distance range");
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
  // splitmix64 finalizer over a mixed state
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (key + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view key) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return derive_seed(base, h);
}

PhaseSample inject_jump(const PhaseSample& sample, const JumpInjection& config, std::mt19937_64& rng) {
  const double phase = sample.phase_wrapped;
  const double to_upper = kTwoPi - phase;
  const bool near_zero = phase < config.guard_band;
  const bool near_two_pi = to_upper <= config.guard_band;
  if (!near_zero && !near_two_pi) return sample;
  if (config.probability <= 0.0) return sample;
  std::bernoulli_distribution jump(std::min(config.probability, 1.0));
  if (!jump(rng)) return sample;

  PhaseSample out = sample;
  if (near_two_pi) {
    out.phase_wrapped = wrap_2pi(config.mirror_ratio * to_upper);
  } else {
    out.phase_wrapped = wrap_2pi(kTwoPi - config.mirror_ratio * phase);
  }
  return out;
}

std::vector<TagSamples> synthesize(const Scenario& scenario) {
  scenario.validate();
  const auto& poses = scenario.trajectory.poses();
  const double slope = scenario.carrier.phase_slope();

  std::vector<TagSamples> out;
  out.reserve(scenario.tags.size());
  for (const auto& tag : scenario.tags) {
    std::mt19937_64 rng(derive_seed(scenario.rng_seed, tag.tag_id));
    std::normal_distribution<double> unit_normal(0.0, 1.0);

    TagSamples ts{tag.tag_id, {}};
    ts.samples.reserve(poses.size());
    for (std::size_t n = 0; n < poses.size(); ++n) {
      const double d = distance(poses[n], tag.position);
      const double sigma = scenario.noise.sigma(d);
      const double eps = sigma * unit_normal(rng);
      PhaseSample s{poses[n], scenario.carrier, 0.0, n, tag.tag_id, sigma};
      s.phase_wrapped = wrap_2pi(slope * d + tag.phi0 + eps + scenario.interference.at(n));
      ts.samples.push_back(inject_jump(s, scenario.jumps, rng));
    }
    out.push_back(std::move(ts));
  }
  return out;
}

Scenario default_scenario(std::size_t tag_count) {
  Scenario s;
  s.trajectory = Trajectory::linear({0.0, 0.0, 1.0}, {0.0, 0.01, 0.0}, 100);
  const std::size_t per_level = (tag_count + 1) / 2;
  // tag coordinates sit on 1 cm cell centers of the default search grid
  const double levels[2] = {0.305, 0.655};
  for (std::size_t i = 0; i < tag_count; ++i) {
    const std::size_t level = i / per_level;
    const std::size_t slot = i % per_level;
    const double y = per_level > 1 ? 0.125 + 0.01 * std::round(76.0 * static_cast<double>(slot) /
                                                                static_cast<double>(per_level - 1))
                                   : 0.505;
    // golden-ratio sequence keeps phi0 spread over the circle without an RNG
    const double phi0 = wrap_2pi(kTwoPi * 0.6180339887498949 * static_cast<double>(i + 1));
    s.tags.push_back({fmt::format("T{:02}", i + 1), {1.4, y, levels[level]}, phi0});
  }
  return s;
}

}  // namespace rfidloc
