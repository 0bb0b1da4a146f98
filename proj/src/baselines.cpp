#include "rfidloc/baselines.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "rfidloc/errors.hpp"

namespace rfidloc {

void BaselineSpec::validate() const {
  if (!(tagoram_sigma > 0.0) || !std::isfinite(tagoram_sigma)) {
    throw SpecError("tagoram sigma must be positive");
  }
}

std::string BaselineSpec::label() const {
  return kind == BaselineKind::SARFID ? "sarfid" : "tagoram";
}

double tagoram_weight(double residual, double sigma) {
  // 2 (1 - Phi(x)) == erfc(x / sqrt 2)
  return std::erfc(std::abs(wrap_pm_pi(residual)) / (sigma * std::numbers::sqrt2));
}

double sarfid_from_distances(std::span<const PhaseSample> samples, std::span<const double> distances,
                             double wavelength) {
  const double slope = 2.0 * kTwoPi / wavelength;
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double a = samples[n].phase_wrapped - slope * distances[n];
    re += std::cos(a);
    im += std::sin(a);
  }
  return std::hypot(re, im) / static_cast<double>(samples.size());
}

double tagoram_from_distances(std::span<const PhaseSample> samples, std::span<const double> distances,
                              double wavelength, const BaselineSpec& spec) {
  const double slope = 2.0 * kTwoPi / wavelength;
  const std::size_t r = spec.reference_index;
  double total = 0.0;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    if (n == r) continue;
    const double res = (samples[n].phase_wrapped - samples[r].phase_wrapped) - slope * (distances[n] - distances[r]);
    total += tagoram_weight(res, spec.tagoram_sigma) * std::cos(res);
  }
  return total;
}

double sarfid_score(std::span<const PhaseSample> samples, const Position3D& candidate, double wavelength) {
  if (samples.empty()) throw DataError("at least one sample is required");
  std::vector<double> d(samples.size());
  for (std::size_t n = 0; n < samples.size(); ++n) d[n] = distance(samples[n].antenna_pose, candidate);
  return sarfid_from_distances(samples, d, wavelength);
}

double tagoram_score(std::span<const PhaseSample> samples, const Position3D& candidate, double wavelength,
                     const BaselineSpec& spec) {
  spec.validate();
  check_sample_set(samples, Reference{spec.reference_index});
  std::vector<double> d(samples.size());
  for (std::size_t n = 0; n < samples.size(); ++n) d[n] = distance(samples[n].antenna_pose, candidate);
  return tagoram_from_distances(samples, d, wavelength, spec);
}

}  // namespace rfidloc
