#pragma once

#include <span>

#include "rfidloc/likelihood.hpp"
#include "rfidloc/phase_model.hpp"

namespace rfidloc {

enum class BaselineKind { SARFID, Tagoram };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::SARFID;
  /// Residual scale of the Tagoram weights. Defaults to the linear noise
  /// model at the 1.4 m rack standoff.
  double tagoram_sigma = 0.006 * 1.4 + 0.0084;
  /// Reference sample for the Tagoram differential pairs.
  std::size_t reference_index = 0;

  /// Throws SpecError unless tagoram_sigma > 0.
  void validate() const;
  std::string label() const;

  friend bool operator==(const BaselineSpec&, const BaselineSpec&) = default;
};

/// |sum_n exp(j(phi_m[n] - 4 pi d[n] / lambda))| / N, in [0,1].
double sarfid_score(std::span<const PhaseSample> samples, const Position3D& candidate, double wavelength);

/// sum_n w_n cos(r_n) over reference pairs, w_n = 2 (1 - Phi(|wrap(r_n)| / sigma)).
double tagoram_score(std::span<const PhaseSample> samples, const Position3D& candidate, double wavelength,
                     const BaselineSpec& spec);

/// Tagoram weight for one residual.
double tagoram_weight(double residual, double sigma);

double sarfid_from_distances(std::span<const PhaseSample> samples, std::span<const double> distances,
                             double wavelength);
double tagoram_from_distances(std::span<const PhaseSample> samples, std::span<const double> distances,
                              double wavelength, const BaselineSpec& spec);

}  // namespace rfidloc
