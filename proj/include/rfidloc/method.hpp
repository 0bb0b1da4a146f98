#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "rfidloc/baselines.hpp"
#include "rfidloc/likelihood.hpp"

namespace rfidloc {

/// Anything that scores a candidate position: one of the likelihood variants
/// or a comparison baseline.
class Method {
 public:
  Method(LikelihoodSpec spec) : impl_(spec) {}  // NOLINT(google-explicit-constructor)
  Method(BaselineSpec spec);                   // NOLINT(google-explicit-constructor)

  /// Parses a method name (nlf, clf, slf, wclf, wslf, sarfid, tagoram) and a
  /// scheme (misaligned, reference, reference:<index>). Throws SpecError.
  static Method parse(std::string_view name, std::string_view scheme = "reference:0");

  std::string label() const;
  const LikelihoodSpec* likelihood() const { return std::get_if<LikelihoodSpec>(&impl_); }
  const BaselineSpec* baseline() const { return std::get_if<BaselineSpec>(&impl_); }

  /// Throws DataError if the sample set cannot be scored by this method.
  void check(std::span<const PhaseSample> samples) const;

  /// Score with d[n] precomputed; no validation.
  double score_from_distances(std::span<const PhaseSample> samples, std::span<const double> distances,
                              double wavelength) const;

  double score(std::span<const PhaseSample> samples, const Position3D& candidate, double wavelength) const;

 private:
  std::variant<LikelihoodSpec, BaselineSpec> impl_;
};

DifferentialScheme parse_scheme(std::string_view text);

}  // namespace rfidloc
