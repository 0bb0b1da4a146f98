#include "rfidloc/likelihood.hpp"

#include <cmath>

#include "rfidloc/errors.hpp"

namespace rfidloc {

namespace {

double variant_term(Variant v, double r) {
  switch (v) {
    case Variant::CLF:
      return std::cos(r);
    case Variant::SLF: {
      const double s = std::sin(r);
      return -s * s;
    }
    case Variant::NLF:
      break;
  }
  throw InvariantError("variant_term called for NLF");
}

double variant_weight(Variant v, double term) {
  // both weights are functions of the term itself
  return v == Variant::CLF ? std::abs(term) : std::exp(term);
}

double pair_score(const LikelihoodSpec& spec, double dphi, double ddist, double wavelength) {
  const double slope = 2.0 * kTwoPi / wavelength;
  if (spec.variant() == Variant::NLF) {
    const double e = dphi - delta_phi_d_mod(ddist, wavelength, spec.nlf_branch(), dphi);
    return -e * e;
  }
  const double term = variant_term(spec.variant(), dphi - slope * ddist);
  return spec.weighted() ? variant_weight(spec.variant(), term) * term : term;
}

}  // namespace

LikelihoodSpec::LikelihoodSpec(Variant variant, DifferentialScheme scheme, bool weighted, Branch nlf_branch)
    : variant_(variant), scheme_(scheme), weighted_(weighted), nlf_branch_(nlf_branch) {
  if (weighted && variant == Variant::NLF) {
    throw SpecError("weights are defined only for CLF and SLF");
  }
}

std::string LikelihoodSpec::label() const {
  std::string out = weighted_ ? "w" : "";
  switch (variant_) {
    case Variant::NLF: out += "nlf"; break;
    case Variant::CLF: out += "clf"; break;
    case Variant::SLF: out += "slf"; break;
  }
  if (std::holds_alternative<Misaligned>(scheme_)) {
    out += "/misaligned";
  } else {
    out += "/reference:" + std::to_string(std::get<Reference>(scheme_).index);
  }
  return out;
}

void check_sample_set(std::span<const PhaseSample> samples, const DifferentialScheme& scheme) {
  if (samples.size() < 2) throw DataError("at least two samples are required");
  for (const auto& s : samples) {
    if (!(s.carrier == samples.front().carrier)) throw DataError("samples do not share a carrier");
  }
  if (const auto* ref = std::get_if<Reference>(&scheme); ref && ref->index >= samples.size()) {
    throw DataError("reference index " + std::to_string(ref->index) + " out of range for " +
                    std::to_string(samples.size()) + " samples");
  }
}

std::vector<DifferentialPair> build_differentials(std::span<const PhaseSample> samples,
                                                  const Position3D& candidate,
                                                  const DifferentialScheme& scheme) {
  check_sample_set(samples, scheme);
  std::vector<DifferentialPair> pairs;
  pairs.reserve(samples.size() - 1);
  auto make = [&](std::size_t n, std::size_t r) {
    pairs.push_back({samples[n].phase_wrapped - samples[r].phase_wrapped,
                     distance(samples[n].antenna_pose, candidate) - distance(samples[r].antenna_pose, candidate),
                     n, r});
  };
  if (const auto* ref = std::get_if<Reference>(&scheme)) {
    for (std::size_t n = 0; n < samples.size(); ++n) {
      if (n != ref->index) make(n, ref->index);
    }
  } else {
    for (std::size_t n = 1; n < samples.size(); ++n) make(n, n - 1);
  }
  return pairs;
}

std::optional<double> delta_phi_d_unwrap(double ddist, double dphi_measured, double wavelength) {
  const double base = 2.0 * kTwoPi / wavelength * ddist;
  if (!(std::abs(base) < kTwoPi)) return std::nullopt;
  if (ddist < 0.0 && dphi_measured > 0.0) return base + kTwoPi;
  if (ddist > 0.0 && dphi_measured < 0.0) return base - kTwoPi;
  return base;
}

double delta_phi_d_mod(double ddist, double wavelength, Branch branch, double dphi_measured) {
  const double nonneg = wrap_2pi(2.0 * kTwoPi / wavelength * ddist);
  switch (branch) {
    case Branch::NonNegative:
      return nonneg;
    case Branch::Negative:
      return nonneg - kTwoPi;
    case Branch::NearestToMeasured: {
      const double neg = nonneg - kTwoPi;
      return std::abs(dphi_measured - neg) < std::abs(dphi_measured - nonneg) ? neg : nonneg;
    }
  }
  throw InvariantError("unknown branch");
}

double residual(const DifferentialPair& pair, double wavelength) {
  return pair.dphi_measured - 2.0 * kTwoPi / wavelength * pair.ddist;
}

double nlf_term(const DifferentialPair& pair, double wavelength, Branch branch) {
  const double e = pair.dphi_measured - delta_phi_d_mod(pair.ddist, wavelength, branch, pair.dphi_measured);
  return -e * e;
}

double clf_term(const DifferentialPair& pair, double wavelength) {
  return std::cos(residual(pair, wavelength));
}

double slf_term(const DifferentialPair& pair, double wavelength) {
  const double s = std::sin(residual(pair, wavelength));
  return -s * s;
}

double weight(const DifferentialPair& pair, double wavelength, Variant variant) {
  if (variant == Variant::NLF) throw SpecError("weights are defined only for CLF and SLF");
  return variant_weight(variant, variant_term(variant, residual(pair, wavelength)));
}

double objective_from_distances(std::span<const PhaseSample> samples, std::span<const double> distances,
                                const LikelihoodSpec& spec, double wavelength) {
  double total = 0.0;
  if (const auto* ref = std::get_if<Reference>(&spec.scheme())) {
    const std::size_t r = ref->index;
    for (std::size_t n = 0; n < samples.size(); ++n) {
      if (n == r) continue;
      total += pair_score(spec, samples[n].phase_wrapped - samples[r].phase_wrapped,
                          distances[n] - distances[r], wavelength);
    }
  } else {
    for (std::size_t n = 1; n < samples.size(); ++n) {
      total += pair_score(spec, samples[n].phase_wrapped - samples[n - 1].phase_wrapped,
                          distances[n] - distances[n - 1], wavelength);
    }
  }
  return total;
}

double objective(std::span<const PhaseSample> samples, const Position3D& candidate,
                 const LikelihoodSpec& spec, double wavelength) {
  check_sample_set(samples, spec.scheme());
  std::vector<double> d(samples.size());
  for (std::size_t n = 0; n < samples.size(); ++n) d[n] = distance(samples[n].antenna_pose, candidate);
  return objective_from_distances(samples, d, spec, wavelength);
}

}  // namespace rfidloc
