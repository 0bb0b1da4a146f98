#include "rfidloc/method.hpp"

#include <charconv>
#include <vector>

#include "rfidloc/errors.hpp"

namespace rfidloc {

Method::Method(BaselineSpec spec) : impl_(spec) { spec.validate(); }

DifferentialScheme parse_scheme(std::string_view text) {
  if (text == "misaligned") return Misaligned{};
  if (text == "reference") return Reference{0};
  constexpr std::string_view prefix = "reference:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) return Reference{index};
  }
  throw SpecError("unknown differential scheme '" + std::string(text) + "'");
}

Method Method::parse(std::string_view name, std::string_view scheme_text) {
  if (name == "sarfid") return Method(BaselineSpec{BaselineKind::SARFID});
  const DifferentialScheme scheme = parse_scheme(scheme_text);
  if (name == "tagoram") {
    const auto* ref = std::get_if<Reference>(&scheme);
    if (!ref) throw SpecError("tagoram uses reference differencing only");
    BaselineSpec spec{BaselineKind::Tagoram};
    spec.reference_index = ref->index;
    return Method(spec);
  }
  const bool weighted = name.starts_with("w");
  const auto base = weighted ? name.substr(1) : name;
  Variant v;
  if (base == "nlf") {
    v = Variant::NLF;
  } else if (base == "clf") {
    v = Variant::CLF;
  } else if (base == "slf") {
    v = Variant::SLF;
  } else {
    throw SpecError("unknown method '" + std::string(name) + "'");
  }
  return Method(LikelihoodSpec(v, scheme, weighted));
}

std::string Method::label() const {
  if (const auto* l = likelihood()) return l->label();
  const auto& b = std::get<BaselineSpec>(impl_);
  if (b.kind == BaselineKind::Tagoram) return b.label() + "/reference:" + std::to_string(b.reference_index);
  return b.label();
}

void Method::check(std::span<const PhaseSample> samples) const {
  if (const auto* l = likelihood()) {
    check_sample_set(samples, l->scheme());
    return;
  }
  const auto& b = std::get<BaselineSpec>(impl_);
  if (b.kind == BaselineKind::Tagoram) {
    check_sample_set(samples, Reference{b.reference_index});
  } else {
    if (samples.empty()) throw DataError("at least one sample is required");
    for (const auto& s : samples) {
      if (!(s.carrier == samples.front().carrier)) throw DataError("samples do not share a carrier");
    }
  }
}

double Method::score_from_distances(std::span<const PhaseSample> samples, std::span<const double> distances,
                                    double wavelength) const {
  if (const auto* l = likelihood()) return objective_from_distances(samples, distances, *l, wavelength);
  const auto& b = std::get<BaselineSpec>(impl_);
  return b.kind == BaselineKind::SARFID ? sarfid_from_distances(samples, distances, wavelength)
                                        : tagoram_from_distances(samples, distances, wavelength, b);
}

double Method::score(std::span<const PhaseSample> samples, const Position3D& candidate, double wavelength) const {
  check(samples);
  std::vector<double> d(samples.size());
  for (std::size_t n = 0; n < samples.size(); ++n) d[n] = distance(samples[n].antenna_pose, candidate);
  return score_from_distances(samples, d, wavelength);
}

}  // namespace rfidloc
