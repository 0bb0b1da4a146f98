#include "rfidloc/phase_model.hpp"

#include "rfidloc/errors.hpp"

namespace rfidloc {

CarrierConfig::CarrierConfig(double frequency_hz) : frequency_(frequency_hz) {
  if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0) {
    throw SpecError("carrier frequency must be finite and positive");
  }
  wavelength_ = kSpeedOfLight / frequency_hz;
}

double distance(const Position3D& ant, const Position3D& tag) {
  return std::hypot(ant.x - tag.x, ant.y - tag.y, ant.z - tag.z);
}

double wrap_2pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod is exact, but the shift above can round up to 2pi for tiny negatives.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_pm_pi(double angle) {
  double r = wrap_2pi(angle);
  if (r > std::numbers::pi) r -= kTwoPi;
  return r;
}

double predict_phase(const Position3D& ant, const Position3D& tag, const CarrierConfig& carrier,
                     double phi0) {
  return wrap_2pi(carrier.phase_slope() * distance(ant, tag) + phi0);
}

}  // namespace rfidloc
