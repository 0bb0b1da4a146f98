#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

namespace rfidloc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, exact SI

/// Cartesian position in meters. X is normal to the rack plane, Y runs along
/// the antenna track and Z is altitude.
struct Position3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  friend Position3D operator+(Position3D a, Position3D b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Position3D operator-(Position3D a, Position3D b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Position3D operator*(double s, Position3D a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Position3D&, const Position3D&) = default;
};

/// Carrier frequency and its free-space wavelength.
class CarrierConfig {
 public:
  /// Throws SpecError unless frequency_hz is finite and positive.
  explicit CarrierConfig(double frequency_hz);

  double frequency() const { return frequency_; }
  double wavelength() const { return wavelength_; }
  /// Round-trip phase slope 4*pi/lambda in rad/m.
  double phase_slope() const { return 2.0 * kTwoPi / wavelength_; }

  friend bool operator==(const CarrierConfig&, const CarrierConfig&) = default;

 private:
  double frequency_;
  double wavelength_;
};

/// One tag read at one antenna pose.
struct PhaseSample {
  Position3D antenna_pose;
  CarrierConfig carrier{866.9e6};
  double phase_wrapped = 0.0;  // [0, 2pi)
  std::size_t sample_index = 0;
  std::string tag_id;
  std::optional<double> sigma_hint;
};

double distance(const Position3D& ant, const Position3D& tag);

/// Maps any finite angle into [0, 2pi). Never returns 2pi.
double wrap_2pi(double angle);

/// Maps any finite angle into (-pi, pi].
double wrap_pm_pi(double angle);

/// Wrapped backscatter phase 4*pi*d/lambda + phi0.
double predict_phase(const Position3D& ant, const Position3D& tag, const CarrierConfig& carrier,
                     double phi0);

}  // namespace rfidloc
