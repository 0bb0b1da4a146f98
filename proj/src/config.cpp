#include "rfidloc/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "rfidloc/errors.hpp"

namespace rfidloc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

class LineError {
 public:
  explicit LineError(std::size_t line) : line_(line) {}
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("config line " + std::to_string(line_) + ": " + what);
  }

 private:
  std::size_t line_;
};

std::vector<double> numbers(std::string_view value, std::size_t expected_min, std::size_t expected_max,
                            const LineError& err) {
  std::vector<double> out;
  for (auto part : split(value, ',')) {
    const auto v = parse_double(part);
    if (!v || !std::isfinite(*v)) err.fail("'" + std::string(part) + "' is not a finite number");
    out.push_back(*v);
  }
  if (out.size() < expected_min || out.size() > expected_max) {
    err.fail("expected " + std::to_string(expected_min) +
             (expected_max != expected_min ? "-" + std::to_string(expected_max) : "") + " values, got " +
             std::to_string(out.size()));
  }
  return out;
}

double number(std::string_view value, const LineError& err) { return numbers(value, 1, 1, err)[0]; }

std::uint64_t integer(std::string_view value, const LineError& err) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
    err.fail("'" + std::string(value) + "' is not a non-negative integer");
  }
  return v;
}

bool boolean(std::string_view value, const LineError& err) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  err.fail("'" + std::string(value) + "' is not a boolean");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw InvariantError("to_chars failed");
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

RunConfig default_config(std::size_t tag_count) {
  RunConfig cfg;
  cfg.scenario = default_scenario(tag_count);
  return cfg;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg = default_config();
  cfg.scenario.tags.clear();

  Position3D start{0.0, 0.0, 1.0};
  Position3D step{0.0, 0.01, 0.0};
  std::uint64_t count = 100;
  std::array<AxisRange, 3> axes = cfg.region.axes();
  double resolution = 0.01;
  std::size_t cell_cap = SearchRegion::kDefaultCellCap;
  std::map<std::string, std::size_t> seen;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const LineError err(line_no);
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) err.fail("expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) err.fail("empty key");
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      err.fail("duplicate key '" + key + "' (first on line " + std::to_string(it->second) + ")");
    }

    if (key == "seed") {
      cfg.scenario.rng_seed = integer(value, err);
    } else if (key == "carrier.frequency_hz") {
      try {
        cfg.scenario.carrier = CarrierConfig(number(value, err));
      } catch (const SpecError& e) {
        err.fail(e.what());
      }
    } else if (key == "trajectory.start" || key == "trajectory.step") {
      const auto v = numbers(value, 3, 3, err);
      (key == "trajectory.start" ? start : step) = {v[0], v[1], v[2]};
    } else if (key == "trajectory.count") {
      count = integer(value, err);
      if (count < 2) err.fail("trajectory.count must be >= 2");
    } else if (key == "noise.sigma_slope") {
      cfg.scenario.noise.sigma_slope = number(value, err);
    } else if (key == "noise.sigma_intercept") {
      cfg.scenario.noise.sigma_intercept = number(value, err);
    } else if (key == "noise.constant_sigma") {
      cfg.scenario.noise.constant_sigma = number(value, err);
    } else if (key == "jumps.probability") {
      cfg.scenario.jumps.probability = number(value, err);
    } else if (key == "jumps.guard_band") {
      cfg.scenario.jumps.guard_band = number(value, err);
    } else if (key == "jumps.mirror_ratio") {
      cfg.scenario.jumps.mirror_ratio = number(value, err);
    } else if (key == "interference.bias") {
      cfg.interference_bias = number(value, err);
    } else if (key == "interference.fraction") {
      cfg.interference_fraction = number(value, err);
    } else if (key.starts_with("tag.")) {
      const std::string id = key.substr(4);
      if (id.empty() || id.find(',') != std::string::npos) err.fail("invalid tag id");
      const auto v = numbers(value, 4, 4, err);
      cfg.scenario.tags.push_back({id, {v[0], v[1], v[2]}, v[3]});
    } else if (key == "tags.random_phi0") {
      cfg.random_phi0 = boolean(value, err);
    } else if (key == "search.x" || key == "search.y" || key == "search.z") {
      const auto v = numbers(value, 1, 2, err);
      axes[key.back() - 'x'] = v.size() == 1 ? AxisRange{v[0], v[0]} : AxisRange{v[0], v[1]};
    } else if (key == "search.resolution") {
      resolution = number(value, err);
    } else if (key == "search.cell_cap") {
      cell_cap = integer(value, err);
    } else if (key == "baseline.tagoram_sigma") {
      cfg.tagoram_sigma = number(value, err);
    } else {
      err.fail("unknown key '" + key + "'");
    }
  }

  cfg.scenario.trajectory = Trajectory::linear(start, step, count);
  if (cfg.interference_bias) {
    cfg.scenario.interference =
        InterferenceSchedule::evenly_spaced(count, cfg.interference_fraction, *cfg.interference_bias);
  } else if (cfg.interference_fraction != 0.0) {
    throw DataError("interference.fraction given without interference.bias");
  }
  cfg.region = SearchRegion(axes, {resolution, resolution, resolution}, cell_cap);
  cfg.scenario.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  return parse_config(in);
}

std::string format_config(const RunConfig& cfg) {
  const auto& s = cfg.scenario;
  std::ostringstream o;
  auto vec = [](const Position3D& p) {
    return format_double(p.x) + ", " + format_double(p.y) + ", " + format_double(p.z);
  };
  const auto& poses = s.trajectory.poses();
  o << "seed = " << s.rng_seed << '\n';
  o << "carrier.frequency_hz = " << format_double(s.carrier.frequency()) << '\n';
  o << "trajectory.start = " << vec(poses.front()) << '\n';
  o << "trajectory.step = " << vec(poses[1] - poses[0]) << '\n';
  o << "trajectory.count = " << poses.size() << '\n';
  o << "noise.sigma_slope = " << format_double(s.noise.sigma_slope) << '\n';
  o << "noise.sigma_intercept = " << format_double(s.noise.sigma_intercept) << '\n';
  if (s.noise.constant_sigma) o << "noise.constant_sigma = " << format_double(*s.noise.constant_sigma) << '\n';
  o << "jumps.probability = " << format_double(s.jumps.probability) << '\n';
  o << "jumps.guard_band = " << format_double(s.jumps.guard_band) << '\n';
  o << "jumps.mirror_ratio = " << format_double(s.jumps.mirror_ratio) << '\n';
  if (cfg.interference_bias) {
    o << "interference.bias = " << format_double(*cfg.interference_bias) << '\n';
    o << "interference.fraction = " << format_double(cfg.interference_fraction) << '\n';
  }
  for (const auto& t : s.tags) {
    o << "tag." << t.tag_id << " = " << vec(t.position) << ", " << format_double(t.phi0) << '\n';
  }
  o << "tags.random_phi0 = " << (cfg.random_phi0 ? "true" : "false") << '\n';
  const char* names[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    const auto& r = cfg.region.axes()[a];
    o << "search." << names[a] << " = " << format_double(r.min);
    if (!r.fixed()) o << ", " << format_double(r.max);
    o << '\n';
  }
  o << "search.resolution = " << format_double(cfg.region.resolution()[1]) << '\n';
  if (cfg.tagoram_sigma) o << "baseline.tagoram_sigma = " << format_double(*cfg.tagoram_sigma) << '\n';
  return o.str();
}

SearchRegion parse_region(std::string_view text, const SearchRegion& base, std::optional<double> resolution) {
  auto axes = base.axes();
  auto res = base.resolution();
  if (resolution) res = {*resolution, *resolution, *resolution};
  if (!trim(text).empty()) {
    for (auto part : split(text, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string_view::npos) throw DataError("region part '" + std::string(part) + "' lacks '='");
      const auto axis = trim(part.substr(0, eq));
      if (axis.size() != 1 || axis[0] < 'x' || axis[0] > 'z') {
        throw DataError("region axis must be x, y or z, got '" + std::string(axis) + "'");
      }
      const auto bounds = split(part.substr(eq + 1), ':');
      if (bounds.size() > 2) throw DataError("region bounds must be 'value' or 'min:max'");
      std::vector<double> v;
      for (auto b : bounds) {
        const auto d = parse_double(b);
        if (!d) throw DataError("region bound '" + std::string(b) + "' is not a number");
        v.push_back(*d);
      }
      axes[axis[0] - 'x'] = v.size() == 1 ? AxisRange{v[0], v[0]} : AxisRange{v[0], v[1]};
    }
  }
  return SearchRegion(axes, res);
}

}  // namespace rfidloc
