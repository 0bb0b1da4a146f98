#include "rfidloc/phase_log.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "rfidloc/config.hpp"
#include "rfidloc/errors.hpp"

namespace rfidloc {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

PhaseUnit parse_phase_unit(std::string_view text) {
  if (text == "radians" || text == "rad") return PhaseUnit::Radians;
  if (text == "ticks") return PhaseUnit::Ticks;
  throw DataError("unknown phase unit '" + std::string(text) + "'");
}

std::string_view to_string(PhaseUnit unit) { return unit == PhaseUnit::Radians ? "radians" : "ticks"; }

std::vector<TagSamples> ingest_log(std::istream& in, const IngestOptions& options) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw DataError("phase log is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const bool with_timestamp = line == std::string(kPhaseLogHeader) + ",timestamp";
  if (line != kPhaseLogHeader && !with_timestamp) {
    throw DataError("phase log line 1: expected header '" + std::string(kPhaseLogHeader) + "'");
  }
  const std::size_t columns = with_timestamp ? 8 : 7;

  std::vector<TagSamples> out;
  std::map<std::string, std::size_t, std::less<>> slot;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) -> DataError {
      return DataError("phase log line " + std::to_string(line_no) + ": " + what);
    };
    const auto f = split_csv(line);
    if (f.size() != columns) {
      throw fail("expected " + std::to_string(columns) + " fields, got " + std::to_string(f.size()));
    }
    if (f[0].empty()) throw fail("empty tag_id");
    double v[5];
    for (int i = 0; i < 5; ++i) {
      const auto d = parse_double(f[i + 1]);
      if (!d || !std::isfinite(*d)) throw fail("field " + std::to_string(i + 2) + " is not a finite number");
      v[i] = *d;
    }
    PhaseUnit unit = options.default_unit;
    if (!f[6].empty()) {
      try {
        unit = parse_phase_unit(f[6]);
      } catch (const DataError& e) {
        throw fail(e.what());
      }
    }
    if (with_timestamp && !f[7].empty() && !parse_double(f[7])) throw fail("timestamp is not a number");

    double phase = unit == PhaseUnit::Ticks ? v[4] * kTickRadians : v[4];
    if (!(phase >= 0.0 && phase < kTwoPi)) {
      if (!options.auto_wrap) throw fail("phase " + format_double(phase) + " rad outside [0, 2pi)");
      phase = wrap_2pi(phase);
    }
    if (options.sign_flip) phase = wrap_2pi(-phase);

    std::optional<CarrierConfig> carrier;
    try {
      carrier.emplace(v[3]);
    } catch (const SpecError& e) {
      throw fail(e.what());
    }

    const std::string tag(f[0]);
    auto [it, inserted] = slot.try_emplace(tag, out.size());
    if (inserted) out.push_back({tag, {}});
    auto& samples = out[it->second].samples;
    samples.push_back({{v[0], v[1], v[2]}, *carrier, phase, samples.size(), tag, options.sigma_default});
  }
  return out;
}

std::vector<TagSamples> ingest_log(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open phase log '" + path + "'");
  return ingest_log(in, options);
}

void write_log(std::ostream& out, const std::vector<TagSamples>& tags, PhaseUnit unit) {
  out << kPhaseLogHeader << '\n';
  for (const auto& t : tags) {
    for (const auto& s : t.samples) {
      const std::string phase = unit == PhaseUnit::Ticks
                                    ? format_double(std::fmod(std::round(s.phase_wrapped / kTickRadians), 4096.0))
                                    : format_double(s.phase_wrapped);
      out << s.tag_id << ',' << format_double(s.antenna_pose.x) << ',' << format_double(s.antenna_pose.y) << ','
          << format_double(s.antenna_pose.z) << ',' << format_double(s.carrier.frequency()) << ',' << phase << ','
          << to_string(unit) << '\n';
    }
  }
}

void write_log(const std::string& path, const std::vector<TagSamples>& tags, PhaseUnit unit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write phase log '" + path + "'");
  write_log(out, tags, unit);
  if (!out) throw DataError("error writing phase log '" + path + "'");
}

}  // namespace rfidloc
