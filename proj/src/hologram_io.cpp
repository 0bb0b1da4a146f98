#include "rfidloc/hologram_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rfidloc/config.hpp"
#include "rfidloc/errors.hpp"

namespace rfidloc {

namespace {

constexpr const char* kMagic = "# rfidloc hologram v1";
constexpr char kAxisNames[3] = {'x', 'y', 'z'};

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto v = parse_double(part);
    if (!v) throw DataError("hologram: bad number '" + part + "' in " + what);
    out.push_back(*v);
  }
  if (out.size() != expected) throw DataError("hologram: " + what + " needs " + std::to_string(expected) + " values");
  return out;
}

std::string header_value(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("hologram: missing '" + key + "' header");
  const std::string prefix = "# " + key + "=";
  if (!line.starts_with(prefix)) throw DataError("hologram: expected '" + prefix + "...', got '" + line + "'");
  return line.substr(prefix.size());
}

}  // namespace

void export_hologram(std::ostream& out, const Hologram& holo) {
  const auto& region = holo.region;
  out << kMagic << '\n';
  out << "# tag_id=" << holo.tag_id << '\n';
  out << "# method=" << holo.method << '\n';
  for (int a = 0; a < 3; ++a) {
    const auto& r = region.axes()[a];
    out << "# axis_" << kAxisNames[a] << '=' << format_double(r.min) << ',' << format_double(r.max) << ','
        << format_double(region.resolution()[a]) << '\n';
  }
  const auto& dims = region.dims();
  out << "# dims=" << dims[0] << ',' << dims[1] << ',' << dims[2] << '\n';
  out << "# raw_range=" << format_double(holo.raw_min) << ',' << format_double(holo.raw_max) << '\n';

  std::string columns;
  for (int a = 0; a < 3; ++a) {
    if (!region.axes()[a].fixed()) columns += std::string(1, kAxisNames[a]) + ',';
  }
  out << columns << "score\n";
  for (std::size_t i = 0; i < holo.scores.size(); ++i) {
    const Position3D c = region.cell_center(i);
    const double coord[3] = {c.x, c.y, c.z};
    for (int a = 0; a < 3; ++a) {
      if (!region.axes()[a].fixed()) out << format_double(coord[a]) << ',';
    }
    out << format_double(holo.scores[i]) << '\n';
  }
}

void export_hologram(const Hologram& holo, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write hologram '" + path + "'");
  export_hologram(out, holo);
  if (!out) throw DataError("error writing hologram '" + path + "'");
}

Hologram parse_hologram(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw DataError("hologram: missing format header");
  const std::string tag_id = header_value(in, "tag_id");
  const std::string method = header_value(in, "method");
  std::array<AxisRange, 3> axes{};
  std::array<double, 3> res{};
  for (int a = 0; a < 3; ++a) {
    const std::string key = std::string("axis_") + kAxisNames[a];
    const auto v = parse_list(header_value(in, key), 3, key);
    axes[a] = {v[0], v[1]};
    res[a] = v[2];
  }
  const auto dims = parse_list(header_value(in, "dims"), 3, "dims");
  const auto range = parse_list(header_value(in, "raw_range"), 2, "raw_range");

  SearchRegion region(axes, res);
  for (int a = 0; a < 3; ++a) {
    if (static_cast<double>(region.dims()[a]) != dims[a]) throw DataError("hologram: dims do not match axes");
  }
  std::size_t included = 0;
  for (const auto& r : axes) included += r.fixed() ? 0 : 1;

  if (!std::getline(in, line)) throw DataError("hologram: missing column header");
  Hologram holo{region, {}, range[0], range[1], tag_id, method};
  holo.scores.reserve(region.cell_count());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto v = parse_list(line, included + 1, "row " + std::to_string(row));
    const Position3D c = region.cell_center(row);
    const double coord[3] = {c.x, c.y, c.z};
    std::size_t k = 0;
    for (int a = 0; a < 3; ++a) {
      if (axes[a].fixed()) continue;
      if (v[k++] != coord[a]) throw DataError("hologram: row " + std::to_string(row) + " is out of grid order");
    }
    holo.scores.push_back(v.back());
    ++row;
  }
  if (holo.scores.size() != region.cell_count()) throw DataError("hologram: row count does not match dims");
  return holo;
}

Hologram load_hologram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open hologram '" + path + "'");
  return parse_hologram(in);
}

}  // namespace rfidloc
