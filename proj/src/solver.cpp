#include "rfidloc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "rfidloc/errors.hpp"

namespace rfidloc {

SearchRegion::SearchRegion(std::array<AxisRange, 3> axes, std::array<double, 3> resolution,
                           std::size_t cell_cap)
    : axes_(axes), resolution_(resolution) {
  double cells = 1.0;
  for (int a = 0; a < 3; ++a) {
    const auto& r = axes_[a];
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max) {
      throw DataError("search region axis " + std::to_string(a) + " is degenerate");
    }
    if (r.fixed()) {
      dims_[a] = 1;
      continue;
    }
    if (!(resolution_[a] > 0.0) || !std::isfinite(resolution_[a])) {
      throw DataError("search region resolution must be positive");
    }
    // tolerate spans that are a whole number of steps up to rounding
    const double steps = (r.max - r.min) / resolution_[a];
    const double n = std::max(1.0, std::ceil(steps - 1e-9));
    cells *= n;
    if (cells > static_cast<double>(cell_cap)) {
      throw DataError("search region exceeds the cell cap of " + std::to_string(cell_cap));
    }
    dims_[a] = static_cast<std::size_t>(n);
  }
}

SearchRegion SearchRegion::plane_yz(double x, AxisRange y, AxisRange z, double resolution) {
  return SearchRegion({AxisRange{x, x}, y, z}, {resolution, resolution, resolution});
}

std::array<std::size_t, 3> SearchRegion::unravel(std::size_t index) const {
  const std::size_t iz = index % dims_[2];
  const std::size_t rest = index / dims_[2];
  return {rest / dims_[1], rest % dims_[1], iz};
}

std::size_t SearchRegion::ravel(const std::array<std::size_t, 3>& ijk) const {
  return (ijk[0] * dims_[1] + ijk[1]) * dims_[2] + ijk[2];
}

Position3D SearchRegion::cell_center(std::size_t index) const {
  const auto ijk = unravel(index);
  double c[3];
  for (int a = 0; a < 3; ++a) {
    c[a] = axes_[a].fixed() ? axes_[a].min
                            : axes_[a].min + (static_cast<double>(ijk[a]) + 0.5) * resolution_[a];
  }
  return {c[0], c[1], c[2]};
}

namespace {

void score_cells(std::span<const PhaseSample> samples, std::span<const Method> methods, double wavelength,
                 const SearchRegion& region, std::vector<std::vector<double>>& out, std::size_t begin,
                 std::size_t end) {
  std::vector<double> d(samples.size());
  for (std::size_t i = begin; i < end; ++i) {
    const Position3D c = region.cell_center(i);
    for (std::size_t n = 0; n < samples.size(); ++n) d[n] = distance(samples[n].antenna_pose, c);
    for (std::size_t m = 0; m < methods.size(); ++m) out[m][i] = methods[m].score_from_distances(samples, d, wavelength);
  }
}

std::vector<std::size_t> neighbors(const SearchRegion& region, std::size_t index) {
  const auto ijk = region.unravel(index);
  const auto& dims = region.dims();
  std::vector<std::size_t> out;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dz = -1; dz <= 1; ++dz) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const long long cand[3] = {static_cast<long long>(ijk[0]) + dx, static_cast<long long>(ijk[1]) + dy,
                                   static_cast<long long>(ijk[2]) + dz};
        bool inside = true;
        for (int a = 0; a < 3; ++a) inside = inside && cand[a] >= 0 && cand[a] < static_cast<long long>(dims[a]);
        if (!inside) continue;
        out.push_back(region.ravel({static_cast<std::size_t>(cand[0]), static_cast<std::size_t>(cand[1]),
                                    static_cast<std::size_t>(cand[2])}));
      }
    }
  }
  return out;
}

bool is_local_max(const Hologram& holo, std::size_t index) {
  const double s = holo.scores[index];
  for (std::size_t nb : neighbors(holo.region, index)) {
    if (holo.scores[nb] > s) return false;
  }
  return true;
}

}  // namespace

std::vector<Hologram> evaluate_holograms(std::span<const PhaseSample> samples, const SearchRegion& region,
                                         std::span<const Method> methods, unsigned threads) {
  for (const auto& m : methods) m.check(samples);
  if (methods.empty()) return {};
  const double wavelength = samples.front().carrier.wavelength();
  const std::size_t cells = region.cell_count();
  std::vector<std::vector<double>> raw(methods.size(), std::vector<double>(cells));

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));
  if (threads <= 1) {
    score_cells(samples, methods, wavelength, region, raw, 0, cells);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (cells + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(cells, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] { score_cells(samples, methods, wavelength, region, raw, begin, end); });
    }
  }

  std::vector<Hologram> out;
  out.reserve(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    Hologram holo{region, std::move(raw[m]), 0.0, 0.0, samples.front().tag_id, methods[m].label()};
    for (double s : holo.scores) {
      if (!std::isfinite(s)) throw InvariantError("non-finite hologram score from " + holo.method);
    }
    const auto [lo, hi] = std::minmax_element(holo.scores.begin(), holo.scores.end());
    holo.raw_min = *lo;
    holo.raw_max = *hi;
    const double range = holo.raw_max - holo.raw_min;
    for (double& s : holo.scores) s = range > 0.0 ? (s - holo.raw_min) / range : 1.0;
    out.push_back(std::move(holo));
  }
  return out;
}

Hologram evaluate_hologram(std::span<const PhaseSample> samples, const SearchRegion& region, const Method& method,
                           unsigned threads) {
  return std::move(evaluate_holograms(samples, region, std::span<const Method>(&method, 1), threads).front());
}

AxisErrors axis_errors(const Position3D& estimate, const Position3D& truth) {
  AxisErrors e{std::abs(estimate.x - truth.x), std::abs(estimate.y - truth.y), std::abs(estimate.z - truth.z), 0.0};
  e.combined_yz = std::hypot(e.y, e.z);
  return e;
}

TagEstimate argmax_estimate(const Hologram& holo, const std::optional<Position3D>& truth) {
  if (holo.scores.size() != holo.region.cell_count() || holo.scores.empty()) {
    throw InvariantError("hologram score count does not match its region");
  }
  // max_element returns the first maximum, i.e. the lowest linear index
  const auto best = static_cast<std::size_t>(
      std::distance(holo.scores.begin(), std::max_element(holo.scores.begin(), holo.scores.end())));

  TagEstimate est;
  est.tag_id = holo.tag_id;
  est.method = holo.method;
  est.cell_index = best;
  est.position = holo.region.cell_center(best);
  if (truth) est.errors = axis_errors(est.position, *truth);

  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < holo.scores.size(); ++i) {
    if (i == best || holo.scores[i] <= second) continue;
    if (is_local_max(holo, i)) second = holo.scores[i];
  }
  est.peak_ratio = second > 0.0 ? holo.scores[best] / second : std::numeric_limits<double>::infinity();
  return est;
}

std::vector<Peak> find_peaks(const Hologram& holo, double threshold, double min_separation) {
  std::vector<Peak> candidates;
  for (std::size_t i = 0; i < holo.scores.size(); ++i) {
    if (holo.scores[i] >= threshold && is_local_max(holo, i)) {
      candidates.push_back({i, holo.region.cell_center(i), holo.scores[i]});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Peak& a, const Peak& b) { return a.score > b.score; });
  std::vector<Peak> kept;
  for (const auto& c : candidates) {
    const bool close = std::any_of(kept.begin(), kept.end(), [&](const Peak& k) {
      return distance(k.position, c.position) <= min_separation;
    });
    if (!close) kept.push_back(c);
  }
  return kept;
}

RefineResult refine_local(const Hologram& holo, std::span<const PhaseSample> samples, const Method& method) {
  const TagEstimate coarse = argmax_estimate(holo);
  const auto ties = std::count(holo.scores.begin(), holo.scores.end(), holo.scores[coarse.cell_index]);
  if (ties > 1) return {coarse.position, false};

  // fine lattice anchored on the coarse centre so an exact coarse peak is itself a candidate
  const auto& region = holo.region;
  const std::array<double, 3> centre{coarse.position.x, coarse.position.y, coarse.position.z};
  std::array<std::vector<double>, 3> coords;
  for (int a = 0; a < 3; ++a) {
    const auto& r = region.axes()[a];
    if (r.fixed()) {
      coords[a] = {centre[a]};
      continue;
    }
    const double step = region.resolution()[a] / 10.0;
    for (int k = -15; k <= 15; ++k) {
      const double v = centre[a] + k * step;
      if (v >= r.min && v <= r.max) coords[a].push_back(v);
    }
  }
  const double lambda = samples.front().carrier.wavelength();
  Position3D best = coarse.position;
  double best_score = -std::numeric_limits<double>::infinity();
  for (double x : coords[0])
    for (double y : coords[1])
      for (double z : coords[2]) {
        const Position3D p{x, y, z};
        const double v = method.score(samples, p, lambda);
        if (v > best_score) {
          best_score = v;
          best = p;
        }
      }
  return {best, true};
}

}  // namespace rfidloc
