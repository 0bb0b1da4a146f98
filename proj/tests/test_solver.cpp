#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "rfidloc/errors.hpp"
#include "rfidloc/solver.hpp"
#include "rfidloc/synthesis.hpp"

using namespace rfidloc;

namespace {

std::vector<PhaseSample> track_samples(const Position3D& tag, double phi0, double sigma, std::uint64_t seed) {
  Scenario s;
  s.trajectory = Trajectory::linear({0, 0, 1}, {0, 0.02, 0}, 50);
  s.tags = {{"T", tag, phi0}};
  s.noise.constant_sigma = sigma;
  s.rng_seed = seed;
  return synthesize(s)[0].samples;
}

Hologram handmade(std::vector<double> scores, std::size_t ny, std::size_t nz) {
  const SearchRegion region = SearchRegion::plane_yz(1.4, {0.0, 0.01 * ny}, {0.0, 0.01 * nz}, 0.01);
  REQUIRE(region.cell_count() == scores.size());
  return Hologram{region, std::move(scores), 0.0, 1.0, "H", "test"};
}

const Method kWslf = Method::parse("wslf", "reference:0");

}  // namespace

TEST_CASE("search region geometry") {
  const auto r = SearchRegion::plane_yz(1.4, {0.0, 1.0}, {0.0, 1.0}, 0.01);
  CHECK(r.dims() == std::array<std::size_t, 3>{1, 100, 100});
  CHECK(r.cell_count() == 10000);
  const auto c = r.cell_center(r.ravel({0, 12, 30}));
  CHECK(c.x == 1.4);
  CHECK(c.y == doctest::Approx(0.125));
  CHECK(c.z == doctest::Approx(0.305));
  for (std::size_t i : {0ul, 1ul, 99ul, 5000ul, 9999ul}) CHECK(r.ravel(r.unravel(i)) == i);

  const SearchRegion vol({AxisRange{1.0, 1.5}, AxisRange{0.0, 0.3}, AxisRange{0.0, 0.2}}, {0.1, 0.1, 0.1});
  CHECK(vol.dims() == std::array<std::size_t, 3>{5, 3, 2});

  CHECK_THROWS_AS(SearchRegion::plane_yz(1.4, {1.0, 0.0}, {0.0, 1.0}, 0.01), DataError);
  CHECK_THROWS_AS(SearchRegion::plane_yz(1.4, {0.0, 1.0}, {0.0, 1.0}, 0.0), DataError);
  CHECK_THROWS_AS(SearchRegion::plane_yz(1.4, {0.0, 100.0}, {0.0, 100.0}, 0.001), DataError);
  CHECK_THROWS_AS(SearchRegion({AxisRange{0, 1}, AxisRange{0, 1}, AxisRange{0, 1}}, {0.1, 0.1, 0.1}, 100),
                  DataError);
}

TEST_CASE("noise-free hologram peaks within one cell of the truth") {
  const Position3D truth{1.4, 0.43, 0.37};  // off the cell lattice on purpose
  const auto s = track_samples(truth, 3.0, 0.0, 1);
  const auto region = SearchRegion::plane_yz(1.4, {0.2, 0.7}, {0.1, 0.6}, 0.01);
  for (const char* name : {"clf", "slf", "wclf", "wslf", "nlf"}) {
    const auto holo = evaluate_hologram(s, region, Method::parse(name));
    CHECK(*std::max_element(holo.scores.begin(), holo.scores.end()) == 1.0);
    CHECK(*std::min_element(holo.scores.begin(), holo.scores.end()) == 0.0);
    const auto est = argmax_estimate(holo, truth);
    // altitude is weakly observed from a single horizontal track, so an off-lattice truth
    // can pull the peak cell along z; along-track position stays within a cell
    CHECK_MESSAGE(std::abs(est.position.y - truth.y) <= 0.015, name);
  }
  // on-lattice truth is recovered exactly
  const Position3D on_grid{1.4, 0.405, 0.355};
  for (const char* name : {"clf", "slf", "wclf", "wslf", "nlf"}) {
    const auto exact =
        argmax_estimate(evaluate_hologram(track_samples(on_grid, 3.0, 0.0, 1), region, Method::parse(name)), on_grid);
    CHECK_MESSAGE(exact.errors->combined_yz < 1e-12, name);
  }
}

TEST_CASE("single cell hologram") {
  const auto s = track_samples({1.4, 0.3, 0.3}, 0.0, 0.01, 2);
  const SearchRegion one({AxisRange{1.4, 1.4}, AxisRange{0.3, 0.31}, AxisRange{0.3, 0.31}}, {0.01, 0.01, 0.01});
  REQUIRE(one.cell_count() == 1);
  const auto holo = evaluate_hologram(s, one, kWslf);
  REQUIRE(holo.scores.size() == 1);
  CHECK(holo.scores[0] == 1.0);
  const auto est = argmax_estimate(holo);
  CHECK(est.position == one.cell_center(0));
}

TEST_CASE("hologram is deterministic and thread-count independent") {
  const auto s = track_samples({1.4, 0.3, 0.3}, 1.0, 0.05, 3);
  const auto region = SearchRegion::plane_yz(1.4, {0.0, 0.6}, {0.0, 0.6}, 0.02);
  const auto a = evaluate_hologram(s, region, kWslf, 1);
  const auto b = evaluate_hologram(s, region, kWslf, 1);
  const auto c = evaluate_hologram(s, region, kWslf, 4);
  CHECK(a.scores == b.scores);
  CHECK(a.scores == c.scores);
  CHECK(a.raw_max == c.raw_max);
}

TEST_CASE("argmax tie rule and peak ratio") {
  // 1 x 3 x 3 grid with equal maxima at linear indices 2 and 6
  const auto holo = handmade({0.1, 0.2, 1.0, 0.3, 0.0, 0.3, 1.0, 0.2, 0.1}, 3, 3);
  const auto est = argmax_estimate(holo);
  CHECK(est.cell_index == 2);
  CHECK(est.peak_ratio == 1.0);

  const auto single = handmade({0.0, 0.5, 1.0, 0.2}, 2, 2);
  CHECK(argmax_estimate(single).peak_ratio == std::numeric_limits<double>::infinity());

  // a secondary local maximum at 0.5
  const auto two = handmade({1.0, 0.2, 0.1, 0.2, 0.1, 0.1, 0.1, 0.1, 0.5}, 3, 3);
  CHECK(argmax_estimate(two).peak_ratio == doctest::Approx(2.0));
}

TEST_CASE("argmax equals an exhaustive scan and is invariant to increasing affine maps") {
  const Position3D truth{1.4, 0.31, 0.42};
  const auto s = track_samples(truth, 0.4, 0.0168, 4);
  const auto region = SearchRegion::plane_yz(1.4, {0.1, 0.6}, {0.1, 0.7}, 0.01);
  const Method m = Method::parse("slf", "reference:0");
  const auto holo = evaluate_hologram(s, region, m);
  const auto est = argmax_estimate(holo, truth);

  // independent full scan over raw scores
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < region.cell_count(); ++i) {
    const double v = m.score(s, region.cell_center(i), s[0].carrier.wavelength());
    if (v > best_score) {
      best_score = v;
      best = i;
    }
  }
  CHECK(est.cell_index == best);

  Hologram mapped = holo;
  for (double& v : mapped.scores) v = 3.0 * v + 7.0;
  CHECK(argmax_estimate(mapped).cell_index == est.cell_index);

  // shrinking the region around the peak keeps the estimate
  const auto p = est.position;
  const auto sub = SearchRegion::plane_yz(1.4, {p.y - 0.055, p.y + 0.045}, {p.z - 0.055, p.z + 0.045}, 0.01);
  const auto sub_est = argmax_estimate(evaluate_hologram(s, sub, m));
  CHECK(sub_est.position.y == doctest::Approx(p.y).epsilon(1e-12));
  CHECK(sub_est.position.z == doctest::Approx(p.z).epsilon(1e-12));
}

TEST_CASE("mirror ambiguity about the track") {
  const Position3D truth{1.4, 0.505, 0.305};
  const auto s = track_samples(truth, 1.0, 0.0, 5);
  const Method sarfid = Method::parse("sarfid");
  const auto full = evaluate_hologram(s, SearchRegion::plane_yz(1.4, {0.0, 1.0}, {0.0, 2.0}, 0.01), sarfid);
  const auto peaks = find_peaks(full, 0.9, 0.1);
  REQUIRE(peaks.size() == 2);
  CHECK(std::abs(peaks[0].position.z + peaks[1].position.z - 2.0) < 1e-9);  // mirrored about z = 1
  const auto half = evaluate_hologram(s, SearchRegion::plane_yz(1.4, {0.0, 1.0}, {0.0, 1.0}, 0.01), sarfid);
  CHECK(find_peaks(half, 0.9, 0.1).size() == 1);
}

TEST_CASE("find_peaks suppression") {
  const auto holo = handmade({1.0, 0.9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.8}, 3, 3);
  CHECK(find_peaks(holo, 0.5, 0.0).size() == 2);
  CHECK(find_peaks(holo, 0.85, 0.0).size() == 1);
  CHECK(find_peaks(holo, 0.5, 0.05).size() == 1);
}

TEST_CASE("refine_local") {
  SUBCASE("noise-free refinement lands within a fine-cell diagonal") {
    const Position3D truth{1.4, 0.4337, 0.3712};
    const auto s = track_samples(truth, 2.0, 0.0, 6);
    const auto region = SearchRegion::plane_yz(1.4, {0.3, 0.55}, {0.3, 0.45}, 0.01);
    const auto holo = evaluate_hologram(s, region, kWslf);
    const auto coarse = argmax_estimate(holo, truth);
    const auto refined = refine_local(holo, s, kWslf);
    CHECK(refined.refined);
    // coarse cell untouched
    CHECK(argmax_estimate(holo).cell_index == coarse.cell_index);
    CHECK(std::abs(refined.position.y - truth.y) <= 0.001 * std::sqrt(2.0));
    CHECK(axis_errors(refined.position, truth).combined_yz <= coarse.errors->combined_yz);
  }
  SUBCASE("flat hologram is flagged") {
    const auto s = track_samples({1.4, 0.3, 0.3}, 0.0, 0.0, 7);
    const auto flat = handmade(std::vector<double>(9, 1.0), 3, 3);
    const auto r = refine_local(flat, s, kWslf);
    CHECK_FALSE(r.refined);
    CHECK(r.position == flat.region.cell_center(0));
  }
  SUBCASE("exact peak stays put") {
    const Position3D truth{1.4, 0.405, 0.355};
    const auto s = track_samples(truth, 2.0, 0.0, 8);
    const auto holo = evaluate_hologram(s, SearchRegion::plane_yz(1.4, {0.3, 0.5}, {0.3, 0.45}, 0.01), kWslf);
    const auto r = refine_local(holo, s, kWslf);
    CHECK(r.refined);
    CHECK(axis_errors(r.position, truth).combined_yz < 1e-12);
  }
}
