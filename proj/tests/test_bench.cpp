#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rfidloc/bench.hpp"
#include "rfidloc/errors.hpp"

using namespace rfidloc;

namespace {

BenchConfig small_bench(double sigma, std::size_t trials) {
  BenchConfig cfg;
  cfg.run = default_config(2);
  cfg.run.scenario.noise.constant_sigma = sigma;
  cfg.run.random_phi0 = true;
  cfg.run.region = SearchRegion::plane_yz(1.4, {0.0, 1.0}, {0.0, 1.0}, 0.02);
  for (const char* m : {"wclf", "wslf", "sarfid", "tagoram"}) cfg.methods.push_back(Method::parse(m));
  cfg.trials = trials;
  cfg.seed = 11;
  cfg.threads = 2;
  return cfg;
}

std::string text_of(const BenchReport& r) {
  std::ostringstream out;
  write_report_text(out, r);
  return out.str();
}

std::string csv_of(const BenchReport& r) {
  std::ostringstream out;
  write_report_csv(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("noise-free bench errors stay within a cell diagonal") {
  auto cfg = small_bench(0.0, 3);
  cfg.run.region = SearchRegion::plane_yz(1.4, {0.0, 1.0}, {0.0, 1.0}, 0.01);  // tags sit on this lattice
  const auto report = run_bench(cfg);
  REQUIRE(report.records.size() == 3 * 4 * 2);
  for (const auto& r : report.records) REQUIRE(r.error.combined_yz <= std::sqrt(2.0) * 0.01 + 1e-12);
}

TEST_CASE("bench is reproducible and independent of thread count") {
  auto cfg = small_bench(0.05, 4);
  const auto a = run_bench(cfg);
  cfg.threads = 1;
  const auto b = run_bench(cfg);
  CHECK(text_of(a) == text_of(b));
  CHECK(csv_of(a) == csv_of(b));
  cfg.seed = 12;
  CHECK(csv_of(run_bench(cfg)) != csv_of(a));
}

TEST_CASE("records are ordered and stats agree with the raw csv") {
  const auto report = run_bench(small_bench(0.05, 5));
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    REQUIRE(r.trial == i / 8);
    REQUIRE(r.method == (i / 2) % 4);
    REQUIRE(r.trial_seed == derive_seed(11, static_cast<std::uint64_t>(r.trial)));
  }

  std::istringstream in(csv_of(report));
  std::vector<std::string> methods;
  const auto parsed = parse_report_csv(in, methods);
  CHECK(methods == report.methods);
  REQUIRE(parsed.size() == report.records.size());
  const auto stats = summarize(parsed, methods);
  REQUIRE(stats.size() == report.stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    CHECK(stats[i].method == report.stats[i].method);
    CHECK(stats[i].tag_id == report.stats[i].tag_id);
    CHECK(stats[i].count == report.stats[i].count);
    CHECK(stats[i].mean == doctest::Approx(report.stats[i].mean).epsilon(1e-12));
    CHECK(stats[i].median == doctest::Approx(report.stats[i].median).epsilon(1e-12));
    CHECK(stats[i].max == doctest::Approx(report.stats[i].max).epsilon(1e-12));
  }

  // aggregate mean is the mean of per-trial means
  for (std::size_t m = 0; m < report.methods.size(); ++m) {
    const auto means = per_trial_means(report, m);
    REQUIRE(means.size() == 5);
    double sum = 0.0;
    for (double v : means) sum += v;
    const auto agg = std::find_if(report.stats.begin(), report.stats.end(), [&](const ErrorStats& s) {
      return s.method == report.methods[m] && s.tag_id.empty();
    });
    REQUIRE(agg != report.stats.end());
    CHECK(agg->mean == doctest::Approx(sum / 5).epsilon(1e-12));
    CHECK(agg->count == 10);
  }
}

TEST_CASE("paired t-test") {
  const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> b{1.5, 2.4, 3.6, 4.3, 5.7};
  const auto t = paired_t_test(a, b);
  CHECK(t.n == 5);
  CHECK(t.mean_difference == doctest::Approx(-0.5));
  // differences -0.5,-0.4,-0.6,-0.3,-0.7: sd = sqrt(0.025), t = -0.5 / (sd / sqrt 5)
  CHECK(t.t == doctest::Approx(-0.5 / (std::sqrt(0.025) / std::sqrt(5.0))));
  // scipy.stats.t.cdf(-7.0710678118654755, 4)
  CHECK(t.p_less == doctest::Approx(0.0010553229225456356).epsilon(1e-9));

  const auto flipped = paired_t_test(b, a);
  CHECK(flipped.p_less == doctest::Approx(1.0 - t.p_less).epsilon(1e-12));

  const std::vector<double> same{1.0, 1.0, 1.0};
  CHECK(paired_t_test(same, same).p_less == 1.0);  // no spread, no difference: no evidence
  CHECK_THROWS_AS(paired_t_test(a, same), SpecError);
}
