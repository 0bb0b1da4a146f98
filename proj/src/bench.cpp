#include "rfidloc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "rfidloc/errors.hpp"

namespace rfidloc {

namespace {

std::vector<TrialRecord> run_trial(const BenchConfig& config, std::size_t trial) {
  Scenario scenario = config.run.scenario;
  scenario.rng_seed = derive_seed(config.seed, static_cast<std::uint64_t>(trial));
  if (config.run.random_phi0) {
    for (auto& tag : scenario.tags) {
      std::mt19937_64 rng(derive_seed(scenario.rng_seed, "phi0:" + tag.tag_id));
      tag.phi0 = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
    }
  }
  const auto data = synthesize(scenario);

  std::vector<TrialRecord> out;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& truth = scenario.tags[k].position;
    std::vector<Hologram> holos;
    try {
      holos = evaluate_holograms(data[k].samples, config.run.region, config.methods, 1);
    } catch (const std::exception& e) {
      throw DataError("bench trial " + std::to_string(trial) + ", tag " + data[k].tag_id + ": " + e.what());
    }
    for (std::size_t m = 0; m < holos.size(); ++m) {
      const auto est = argmax_estimate(holos[m], truth);
      out.push_back({trial, scenario.rng_seed, m, data[k].tag_id, est.position, *est.errors});
    }
  }
  // trial-major, then method, then tag
  std::stable_sort(out.begin(), out.end(), [](const TrialRecord& a, const TrialRecord& b) { return a.method < b.method; });
  return out;
}

ErrorStats stats_of(std::vector<const TrialRecord*> rs, std::string method, std::string tag) {
  ErrorStats s{std::move(method), std::move(tag)};
  s.count = rs.size();
  if (rs.empty()) return s;
  std::vector<double> combined;
  for (const auto* r : rs) {
    combined.push_back(r->error.combined_yz);
    s.mean += r->error.combined_yz;
    s.mean_x += r->error.x;
    s.mean_y += r->error.y;
    s.mean_z += r->error.z;
  }
  const double n = static_cast<double>(rs.size());
  s.mean /= n;
  s.mean_x /= n;
  s.mean_y /= n;
  s.mean_z /= n;
  std::sort(combined.begin(), combined.end());
  const std::size_t mid = combined.size() / 2;
  s.median = combined.size() % 2 ? combined[mid] : 0.5 * (combined[mid - 1] + combined[mid]);
  s.max = combined.back();
  return s;
}

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

constexpr std::string_view kCsvHeader = "trial,trial_seed,method,tag_id,est_x,est_y,est_z,err_x,err_y,err_z,err_yz";

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  if (config.trials < 1) throw DataError("bench needs at least one trial");
  if (config.methods.empty()) throw DataError("bench needs at least one method");
  config.run.scenario.validate();

  const auto started = std::chrono::steady_clock::now();
  std::vector<std::vector<TrialRecord>> per_trial(config.trials);
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.trials));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(config.trials);
  auto worker = [&] {
    for (std::size_t t = next++; t < config.trials; t = next++) {
      try {
        per_trial[t] = run_trial(config, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BenchReport report;
  for (const auto& m : config.methods) report.methods.push_back(m.label());
  report.trials = config.trials;
  report.seed = config.seed;
  for (auto& v : per_trial) {
    report.records.insert(report.records.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  report.stats = summarize(report.records, report.methods);
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<ErrorStats> summarize(std::span<const TrialRecord> records, std::span<const std::string> methods) {
  std::vector<ErrorStats> out;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<const TrialRecord*> all;
    std::vector<std::string> tag_order;
    std::map<std::string, std::vector<const TrialRecord*>> by_tag;
    for (const auto& r : records) {
      if (r.method != m) continue;
      all.push_back(&r);
      auto& slot = by_tag[r.tag_id];
      if (slot.empty()) tag_order.push_back(r.tag_id);
      slot.push_back(&r);
    }
    out.push_back(stats_of(all, methods[m], ""));
    for (const auto& tag : tag_order) out.push_back(stats_of(by_tag[tag], methods[m], tag));
  }
  return out;
}

std::vector<double> per_trial_means(const BenchReport& report, std::size_t method) {
  std::vector<double> sum(report.trials, 0.0);
  std::vector<std::size_t> count(report.trials, 0);
  for (const auto& r : report.records) {
    if (r.method != method) continue;
    sum[r.trial] += r.error.combined_yz;
    ++count[r.trial];
  }
  for (std::size_t t = 0; t < sum.size(); ++t) {
    if (count[t] == 0) throw InvariantError("trial " + std::to_string(t) + " has no records");
    sum[t] /= static_cast<double>(count[t]);
  }
  return sum;
}

void write_report_text(std::ostream& out, const BenchReport& report) {
  out << "# rfidloc bench report\n";
  out << "trials = " << report.trials << '\n';
  out << "seed = " << report.seed << '\n';
  out << "methods = " << report.methods.size() << '\n';
  out << "# errors in meters; err_yz combines the Y and Z axes\n";
  out << fmt::format("{:<24} {:<8} {:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}\n", "method", "tag", "count",
                     "mean_yz", "median_yz", "max_yz", "mean_x", "mean_y", "mean_z");
  for (const auto& s : report.stats) {
    out << fmt::format("{:<24} {:<8} {:>6} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f}\n", s.method,
                       s.tag_id.empty() ? "*" : s.tag_id, s.count, s.mean, s.median, s.max, s.mean_x, s.mean_y,
                       s.mean_z);
  }
}

void write_report_csv(std::ostream& out, const BenchReport& report) {
  out << kCsvHeader << '\n';
  for (const auto& r : report.records) {
    out << r.trial << ',' << r.trial_seed << ',' << report.methods.at(r.method) << ',' << r.tag_id << ','
        << format_double(r.estimate.x) << ',' << format_double(r.estimate.y) << ',' << format_double(r.estimate.z)
        << ',' << format_double(r.error.x) << ',' << format_double(r.error.y) << ',' << format_double(r.error.z)
        << ',' << format_double(r.error.combined_yz) << '\n';
  }
}

std::vector<TrialRecord> parse_report_csv(std::istream& in, std::vector<std::string>& methods) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw DataError("bench csv: bad header");
  std::vector<TrialRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 11) throw DataError("bench csv line " + std::to_string(line_no) + ": expected 11 fields");
    double v[9];
    for (int i = 0; i < 7; ++i) {
      const auto d = parse_double(f[i + 4]);
      if (!d) throw DataError("bench csv line " + std::to_string(line_no) + ": bad number");
      v[i] = *d;
    }
    TrialRecord r;
    r.trial = std::stoull(std::string(f[0]));
    r.trial_seed = std::stoull(std::string(f[1]));
    const std::string method(f[2]);
    auto it = std::find(methods.begin(), methods.end(), method);
    if (it == methods.end()) it = methods.insert(methods.end(), method);
    r.method = static_cast<std::size_t>(std::distance(methods.begin(), it));
    r.tag_id = std::string(f[3]);
    r.estimate = {v[0], v[1], v[2]};
    r.error = {v[3], v[4], v[5], v[6]};
    out.push_back(std::move(r));
  }
  return out;
}

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw SpecError("paired test needs two equal samples of size >= 2");
  PairedTest r;
  r.n = a.size();
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double n = static_cast<double>(d.size());
  r.mean_difference = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : d) ss += (x - r.mean_difference) * (x - r.mean_difference);
  const double se = std::sqrt(ss / (n - 1.0) / n);
  if (se == 0.0) {
    r.t = r.mean_difference < 0.0 ? -INFINITY : (r.mean_difference > 0.0 ? INFINITY : 0.0);
    r.p_less = r.mean_difference < 0.0 ? 0.0 : 1.0;
    return r;
  }
  r.t = r.mean_difference / se;
  const boost::math::students_t dist(n - 1.0);
  r.p_less = boost::math::cdf(dist, r.t);
  return r;
}

}  // namespace rfidloc
