#include "rfidloc/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <optional>
#include <ostream>

#include "rfidloc/bench.hpp"
#include "rfidloc/config.hpp"
#include "rfidloc/errors.hpp"
#include "rfidloc/hologram_io.hpp"
#include "rfidloc/phase_log.hpp"
#include "rfidloc/solver.hpp"

namespace rfidloc {

namespace {

struct LocateOptions {
  std::string input;
  std::string config;
  std::string method = "wslf";
  std::string scheme = "reference:0";
  std::string region;
  std::optional<double> resolution;
  bool sign_flip = false;
  std::string phase_unit = "radians";
  bool auto_wrap = false;
  bool refine = false;
  std::string out;
};

Method make_method(const std::string& name, const std::string& scheme, const RunConfig* cfg) {
  Method m = Method::parse(name, scheme);
  if (cfg && cfg->tagoram_sigma) {
    if (const auto* b = m.baseline(); b && b->kind == BaselineKind::Tagoram) {
      BaselineSpec spec = *b;
      spec.tagoram_sigma = *cfg->tagoram_sigma;
      m = Method(spec);
    }
  }
  return m;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto pos = item.find(',', start);
      const auto part = item.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
      if (!part.empty()) out.push_back(part);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  return out;
}

void add_locate_flags(CLI::App* cmd, LocateOptions& o) {
  cmd->add_option("--input", o.input, "Phase log to read")->required();
  cmd->add_option("--config", o.config, "Scenario config: search region, ground truth, baseline settings");
  cmd->add_option("--method", o.method, "nlf|clf|slf|wclf|wslf|sarfid|tagoram");
  cmd->add_option("--scheme", o.scheme, "misaligned|reference[:index]");
  cmd->add_option("--region", o.region, "Search region, e.g. x=1.4,y=0:1,z=0:1");
  cmd->add_option("--resolution", o.resolution, "Grid resolution in meters");
  cmd->add_flag("--sign-flip", o.sign_flip, "Input uses the conjugate phase convention");
  cmd->add_option("--phase-unit", o.phase_unit, "Unit for rows with an empty phase_unit: radians|ticks");
  cmd->add_flag("--auto-wrap", o.auto_wrap, "Wrap out-of-range phases instead of rejecting them");
}

struct Prepared {
  std::optional<RunConfig> cfg;
  SearchRegion region;
  Method method;
  std::vector<TagSamples> data;
};

Prepared prepare(const LocateOptions& o) {
  std::optional<RunConfig> cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  const SearchRegion base = cfg ? cfg->region : default_config().region;
  Method method = make_method(o.method, o.scheme, cfg ? &*cfg : nullptr);
  IngestOptions ingest;
  ingest.sign_flip = o.sign_flip;
  ingest.default_unit = parse_phase_unit(o.phase_unit);
  ingest.auto_wrap = o.auto_wrap;
  auto data = ingest_log(o.input, ingest);
  if (data.empty()) throw DataError("phase log '" + o.input + "' has no records");
  return {std::move(cfg), parse_region(o.region, base, o.resolution), std::move(method), std::move(data)};
}

std::optional<Position3D> truth_for(const std::optional<RunConfig>& cfg, const std::string& tag_id) {
  if (!cfg) return std::nullopt;
  for (const auto& t : cfg->scenario.tags) {
    if (t.tag_id == tag_id) return t.position;
  }
  return std::nullopt;
}

int cmd_simulate(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out_path,
                 const std::string& unit, bool sign_flip, std::ostream& out) {
  RunConfig cfg = load_config(config);
  if (seed) cfg.scenario.rng_seed = *seed;
  auto data = synthesize(cfg.scenario);
  if (sign_flip) {
    for (auto& t : data) {
      for (auto& s : t.samples) s.phase_wrapped = wrap_2pi(-s.phase_wrapped);
    }
  }
  write_log(out_path, data, parse_phase_unit(unit));
  std::size_t rows = 0;
  for (const auto& t : data) rows += t.samples.size();
  out << "wrote " << rows << " reads for " << data.size() << " tags to " << out_path << '\n';
  return kExitOk;
}

int cmd_locate(const LocateOptions& o, std::ostream& out) {
  const Prepared p = prepare(o);
  out << "tag_id,method,x,y,z,peak_ratio,err_x,err_y,err_z,err_yz\n";
  for (const auto& t : p.data) {
    const Hologram holo = evaluate_hologram(t.samples, p.region, p.method);
    const auto truth = truth_for(p.cfg, t.tag_id);
    TagEstimate est = argmax_estimate(holo, truth);
    if (o.refine) {
      const auto refined = refine_local(holo, t.samples, p.method);
      est.position = refined.position;
      if (truth) est.errors = axis_errors(est.position, *truth);
    }
    out << est.tag_id << ',' << est.method << ',' << format_double(est.position.x) << ','
        << format_double(est.position.y) << ',' << format_double(est.position.z) << ','
        << format_double(est.peak_ratio);
    if (est.errors) {
      out << ',' << format_double(est.errors->x) << ',' << format_double(est.errors->y) << ','
          << format_double(est.errors->z) << ',' << format_double(est.errors->combined_yz);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_hologram(const LocateOptions& o, std::ostream& out) {
  const Prepared p = prepare(o);
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw DataError("cannot create output directory '" + o.out + "': " + ec.message());
  for (const auto& t : p.data) {
    const Hologram holo = evaluate_hologram(t.samples, p.region, p.method);
    const auto path = (std::filesystem::path(o.out) / (t.tag_id + ".holo.csv")).string();
    export_hologram(holo, path);
    out << "wrote " << path << '\n';
  }
  return kExitOk;
}

int cmd_bench(const std::string& config, const std::vector<std::string>& method_names, const std::string& scheme,
              std::size_t trials, std::optional<std::uint64_t> seed, const std::string& region,
              std::optional<double> resolution, unsigned threads, const std::string& out_prefix, std::ostream& out,
              std::ostream& err) {
  BenchConfig bc;
  bc.run = load_config(config);
  bc.run.region = parse_region(region, bc.run.region, resolution);
  const auto names = split_list(method_names);
  if (names.empty()) throw SpecError("bench needs at least one --method");
  for (const auto& n : names) bc.methods.push_back(make_method(n, scheme, &bc.run));
  bc.trials = trials;
  bc.seed = seed.value_or(bc.run.scenario.rng_seed);
  bc.threads = threads;

  const BenchReport report = run_bench(bc);
  const std::string text_path = out_prefix + ".txt";
  const std::string csv_path = out_prefix + ".csv";
  {
    std::ofstream f(text_path, std::ios::binary);
    if (!f) throw DataError("cannot write '" + text_path + "'");
    write_report_text(f, report);
  }
  {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw DataError("cannot write '" + csv_path + "'");
    write_report_csv(f, report);
  }
  write_report_text(out, report);
  err << fmt::format("bench: {} trials x {} methods in {:.2f} s; wrote {} and {}\n", report.trials,
                     report.methods.size(), report.runtime_seconds, text_path, csv_path);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-based UHF-RFID tag positioning by variant maximum likelihood", "rfidloc"};
  app.require_subcommand(1);

  std::string sim_config, sim_out, sim_unit = "radians";
  std::optional<std::uint64_t> sim_seed;
  bool sim_flip = false;
  auto* simulate = app.add_subcommand("simulate", "Synthesize a phase log from a scenario config");
  simulate->add_option("--config", sim_config, "Scenario config")->required();
  simulate->add_option("--seed", sim_seed, "Override the config seed");
  simulate->add_option("--out", sim_out, "Phase log to write")->required();
  simulate->add_option("--phase-unit", sim_unit, "radians|ticks");
  simulate->add_flag("--sign-flip", sim_flip, "Write the conjugate phase convention");

  LocateOptions locate_opts;
  auto* locate = app.add_subcommand("locate", "Estimate tag positions from a phase log");
  add_locate_flags(locate, locate_opts);
  locate->add_flag("--refine", locate_opts.refine, "Refine the peak on a 10x finer local grid");

  LocateOptions holo_opts;
  auto* hologram = app.add_subcommand("hologram", "Export per-tag holograms");
  add_locate_flags(hologram, holo_opts);
  hologram->add_option("--out", holo_opts.out, "Output directory")->required();

  std::string bench_config, bench_scheme = "reference:0", bench_region, bench_out;
  std::vector<std::string> bench_methods;
  std::size_t bench_trials = 100;
  std::optional<std::uint64_t> bench_seed;
  std::optional<double> bench_resolution;
  unsigned bench_threads = 0;
  auto* bench = app.add_subcommand("bench", "Monte-Carlo localization error benchmark");
  bench->add_option("--config", bench_config, "Scenario config")->required();
  bench->add_option("--method", bench_methods, "Methods, comma separated or repeated")->required();
  bench->add_option("--scheme", bench_scheme, "misaligned|reference[:index]");
  bench->add_option("--trials", bench_trials, "Number of trials")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "Base seed (default: config seed)");
  bench->add_option("--region", bench_region, "Search region, e.g. x=1.4,y=0:1,z=0:1");
  bench->add_option("--resolution", bench_resolution, "Grid resolution in meters");
  bench->add_option("--threads", bench_threads, "Worker threads (0: all cores)");
  bench->add_option("--out", bench_out, "Output prefix for <prefix>.txt and <prefix>.csv")->required();

  std::vector<std::string> argv_store{"rfidloc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_config, sim_seed, sim_out, sim_unit, sim_flip, out);
    if (locate->parsed()) return cmd_locate(locate_opts, out);
    if (hologram->parsed()) return cmd_hologram(holo_opts, out);
    if (bench->parsed()) {
      return cmd_bench(bench_config, bench_methods, bench_scheme, bench_trials, bench_seed, bench_region,
                       bench_resolution, bench_threads, bench_out, out, err);
    }
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace rfidloc
