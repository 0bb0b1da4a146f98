#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "rfidloc/cli.hpp"
#include "rfidloc/config.hpp"

namespace fs = std::filesystem;
using namespace rfidloc;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("rfidloc_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string write_config(const Workdir& w, double sigma) {
  RunConfig cfg = default_config(3);
  cfg.scenario.noise.constant_sigma = sigma;
  const std::string path = w / "scene.cfg";
  std::ofstream(path) << format_config(cfg);
  return path;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("simulate then locate recovers noise-free tags") {
  Workdir w;
  const auto cfg = write_config(w, 0.0);
  const auto log = w / "reads.csv";
  REQUIRE(cli({"simulate", "--config", cfg, "--out", log}).code == 0);

  const auto r = cli({"locate", "--input", log, "--config", cfg, "--method", "wslf", "--scheme", "reference:0"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "tag_id");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 10);
    CHECK(rows[i][1] == "wslf/reference:0");
    CHECK(std::stod(rows[i][9]) <= std::sqrt(2.0) * 0.01 + 1e-12);
  }

  // tick export and sign-flipped round trip localize the same way
  const auto ticks = w / "ticks.csv";
  REQUIRE(cli({"simulate", "--config", cfg, "--out", ticks, "--phase-unit", "ticks", "--sign-flip"}).code == 0);
  const auto t = cli({"locate", "--input", ticks, "--config", cfg, "--sign-flip", "--method", "sarfid"});
  REQUIRE(t.code == 0);
  const auto located = csv_rows(t.out);
  REQUIRE(located.size() == 4);
  for (std::size_t i = 1; i < located.size(); ++i) CHECK(std::stod(located[i][9]) <= std::sqrt(2.0) * 0.01 + 1e-12);
}

TEST_CASE("hologram subcommand writes one file per tag") {
  Workdir w;
  const auto cfg = write_config(w, 0.02);
  const auto log = w / "reads.csv";
  REQUIRE(cli({"simulate", "--config", cfg, "--out", log}).code == 0);
  const auto dir = w / "holo";
  const auto r = cli({"hologram", "--input", log, "--region", "x=1.4,y=0:0.5,z=0:0.5", "--resolution", "0.05",
                      "--method", "clf", "--out", dir});
  REQUIRE(r.code == 0);
  for (const char* tag : {"T01", "T02", "T03"}) {
    const auto text = slurp(fs::path(dir) / (std::string(tag) + ".holo.csv"));
    CHECK(text.rfind("# rfidloc hologram v1\n", 0) == 0);
    CHECK(text.find("# method=clf/reference:0\n") != std::string::npos);
  }
}

TEST_CASE("bench reports every method and is byte-identical across runs") {
  Workdir w;
  const auto cfg = write_config(w, 0.05);
  const std::vector<std::string> args{"bench",      "--config", cfg,   "--method",   "wclf,wslf", "--method",
                                      "sarfid",     "--method", "tagoram", "--trials", "3",        "--resolution",
                                      "0.05",       "--seed",   "5",   "--out"};
  auto a_args = args;
  a_args.push_back(w / "a");
  auto b_args = args;
  b_args.push_back(w / "b");
  b_args.insert(b_args.end(), {"--threads", "1"});
  const auto a = cli(a_args);
  const auto b = cli(b_args);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(w / "a.txt") == slurp(w / "b.txt"));
  CHECK(slurp(w / "a.csv") == slurp(w / "b.csv"));
  for (const char* label : {"wclf/reference:0", "wslf/reference:0", "sarfid", "tagoram/reference:0"}) {
    CHECK_MESSAGE(a.out.find(label) != std::string::npos, label);
  }
  CHECK(csv_rows(slurp(w / "a.csv")).size() == 1 + 3 * 4 * 3);
}

TEST_CASE("exit codes") {
  Workdir w;
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"locate", "--input", "none.csv", "--method", "wnlf"}).code == 1);
  CHECK(cli({"locate", "--input", "none.csv", "--method", "tagoram", "--scheme", "misaligned"}).code == 1);
  CHECK(cli({"locate", "--input", w / "missing.csv"}).code == 2);

  const auto bad = w / "bad.csv";
  std::ofstream(bad) << "tag_id,ant_x,ant_y,ant_z,freq_hz,phase,phase_unit\nA,0,0,1,866900000,9.0,radians\n";
  const auto r = cli({"locate", "--input", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);

  const auto cfg = w / "bad.cfg";
  std::ofstream(cfg) << "seed = 1\nwat = 3\n";
  CHECK(cli({"simulate", "--config", cfg, "--out", w / "x.csv"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

#ifdef RFIDLOC_CLI_PATH
TEST_CASE("installed binary runs as a subprocess") {
  Workdir w;
  const auto cfg = write_config(w, 0.0);
  const std::string bin = RFIDLOC_CLI_PATH;
  const std::string log = w / "reads.csv";
  CHECK(std::system((bin + " simulate --config " + cfg + " --out " + log + " > /dev/null").c_str()) == 0);
  const auto first = w / "first.csv";
  const auto second = w / "second.csv";
  CHECK(std::system((bin + " locate --input " + log + " --config " + cfg + " > " + first).c_str()) == 0);
  CHECK(std::system((bin + " locate --input " + log + " --config " + cfg + " > " + second).c_str()) == 0);
  CHECK(slurp(first) == slurp(second));
  CHECK(csv_rows(slurp(first)).size() == 4);
  const int status = std::system((bin + " locate --input " + log + " --method wnlf 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 1);
}
#endif
