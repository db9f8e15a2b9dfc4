#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pideg/cli.hpp"

using namespace pideg;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "pideg_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("render writes a trace and reports the tail") {
  fs::path out = scratch_dir() / "t.csv";
  fs::remove(out);
  CliResult r = cli({"render", "--kp", "0.1", "--gate", "on:1,off:1", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(count_lines(slurp(out)) == 2001);
  CHECK(r.out.find("tail: settles") != std::string::npos);
}

TEST_CASE("negative gain is a flag error") {
  CliResult r = cli({"render", "--kp", "-1", "--gate", "on:1", "--out", "x.csv"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("runaway proportional tail is flagged") {
  // odd key-on length keeps the half-rate alternation alive through key-off
  fs::path out = scratch_dir() / "runaway.csv";
  CliResult r = cli({"render", "--kp", "2", "--gate", "on:1.001,off:5", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("never-settling") != std::string::npos);
}

TEST_CASE("bad gate spec and missing required flags exit 2") {
  CHECK(cli({"render", "--kp", "0.1", "--gate", "on:", "--out", "x.csv"}).code == 2);
  CHECK(cli({"render", "--kp", "0.1", "--gate", "on:1"}).code == 2);  // no --out
  CHECK(cli({"bogus"}).code == 2);
  CHECK(cli({}).code == 2);
}

TEST_CASE("numeric blow-up without takeover exits 1") {
  fs::path out = scratch_dir() / "blowup.csv";
  CliResult r = cli({"render", "--kd", "0.01", "--gate", "on:1", "--out", out.string()});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(out));  // no partial file
}

TEST_CASE("takeover rescues the runaway configuration") {
  fs::path out = scratch_dir() / "rescued.csv";
  CliResult r = cli({"render", "--kp", "2", "--gate", "on:1,off:5", "--takeover", "100,0.02,250",
                     "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("tail: settles") != std::string::npos);
}

TEST_CASE("sweep writes one file per subfigure") {
  fs::path dir = scratch_dir() / "sweep11";
  fs::remove_all(dir);
  CliResult r = cli({"sweep", "--figure", "11", "--outdir", dir.string()});
  CHECK(r.code == 0);
  std::vector<std::string> names{"fig11a.csv", "fig11b.csv", "fig11c.csv", "fig11d.csv"};
  for (const std::string& n : names) CHECK(fs::exists(dir / n));
  CHECK(count_lines(r.out) == 4);  // one report per run
}

TEST_CASE("sweep is deterministic across invocations") {
  fs::path a = scratch_dir() / "sweep_a";
  fs::path b = scratch_dir() / "sweep_b";
  fs::remove_all(a);
  fs::remove_all(b);
  REQUIRE(cli({"sweep", "--figure", "12", "--outdir", a.string()}).code == 0);
  REQUIRE(cli({"sweep", "--figure", "12", "--outdir", b.string()}).code == 0);
  for (char letter : {'a', 'b', 'c', 'd'}) {
    std::string name = std::string("fig12") + letter + ".csv";
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("unknown figure id exits 2") {
  CHECK(cli({"sweep", "--figure", "99"}).code == 2);
}

TEST_CASE("audio renders a wav and rejects nyquist violations") {
  fs::path wav = scratch_dir() / "demo.wav";
  fs::remove(wav);
  CliResult ok = cli({"audio", "--kp", "0.1", "--gate", "on:0.2,off:0.2", "--tone", "440",
                      "--audio-fs", "44100", "--wav", wav.string()});
  CHECK(ok.code == 0);
  std::string bytes = slurp(wav);
  REQUIRE(bytes.size() > 44);
  CHECK(bytes.substr(0, 4) == "RIFF");

  CliResult bad = cli({"audio", "--kp", "0.1", "--gate", "on:0.2", "--tone", "30000", "--audio-fs",
                       "44100", "--wav", wav.string()});
  CHECK(bad.code == 2);
}

TEST_CASE("zero gains give a silent wav") {
  fs::path wav = scratch_dir() / "silent.wav";
  CliResult r = cli({"audio", "--gate", "on:0.1", "--wav", wav.string()});
  CHECK(r.code == 0);
  std::string bytes = slurp(wav);
  REQUIRE(bytes.size() > 44);
  for (std::size_t i = 44; i < bytes.size(); ++i) CHECK(bytes[i] == 0);
}

TEST_CASE("analyze reports metrics as json") {
  fs::path dir = scratch_dir();
  fs::path trace = dir / "steady.csv";
  {
    std::ofstream out(trace);
    out << "n,t,gate,lc,fc,eo\n";
    for (int n = 0; n < 100; ++n) {
      out << n << "," << static_cast<double>(n) / 1000.0 << ",1,1,1,1\n";
    }
  }
  CliResult r = cli({"analyze", "--in", trace.string(), "--json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"alternation_ratio\":0.0") != std::string::npos);
  CHECK(r.out.find("\"settled\":true") != std::string::npos);
  CHECK(r.out.find("\"settling_time_s\":0.0") != std::string::npos);
}

TEST_CASE("analyze window narrows the metrics") {
  fs::path dir = scratch_dir();
  fs::path trace = dir / "windowed.csv";
  REQUIRE(cli({"render", "--kp", "2", "--gate", "on:1,off:1", "--out", trace.string()}).code == 0);
  CliResult r = cli({"analyze", "--in", trace.string(), "--window", "0.2,0.9", "--json"});
  CHECK(r.code == 0);
  // kp=2 rings at half the sampling rate across that window
  auto pos = r.out.find("\"alternation_ratio\":");
  REQUIRE(pos != std::string::npos);
  double ratio = std::stod(r.out.substr(pos + 20));
  CHECK(ratio >= 0.9);

  CHECK(cli({"analyze", "--in", trace.string(), "--window", "0.9,0.2"}).code == 2);
}

TEST_CASE("analyze without a file exits 2") {
  CHECK(cli({"analyze", "--in", "/nonexistent/trace.csv"}).code == 2);
}

TEST_CASE("help exits 0") {
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"render", "--help"}).code == 0);
}
