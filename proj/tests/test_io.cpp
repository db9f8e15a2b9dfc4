#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pideg/engine.hpp"
#include "pideg/errors.hpp"
#include "pideg/gate.hpp"
#include "pideg/io.hpp"

using namespace pideg;

namespace {

EnvelopeTrace tiny_trace() {
  EnvelopeTrace t;
  t.fs = 1000.0;
  t.gate = {1};
  t.lc = {0.0};
  t.fc = {0.0};
  t.eo = {0.0};
  return t;
}

std::uint32_t read_u32(const std::string& bytes, std::size_t at) {
  return static_cast<std::uint8_t>(bytes[at]) | static_cast<std::uint8_t>(bytes[at + 1]) << 8 |
         static_cast<std::uint8_t>(bytes[at + 2]) << 16 |
         static_cast<std::uint8_t>(bytes[at + 3]) << 24;
}

std::uint16_t read_u16(const std::string& bytes, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<std::uint8_t>(bytes[at]) |
                                    static_cast<std::uint8_t>(bytes[at + 1]) << 8);
}

}  // namespace

TEST_CASE("csv header and first row") {
  std::ostringstream out;
  write_trace_csv(tiny_trace(), out);
  CHECK(out.str() == "n,t,gate,lc,fc,eo\n0,0.00000000,1,0,0,0\n");
}

TEST_CASE("csv emits one line per sample plus the header") {
  GateSignal g = GateSignal::parse("on:0.05,off:0.05", 1000.0);
  PidegParams p;
  p.kp = 0.3;
  EnvelopeTrace t = run_envelope(g, InverseExpLc{100, 100}, p, 1000.0);
  std::ostringstream out;
  write_trace_csv(t, out);
  std::size_t lines = 0;
  for (char c : out.str()) lines += c == '\n';
  CHECK(lines == t.size() + 1);
}

TEST_CASE("csv round-trip is bit-exact") {
  GateSignal g = GateSignal::parse("on:0.2,off:0.2", 1000.0);
  PidegParams p;
  p.kp = 0.17;
  p.ki = 0.013;
  EnvelopeTrace t = run_envelope(g, InverseExpLc{100, 100}, p, 1000.0);

  std::ostringstream out;
  write_trace_csv(t, out);
  std::istringstream in(out.str());
  EnvelopeTrace back = read_trace_csv(in);

  REQUIRE(back.size() == t.size());
  CHECK(back.fs == t.fs);
  for (std::size_t n = 0; n < t.size(); ++n) {
    CHECK(back.lc[n] == t.lc[n]);
    CHECK(back.fc[n] == t.fc[n]);
    CHECK(back.eo[n] == t.eo[n]);
    CHECK(back.gate[n] == t.gate[n]);
  }
}

TEST_CASE("csv reader rejects malformed input") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return read_trace_csv(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("wrong,header\n"), ParseError);
  CHECK_THROWS_AS(parse("n,t,gate,lc,fc,eo\n0,0.0,1,0,0\n"), ParseError);          // missing column
  CHECK_THROWS_AS(parse("n,t,gate,lc,fc,eo\n0,0.0,2,0,0,0\n1,0.001,1,0,0,0\n"), ParseError);  // bad gate
  CHECK_THROWS_AS(parse("n,t,gate,lc,fc,eo\n0,0.0,1,x,0,0\n1,0.001,1,0,0,0\n"), ParseError);  // bad number
  CHECK_THROWS_AS(parse("n,t,gate,lc,fc,eo\n0,0.0,1,0,0,0\n"), ParseError);        // single data row
  try {
    parse("n,t,gate,lc,fc,eo\n0,0.00000000,1,0,0,0\n\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 3);  // 1-based line number of the empty row
  }
}

TEST_CASE("single-column leader loading") {
  std::istringstream plain("0.0\n0.5\n1.0");
  ExternalLc lc = load_lc_csv(plain);
  REQUIRE(lc.samples.size() == 3);
  CHECK(lc.samples[1] == 0.5);

  std::istringstream with_header("lc\n0.1");
  CHECK(load_lc_csv(with_header).samples == std::vector<double>{0.1});

  std::istringstream out_of_range("1.5");
  try {
    load_lc_csv(out_of_range);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 1);
  }

  std::istringstream bad_later("0.5\nbogus\n");
  CHECK_THROWS_AS(load_lc_csv(bad_later), ParseError);
}

TEST_CASE("render config validation") {
  RenderConfig ok;
  CHECK_NOTHROW(validate_render_config(ok));
  RenderConfig nyquist{44100, 30000.0, 1.0};
  CHECK_THROWS_AS(validate_render_config(nyquist), ConfigError);
  RenderConfig amp{44100, 440.0, 0.0};
  CHECK_THROWS_AS(validate_render_config(amp), ConfigError);
  RenderConfig silent_rate{0, 440.0, 1.0};
  CHECK_THROWS_AS(validate_render_config(silent_rate), ConfigError);
}

TEST_CASE("wav header arithmetic and silence") {
  GateSignal g = GateSignal::parse("on:0.1", 1000.0);
  PidegParams zero;
  EnvelopeTrace t = run_envelope(g, InverseExpLc{100, 100}, zero, 1000.0);

  std::ostringstream out;
  write_wav(t, RenderConfig{44100, 440.0, 1.0}, out);
  std::string bytes = out.str();

  REQUIRE(bytes.size() >= 44);
  CHECK(bytes.substr(0, 4) == "RIFF");
  CHECK(bytes.substr(8, 8) == "WAVEfmt ");
  CHECK(read_u16(bytes, 20) == 1);      // PCM
  CHECK(read_u16(bytes, 22) == 1);      // mono
  CHECK(read_u32(bytes, 24) == 44100);  // sample rate
  CHECK(read_u32(bytes, 28) == 88200);  // byte rate
  CHECK(read_u16(bytes, 32) == 2);      // block align
  CHECK(read_u16(bytes, 34) == 16);     // bits per sample
  CHECK(bytes.substr(36, 4) == "data");

  std::uint32_t data_bytes = read_u32(bytes, 40);
  CHECK(bytes.size() == 44 + data_bytes);
  // 0.1 s at 44100 Hz, two bytes per frame, within one frame of exact
  CHECK(std::abs(static_cast<long>(data_bytes) - 8820L) <= 2);
  for (std::size_t i = 44; i < bytes.size(); ++i) CHECK(bytes[i] == 0);  // silent envelope
}

TEST_CASE("wav peak hits full scale on the sine crest") {
  EnvelopeTrace t;
  t.fs = 1000.0;
  for (int n = 0; n < 100; ++n) {
    t.gate.push_back(1);
    t.lc.push_back(1.0);
    t.fc.push_back(1.0);
    t.eo.push_back(1.0);
  }
  std::ostringstream out;
  write_wav(t, RenderConfig{44100, 441.0, 1.0}, out);
  std::string bytes = out.str();
  std::int16_t peak = 0;
  bool any_negative = false;
  for (std::size_t i = 44; i + 1 < bytes.size(); i += 2) {
    auto s = static_cast<std::int16_t>(read_u16(bytes, i));
    peak = std::max(peak, s);
    any_negative = any_negative || s < 0;
  }
  CHECK(peak == 32767);
  CHECK(any_negative);
}

TEST_CASE("atomic writes never leave partial files") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pideg_io_test";
  fs::create_directories(dir);
  fs::path target = dir / "out.txt";
  fs::remove(target);

  CHECK_THROWS_AS(write_file_atomic(target,
                                    [](std::ostream& os) {
                                      os << "partial";
                                      throw Error("simulated failure");
                                    }),
                  Error);
  CHECK_FALSE(fs::exists(target));
  CHECK_FALSE(fs::exists(dir / "out.txt.tmp"));

  write_file_atomic(target, [](std::ostream& os) { os << "done"; });
  std::ifstream in(target);
  std::string content;
  std::getline(in, content);
  CHECK(content == "done");
  fs::remove_all(dir);
}
