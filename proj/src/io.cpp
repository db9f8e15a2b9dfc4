#include "pideg/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>

#include "pideg/errors.hpp"

namespace pideg {

namespace {

// Shortest decimal form that parses back to the same double.
void append_real(std::string& out, double v) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), end);
}

double parse_real(std::string_view text, std::size_t line) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [next, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || next != end) throw ParseError("expected a number", line);
  return v;
}

std::string_view next_field(std::string_view& row, std::size_t line) {
  std::size_t comma = row.find(',');
  if (comma == std::string_view::npos) throw ParseError("too few columns", line);
  std::string_view field = row.substr(0, comma);
  row.remove_prefix(comma + 1);
  return field;
}

}  // namespace

void write_trace_csv(const EnvelopeTrace& trace, std::ostream& out) {
  std::string block = "n,t,gate,lc,fc,eo\n";
  char tbuf[40];
  for (std::size_t n = 0; n < trace.size(); ++n) {
    block.append(std::to_string(n));
    std::snprintf(tbuf, sizeof tbuf, ",%.8f,", static_cast<double>(n) / trace.fs);
    block.append(tbuf);
    block.push_back(trace.gate[n] ? '1' : '0');
    block.push_back(',');
    append_real(block, trace.lc[n]);
    block.push_back(',');
    append_real(block, trace.fc[n]);
    block.push_back(',');
    append_real(block, trace.eo[n]);
    block.push_back('\n');
    if (block.size() > 1 << 20) {
      out.write(block.data(), static_cast<std::streamsize>(block.size()));
      block.clear();
    }
  }
  out.write(block.data(), static_cast<std::streamsize>(block.size()));
  out.flush();
  if (!out) throw Error("trace write failed");
}

EnvelopeTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  if (line != "n,t,gate,lc,fc,eo") throw ParseError("unexpected header", 1);

  EnvelopeTrace trace;
  double t_last = 0.0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) throw ParseError("empty row", lineno);
    std::string_view row = line;
    next_field(row, lineno);  // n column is redundant with the row index
    t_last = parse_real(next_field(row, lineno), lineno);
    std::string_view g = next_field(row, lineno);
    if (g != "0" && g != "1") throw ParseError("gate must be 0 or 1", lineno);
    trace.gate.push_back(g == "1" ? 1 : 0);
    trace.lc.push_back(parse_real(next_field(row, lineno), lineno));
    trace.fc.push_back(parse_real(next_field(row, lineno), lineno));
    trace.eo.push_back(parse_real(row, lineno));
  }
  if (trace.size() < 2) throw ParseError("trace needs at least 2 data rows", lineno);
  double fs = static_cast<double>(trace.size() - 1) / t_last;
  double rounded = std::round(fs);
  trace.fs = std::abs(fs - rounded) < 1e-3 ? rounded : fs;
  return trace;
}

ExternalLc load_lc_csv(std::istream& in) {
  ExternalLc lc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) throw ParseError("empty row", lineno);
    double v = 0.0;
    const char* begin = line.data();
    const char* end = begin + line.size();
    auto [next, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || next != end) {
      if (lineno == 1) continue;  // header line
      throw ParseError("expected a number", lineno);
    }
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ParseError("leader value outside [0, 1]", lineno);
    }
    lc.samples.push_back(v);
  }
  if (lc.samples.empty()) throw ParseError("no leader samples", lineno == 0 ? 1 : lineno);
  return lc;
}

void validate_render_config(const RenderConfig& cfg) {
  if (cfg.audio_fs == 0) throw ConfigError("audio sample rate must be positive");
  if (!std::isfinite(cfg.tone_hz) || cfg.tone_hz <= 0.0) {
    throw ConfigError("tone frequency must be finite and positive");
  }
  if (cfg.tone_hz >= cfg.audio_fs / 2.0) throw ConfigError("tone frequency must be below Nyquist");
  if (!std::isfinite(cfg.amplitude) || cfg.amplitude <= 0.0 || cfg.amplitude > 1.0) {
    throw ConfigError("amplitude must lie in (0, 1]");
  }
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

void write_wav(const EnvelopeTrace& trace, const RenderConfig& cfg, std::ostream& out) {
  validate_render_config(cfg);
  if (trace.size() == 0) throw ConfigError("empty trace");

  double ratio = trace.fs / cfg.audio_fs;
  auto frames = static_cast<std::size_t>(
      std::llround(static_cast<double>(trace.size()) * cfg.audio_fs / trace.fs));
  std::uint32_t data_bytes = static_cast<std::uint32_t>(frames * 2);

  std::string bytes;
  bytes.reserve(44 + data_bytes);
  bytes.append("RIFF");
  put_u32(bytes, 36 + data_bytes);
  bytes.append("WAVEfmt ");
  put_u32(bytes, 16);          // fmt chunk size
  put_u16(bytes, 1);           // PCM
  put_u16(bytes, 1);           // mono
  put_u32(bytes, cfg.audio_fs);
  put_u32(bytes, cfg.audio_fs * 2);  // byte rate
  put_u16(bytes, 2);                 // block align
  put_u16(bytes, 16);                // bits per sample
  bytes.append("data");
  put_u32(bytes, data_bytes);

  const double w = 2.0 * 3.14159265358979323846 * cfg.tone_hz / cfg.audio_fs;
  for (std::size_t k = 0; k < frames; ++k) {
    std::size_t idx = std::min(static_cast<std::size_t>(static_cast<double>(k) * ratio),
                               trace.size() - 1);
    double v = 32767.0 * cfg.amplitude * trace.eo[idx] * std::sin(w * static_cast<double>(k));
    auto s = static_cast<std::int16_t>(std::llround(v));
    put_u16(bytes, static_cast<std::uint16_t>(s));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error("wav write failed");
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string());
    try {
      writer(out);
    } catch (...) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot replace " + path.string());
  }
}

}  // namespace pideg
