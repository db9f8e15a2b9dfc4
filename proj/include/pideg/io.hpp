#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>

#include "pideg/engine.hpp"
#include "pideg/lc.hpp"

namespace pideg {

/// Writes the trace as CSV: header `n,t,gate,lc,fc,eo`, one row per sample,
/// t = n/fs with 8 fixed decimals, reals in shortest round-trip form, LF line
/// endings. Throws Error on stream failure.
void write_trace_csv(const EnvelopeTrace& trace, std::ostream& out);

/// Parses a trace written by write_trace_csv. The sample rate is recovered
/// from the final timestamp. Requires at least 2 data rows; malformed rows
/// raise ParseError with a 1-based line number.
EnvelopeTrace read_trace_csv(std::istream& in);

/// Loads a single-column CSV of leader values in [0, 1]; one optional header
/// line is skipped when it does not parse as a number.
ExternalLc load_lc_csv(std::istream& in);

struct RenderConfig {
  std::uint32_t audio_fs = 44100;
  double tone_hz = 440.0;
  double amplitude = 1.0;  // in (0, 1]
};

/// Throws ConfigError unless audio_fs > 0, 0 < tone_hz < audio_fs/2, and
/// amplitude in (0, 1].
void validate_render_config(const RenderConfig& cfg);

/// Renders the envelope as an amplitude-modulated sine tone: mono 16-bit PCM
/// RIFF/WAVE at cfg.audio_fs, envelope zero-order-held from trace.fs.
void write_wav(const EnvelopeTrace& trace, const RenderConfig& cfg, std::ostream& out);

/// Runs `writer` against a temporary file in the target directory, then
/// renames over `path`. On any failure the temporary is removed and the
/// destination is left untouched.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace pideg
