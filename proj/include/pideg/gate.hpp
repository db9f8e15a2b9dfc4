#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace pideg {

enum class KeyState : std::uint8_t { Off = 0, On = 1 };

struct GateSegment {
  KeyState state;
  std::size_t duration;  // samples, >= 1
};

// One sample of an iterated gate.
struct GateSample {
  KeyState state;
  std::size_t samples_in_phase;  // 0 at the first sample of a segment
  bool is_transition;            // first sample of every segment after the first
};

/// A binary key-on/key-off stream, stored as run-length segments.
/// Adjacent segments always alternate state; same-state runs are merged at
/// construction, so transitions coincide with segment boundaries.
class GateSignal {
 public:
  /// Builds a gate from explicit segments. Zero-length segments are rejected.
  static GateSignal from_segments(const std::vector<GateSegment>& segments);

  /// Parses the mini-language `("on"|"off") ":" seconds ("," ...)`, e.g.
  /// "on:1,off:0.5". Durations are converted to whole samples with
  /// round-half-away-from-zero; a segment that rounds to zero samples is an
  /// error, as is anything that deviates from the grammar.
  static GateSignal parse(std::string_view spec, double fs);

  const std::vector<GateSegment>& segments() const { return segments_; }
  std::size_t total_samples() const { return total_; }

  /// Sequential per-sample reader.
  class Cursor {
   public:
    explicit Cursor(const GateSignal& g) : gate_(&g) {}
    bool done() const { return seg_ >= gate_->segments_.size(); }
    GateSample next() {
      const GateSegment& s = gate_->segments_[seg_];
      GateSample out{s.state, offset_, offset_ == 0 && seg_ > 0};
      if (++offset_ == s.duration) {
        offset_ = 0;
        ++seg_;
      }
      return out;
    }

   private:
    const GateSignal* gate_;
    std::size_t seg_ = 0;
    std::size_t offset_ = 0;
  };

  Cursor cursor() const { return Cursor(*this); }

  // Fully expanded gate; convenient for tests and analysis, not for long runs.
  std::vector<GateSample> samples() const;

 private:
  std::vector<GateSegment> segments_;
  std::size_t total_ = 0;
};

}  // namespace pideg
