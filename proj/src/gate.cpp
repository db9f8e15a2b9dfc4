#include "pideg/gate.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "pideg/errors.hpp"

namespace pideg {

GateSignal GateSignal::from_segments(const std::vector<GateSegment>& segments) {
  GateSignal g;
  for (const GateSegment& s : segments) {
    if (s.duration == 0) throw ConfigError("gate segment has zero duration");
    if (!g.segments_.empty() && g.segments_.back().state == s.state) {
      g.segments_.back().duration += s.duration;
    } else {
      g.segments_.push_back(s);
    }
    g.total_ += s.duration;
  }
  return g;
}

namespace {

// Offsets reported in ParseError are byte positions into the spec string.
[[noreturn]] void fail(const std::string& what, std::size_t pos) {
  throw ParseError("gate spec: " + what, pos);
}

}  // namespace

GateSignal GateSignal::parse(std::string_view spec, double fs) {
  if (!(fs > 0.0) || !std::isfinite(fs)) throw ConfigError("sample rate must be finite and positive");
  if (spec.empty()) fail("empty spec", 0);

  std::vector<GateSegment> segs;
  std::size_t pos = 0;
  for (;;) {
    KeyState state;
    if (spec.compare(pos, 3, "on:") == 0) {
      state = KeyState::On;
      pos += 3;
    } else if (spec.compare(pos, 4, "off:") == 0) {
      state = KeyState::Off;
      pos += 4;
    } else {
      fail("expected \"on:\" or \"off:\"", pos);
    }

    double seconds = 0.0;
    const char* begin = spec.data() + pos;
    const char* end = spec.data() + spec.size();
    auto [next, ec] = std::from_chars(begin, end, seconds);
    if (ec != std::errc() || next == begin) fail("expected a duration in seconds", pos);
    if (!std::isfinite(seconds) || seconds < 0.0) fail("duration must be finite and non-negative", pos);

    double samples_f = std::round(seconds * fs);
    auto samples = static_cast<long long>(std::llround(seconds * fs));
    if (samples_f > 1e18) fail("duration overflows the sample counter", pos);
    if (samples <= 0) fail("duration rounds to zero samples", pos);

    segs.push_back({state, static_cast<std::size_t>(samples)});
    pos = static_cast<std::size_t>(next - spec.data());

    if (pos == spec.size()) break;
    if (spec[pos] != ',') fail("expected \",\" between segments", pos);
    ++pos;
    if (pos == spec.size()) fail("trailing comma", pos);
  }
  return from_segments(segs);
}

std::vector<GateSample> GateSignal::samples() const {
  std::vector<GateSample> out;
  out.reserve(total_);
  for (Cursor c = cursor(); !c.done();) out.push_back(c.next());
  return out;
}

}  // namespace pideg
