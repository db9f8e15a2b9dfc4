#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pideg/gate.hpp"
#include "pideg/lc.hpp"

namespace pideg {

/// Tail takeover: once the key has been off long enough and the output has
/// fallen below a threshold, the recursion is replaced by a fixed-length
/// exponential fade that lands exactly on zero.
struct TakeoverConfig {
  std::size_t min_keyoff_samples = 100;
  double eo_threshold = 0.02;
  std::size_t length = 250;
};

struct PidegParams {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  bool windup = false;  // when set, the follower state itself is clamped to [0, 1]
  std::optional<double> gain_ceiling;
  std::optional<std::size_t> i_disable_after_keyoff;  // samples into key-off
  std::optional<std::size_t> d_disable_after_keyoff;
  std::optional<TakeoverConfig> takeover;
};

/// Validates and canonicalizes parameters: gains must be finite and
/// non-negative, a gain ceiling clamps all three gains up front, disable
/// counters must be at least 1, takeover length at least 1 and threshold in
/// (0, 1). Throws ConfigError.
PidegParams normalize_params(const PidegParams& p);

struct Gains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

/// Gains after the key-off disable timers are applied: integral and
/// derivative action switch off once the key has been off for the configured
/// number of samples.
Gains effective_gains(const PidegParams& p, KeyState phase, std::size_t samples_in_phase);

struct EngineState {
  double e_prev = 0.0;
  double e_prev2 = 0.0;
  double c_prev = 0.0;  // previous controller output (the follower value)
  double i_accum = 0.0;
  KeyState phase = KeyState::Off;
  std::size_t samples_in_phase = 0;
  bool takeover_active = false;
  std::size_t takeover_index = 0;
  double takeover_start_value = 0.0;

  void reset() { *this = EngineState{}; }
};

/// Saturates to the envelope range [0, 1].
double clamp_eo(double v);

/// One step of the velocity-form recursion
///   c[n] = c[n-1] + kp (e[n] - e[n-1]) + (ki/fs) e[n] + kd fs (e[n] - 2 e[n-1] + e[n-2])
/// updating the error history and c_prev in place and returning c[n]. When
/// windup protection is on, the stored c[n] is clamped to [0, 1]. Throws
/// NumericError if the input error or the output is not finite.
double pid_step(EngineState& st, double e_n, const PidegParams& p, double fs);

bool takeover_should_trigger(const TakeoverConfig& cfg, std::size_t samples_in_keyoff, double eo);

/// k-th sample of the takeover stream: start * exp(-7 k / (length - 1)),
/// with the final sample forced to exactly 0. k must be < length.
double takeover_sample(const TakeoverConfig& cfg, double start, std::size_t k);

struct EnvelopeTrace {
  std::vector<std::uint8_t> gate;  // 0 or 1
  std::vector<double> lc;
  std::vector<double> fc;
  std::vector<double> eo;
  double fs = 0.0;

  std::size_t size() const { return eo.size(); }
};

/// Runs the full engine over a gate: leader evaluation, PID follower with
/// disable timers and optional windup clamping, output clamping, and tail
/// takeover. Deterministic and sample-accurate for identical inputs.
EnvelopeTrace run_envelope(const GateSignal& gate, const LcSource& lc, const PidegParams& params, double fs);

}  // namespace pideg
