#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "pideg/gate.hpp"

namespace pideg {

// Leader-curve families. All emit values in [0, 1]; key-on curves rise toward
// 1 and key-off curves fall toward 0.

struct InverseExpLc {
  double kr = 100.0;  // rise rate, 1/s
  double kf = 100.0;  // fall rate, 1/s
};

struct TrapezoidLc {
  double kr = 100.0;  // rise slope, 1/s
  double kf = 100.0;  // fall slope, 1/s
};

// A pre-rendered curve indexed by absolute sample number; the gate is ignored.
struct ExternalLc {
  std::vector<double> samples;
};

struct AdsrLc {
  double attack_s = 0.01;
  double decay_s = 0.1;
  double sustain = 0.7;
  double release_s = 0.2;
};

using LcSource = std::variant<InverseExpLc, TrapezoidLc, ExternalLc, AdsrLc>;

/// Throws ConfigError on out-of-range parameters (non-positive rates,
/// sustain outside [0,1], external samples outside [0,1] or non-finite).
void validate_lc(const LcSource& src);

// Phase-local closed forms, measured from the saturated origin (0 for key-on,
// 1 for key-off). `n` counts samples since the phase began.
double lc_inverse_exp(std::size_t n, KeyState phase, double kr, double kf, double fs);
double lc_trapezoid(std::size_t n, KeyState phase, double kr, double kf, double fs);

// Rebased variants: the curve departs from `from`, the value emitted just
// before the transition, so retriggers never discontinue the leader.
double lc_inverse_exp_from(std::size_t n, KeyState phase, double from, double kr, double kf, double fs);
double lc_trapezoid_from(std::size_t n, KeyState phase, double from, double kr, double kf, double fs);

// ADSR evaluated at `t` seconds into the phase. Key-on runs attack to 1 then
// decays to sustain; key-off releases from `from` to 0 over release_s.
double lc_adsr(double t, KeyState phase, const AdsrLc& p, double from);

/// Stateless dispatch over the variants at saturated phase origins (key-on
/// rises from 0, key-off falls from 1; ADSR release falls from sustain).
/// External sources index by absolute sample number and ignore the phase;
/// an out-of-range index is a ConfigError.
double lc_value(const LcSource& src, std::size_t n_global, KeyState phase, std::size_t n_in_phase, double fs);

/// Stateful evaluator that applies the rebasing rule across transitions.
/// A cold start behaves as a key-off phase that has already reached 0.
class LcEvaluator {
 public:
  LcEvaluator(const LcSource& src, double fs) : src_(&src), fs_(fs) {}

  /// Emits the leader value for one sample. `transition` must be true on the
  /// first sample of every phase except the initial one.
  double next(KeyState phase, std::size_t n_in_phase, std::size_t n_global, bool transition);

 private:
  const LcSource* src_;
  double fs_;
  double from_ = 0.0;  // value at the most recent transition
  double last_ = 0.0;  // most recently emitted value
};

}  // namespace pideg
