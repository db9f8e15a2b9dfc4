#include "pideg/engine.hpp"

#include <algorithm>
#include <cmath>

#include "pideg/errors.hpp"

namespace pideg {

namespace {

void require_gain(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ConfigError(std::string(name) + " must be finite and non-negative");
  }
}

}  // namespace

PidegParams normalize_params(const PidegParams& in) {
  PidegParams p = in;
  require_gain(p.kp, "kp");
  require_gain(p.ki, "ki");
  require_gain(p.kd, "kd");
  if (p.gain_ceiling) {
    double c = *p.gain_ceiling;
    if (!std::isfinite(c) || c <= 0.0) throw ConfigError("gain ceiling must be finite and positive");
    p.kp = std::min(p.kp, c);
    p.ki = std::min(p.ki, c);
    p.kd = std::min(p.kd, c);
  }
  if (p.i_disable_after_keyoff && *p.i_disable_after_keyoff == 0) {
    throw ConfigError("integral disable timer must be at least 1 sample");
  }
  if (p.d_disable_after_keyoff && *p.d_disable_after_keyoff == 0) {
    throw ConfigError("derivative disable timer must be at least 1 sample");
  }
  if (p.takeover) {
    const TakeoverConfig& t = *p.takeover;
    if (t.length == 0) throw ConfigError("takeover length must be at least 1 sample");
    if (!std::isfinite(t.eo_threshold) || t.eo_threshold <= 0.0 || t.eo_threshold >= 1.0) {
      throw ConfigError("takeover threshold must lie in (0, 1)");
    }
  }
  return p;
}

Gains effective_gains(const PidegParams& p, KeyState phase, std::size_t samples_in_phase) {
  Gains g{p.kp, p.ki, p.kd};
  if (phase == KeyState::Off) {
    if (p.i_disable_after_keyoff && samples_in_phase >= *p.i_disable_after_keyoff) g.ki = 0.0;
    if (p.d_disable_after_keyoff && samples_in_phase >= *p.d_disable_after_keyoff) g.kd = 0.0;
  }
  return g;
}

double clamp_eo(double v) { return std::clamp(v, 0.0, 1.0); }

double pid_step(EngineState& st, double e_n, const PidegParams& p, double fs) {
  if (!std::isfinite(e_n)) throw NumericError("error input is not finite", 0);
  double c = st.c_prev + p.kp * (e_n - st.e_prev) + (p.ki / fs) * e_n +
             p.kd * fs * (e_n - 2.0 * st.e_prev + st.e_prev2);
  if (!std::isfinite(c)) throw NumericError("controller output is not finite", 0);
  st.e_prev2 = st.e_prev;
  st.e_prev = e_n;
  st.c_prev = p.windup ? clamp_eo(c) : c;
  return c;
}

bool takeover_should_trigger(const TakeoverConfig& cfg, std::size_t samples_in_keyoff, double eo) {
  return samples_in_keyoff > cfg.min_keyoff_samples && eo < cfg.eo_threshold;
}

double takeover_sample(const TakeoverConfig& cfg, double start, std::size_t k) {
  if (k >= cfg.length) throw ConfigError("takeover index past end of stream");
  if (k + 1 == cfg.length) return 0.0;
  return start * std::exp(-7.0 * static_cast<double>(k) / static_cast<double>(cfg.length - 1));
}

EnvelopeTrace run_envelope(const GateSignal& gate, const LcSource& lc, const PidegParams& params, double fs) {
  if (!(fs > 0.0) || !std::isfinite(fs)) throw ConfigError("sample rate must be finite and positive");
  PidegParams p = normalize_params(params);
  validate_lc(lc);
  if (const auto* ext = std::get_if<ExternalLc>(&lc)) {
    if (ext->samples.size() < gate.total_samples()) {
      throw ConfigError("external leader curve shorter than the gate");
    }
  }

  EnvelopeTrace trace;
  trace.fs = fs;
  std::size_t n_total = gate.total_samples();
  trace.gate.reserve(n_total);
  trace.lc.reserve(n_total);
  trace.fc.reserve(n_total);
  trace.eo.reserve(n_total);

  EngineState st;
  LcEvaluator lc_eval(lc, fs);
  GateSignal::Cursor cur = gate.cursor();

  for (std::size_t n = 0; n < n_total; ++n) {
    GateSample gs = cur.next();
    // Engines start keyed off, so a gate whose first segment is key-on
    // retriggers at sample 0 just like any later off-to-on edge.
    bool transition = n == 0 ? gs.state != st.phase : gs.is_transition;
    bool takeover_done =
        p.takeover && !st.takeover_active && st.takeover_index == p.takeover->length;

    if (transition && gs.state == KeyState::On && (st.takeover_active || takeover_done)) {
      st.reset();
      takeover_done = false;
    }
    st.phase = gs.state;
    st.samples_in_phase = gs.samples_in_phase;

    double lc_n = lc_eval.next(gs.state, gs.samples_in_phase, n, transition);

    double fc_n;
    double eo_n;
    if (st.takeover_active) {
      double v = takeover_sample(*p.takeover, st.takeover_start_value, st.takeover_index);
      ++st.takeover_index;
      if (st.takeover_index >= p.takeover->length) st.takeover_active = false;
      fc_n = v;
      eo_n = v;
    } else if (takeover_done) {
      // Stream exhausted: hold silence until the next key-on resets the state.
      fc_n = 0.0;
      eo_n = 0.0;
    } else {
      Gains g = effective_gains(p, gs.state, gs.samples_in_phase);
      double e = lc_n - st.c_prev;
      st.i_accum += (g.ki / fs) * e;
      double u = g.kp * e + st.i_accum + g.kd * fs * (e - st.e_prev);
      fc_n = st.c_prev + u;
      if (!std::isfinite(fc_n)) throw NumericError("follower value is not finite", n);
      if (p.windup) fc_n = clamp_eo(fc_n);
      st.e_prev2 = st.e_prev;
      st.e_prev = e;
      st.c_prev = fc_n;
      eo_n = clamp_eo(fc_n);
      if (p.takeover && gs.state == KeyState::Off &&
          takeover_should_trigger(*p.takeover, gs.samples_in_phase, eo_n)) {
        st.takeover_active = true;
        st.takeover_index = 0;
        st.takeover_start_value = eo_n;
      }
    }

    trace.gate.push_back(static_cast<std::uint8_t>(gs.state));
    trace.lc.push_back(lc_n);
    trace.fc.push_back(fc_n);
    trace.eo.push_back(eo_n);
  }
  return trace;
}

}  // namespace pideg
