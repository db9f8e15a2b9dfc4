#include "pideg/lc.hpp"

#include <algorithm>
#include <cmath>

#include "pideg/errors.hpp"

namespace pideg {

namespace {

void require_rate(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ConfigError(std::string(name) + " must be finite and positive");
  }
}

}  // namespace

void validate_lc(const LcSource& src) {
  struct Visitor {
    void operator()(const InverseExpLc& p) const {
      require_rate(p.kr, "kr");
      require_rate(p.kf, "kf");
    }
    void operator()(const TrapezoidLc& p) const {
      require_rate(p.kr, "kr");
      require_rate(p.kf, "kf");
    }
    void operator()(const ExternalLc& p) const {
      if (p.samples.empty()) throw ConfigError("external leader curve is empty");
      for (double v : p.samples) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
          throw ConfigError("external leader curve sample outside [0, 1]");
        }
      }
    }
    void operator()(const AdsrLc& p) const {
      if (!std::isfinite(p.attack_s) || p.attack_s < 0.0) throw ConfigError("attack must be non-negative");
      if (!std::isfinite(p.decay_s) || p.decay_s < 0.0) throw ConfigError("decay must be non-negative");
      if (!std::isfinite(p.release_s) || p.release_s < 0.0) throw ConfigError("release must be non-negative");
      if (!std::isfinite(p.sustain) || p.sustain < 0.0 || p.sustain > 1.0) {
        throw ConfigError("sustain must lie in [0, 1]");
      }
    }
  };
  std::visit(Visitor{}, src);
}

double lc_inverse_exp_from(std::size_t n, KeyState phase, double from, double kr, double kf, double fs) {
  double t = static_cast<double>(n) / fs;
  if (phase == KeyState::On) return 1.0 - (1.0 - from) * std::exp(-kr * t);
  return from * std::exp(-kf * t);
}

double lc_inverse_exp(std::size_t n, KeyState phase, double kr, double kf, double fs) {
  return lc_inverse_exp_from(n, phase, phase == KeyState::On ? 0.0 : 1.0, kr, kf, fs);
}

double lc_trapezoid_from(std::size_t n, KeyState phase, double from, double kr, double kf, double fs) {
  double t = static_cast<double>(n) / fs;
  if (phase == KeyState::On) return std::min(1.0, from + kr * t);
  return std::max(0.0, from - kf * t);
}

double lc_trapezoid(std::size_t n, KeyState phase, double kr, double kf, double fs) {
  return lc_trapezoid_from(n, phase, phase == KeyState::On ? 0.0 : 1.0, kr, kf, fs);
}

double lc_adsr(double t, KeyState phase, const AdsrLc& p, double from) {
  if (phase == KeyState::Off) {
    if (p.release_s <= 0.0 || t >= p.release_s) return 0.0;
    return from * (1.0 - t / p.release_s);
  }
  if (t < p.attack_s) {
    return from + (1.0 - from) * (t / p.attack_s);
  }
  double td = t - p.attack_s;
  if (p.decay_s <= 0.0 || td >= p.decay_s) return p.sustain;
  return 1.0 + (p.sustain - 1.0) * (td / p.decay_s);
}

double lc_value(const LcSource& src, std::size_t n_global, KeyState phase, std::size_t n_in_phase, double fs) {
  struct Visitor {
    std::size_t n_global;
    KeyState phase;
    std::size_t n_in_phase;
    double fs;
    double operator()(const InverseExpLc& p) const {
      return lc_inverse_exp(n_in_phase, phase, p.kr, p.kf, fs);
    }
    double operator()(const TrapezoidLc& p) const {
      return lc_trapezoid(n_in_phase, phase, p.kr, p.kf, fs);
    }
    double operator()(const ExternalLc& p) const {
      if (n_global >= p.samples.size()) throw ConfigError("external leader curve index out of range");
      return p.samples[n_global];
    }
    double operator()(const AdsrLc& p) const {
      double from = phase == KeyState::On ? 0.0 : p.sustain;
      return lc_adsr(static_cast<double>(n_in_phase) / fs, phase, p, from);
    }
  };
  return std::visit(Visitor{n_global, phase, n_in_phase, fs}, src);
}

double LcEvaluator::next(KeyState phase, std::size_t n_in_phase, std::size_t n_global, bool transition) {
  if (transition) from_ = last_;
  double t = static_cast<double>(n_in_phase) / fs_;
  struct Visitor {
    KeyState phase;
    std::size_t n_in_phase;
    std::size_t n_global;
    double t;
    double from;
    double fs;
    double operator()(const InverseExpLc& p) const {
      return lc_inverse_exp_from(n_in_phase, phase, from, p.kr, p.kf, fs);
    }
    double operator()(const TrapezoidLc& p) const {
      return lc_trapezoid_from(n_in_phase, phase, from, p.kr, p.kf, fs);
    }
    double operator()(const ExternalLc& p) const {
      return p.samples[std::min(n_global, p.samples.size() - 1)];
    }
    double operator()(const AdsrLc& p) const { return lc_adsr(t, phase, p, from); }
  };
  last_ = std::visit(Visitor{phase, n_in_phase, n_global, t, from_, fs_}, *src_);
  return last_;
}

}  // namespace pideg
