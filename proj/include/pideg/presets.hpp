#pragma once

#include <string>
#include <vector>

#include "pideg/engine.hpp"
#include "pideg/lc.hpp"

namespace pideg {

/// One ready-to-run configuration of a preset family.
struct ExperimentPreset {
  std::string name;  // output basename, e.g. "fig11a"
  PidegParams params;
  LcSource lc;
  std::string gate_spec;
  double fs = 1000.0;
};

/// Built-in sweep families 11 through 17. Every preset shares the same
/// ambient setup (fs 1000, inverse-exponential leader with kr = kf = 100,
/// windup off, derivative action disabled 92 samples into key-off, gate
/// on:1,off:1) and varies only the gains. Derivative gains are stated as the
/// per-sample loop gain divided by fs, so kd * fs reproduces the documented
/// loop behavior. Unknown ids raise ConfigError.
std::vector<ExperimentPreset> figure_presets(int figure);

}  // namespace pideg
