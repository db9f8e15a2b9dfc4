#include "pideg/presets.hpp"

#include <string>

#include "pideg/errors.hpp"

namespace pideg {

namespace {

ExperimentPreset base(int figure, std::size_t index) {
  ExperimentPreset p;
  p.name = "fig" + std::to_string(figure) + static_cast<char>('a' + index);
  p.params.windup = false;
  p.params.d_disable_after_keyoff = 92;
  p.lc = InverseExpLc{100.0, 100.0};
  p.gate_spec = "on:1,off:1";
  p.fs = 1000.0;
  return p;
}

}  // namespace

std::vector<ExperimentPreset> figure_presets(int figure) {
  std::vector<ExperimentPreset> out;
  auto add = [&](double kp, double ki, double kd) {
    ExperimentPreset p = base(figure, out.size());
    p.params.kp = kp;
    p.params.ki = ki;
    p.params.kd = kd;
    out.push_back(std::move(p));
  };
  switch (figure) {
    case 11:  // P-mode sweep
      for (double kp : {1e-4, 1e-3, 1e-1, 2.0}) add(kp, 0.0, 0.0);
      break;
    case 12:  // I-mode sweep
      for (double ki : {1e-4, 1e-3, 1e-2, 1e-1}) add(0.0, ki, 0.0);
      break;
    case 13:  // D-mode sweep; loop gains 0.05, 0.1, 1
      for (double kd : {5e-5, 1e-4, 1e-3}) add(0.0, 0.0, kd);
      break;
    case 14:  // PI: fixed skeleton, ki sets oscillation frequency
      add(0.1, 1e-3, 0.0);
      add(0.1, 1e-1, 0.0);
      break;
    case 15:  // PD: negligible vs. near-critical derivative action
      add(0.1, 0.0, 1e-6);
      add(0.1, 0.0, 9e-4);
      break;
    case 16:  // ID: derivative opposing the integral lag
      add(0.0, 1e-3, 1e-6);
      add(0.0, 1e-3, 5e-4);
      break;
    case 17:  // full PID
      add(1e-3, 1e-4, 1e-6);
      add(1e-2, 1e-4, 1e-6);
      add(1e-3, 1e-3, 1e-6);
      add(1e-3, 1e-4, 1e-3);
      break;
    default:
      throw ConfigError("unknown figure id " + std::to_string(figure));
  }
  return out;
}

}  // namespace pideg
