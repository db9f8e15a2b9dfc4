#include "pideg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pideg/errors.hpp"

namespace pideg {

double alternation_ratio(std::span<const double> x) {
  if (x.size() < 3) throw ConfigError("alternation_ratio needs at least 3 samples");
  std::size_t flips = 0;
  for (std::size_t n = 1; n + 1 < x.size(); ++n) {
    double d0 = x[n] - x[n - 1];
    double d1 = x[n + 1] - x[n];
    if ((d0 > 0.0 && d1 < 0.0) || (d0 < 0.0 && d1 > 0.0)) ++flips;
  }
  return static_cast<double>(flips) / static_cast<double>(x.size() - 2);
}

double oscillation_frequency(std::span<const double> residual, double fs) {
  if (residual.size() < 2) throw ConfigError("oscillation_frequency needs at least 2 samples");
  int last_sign = 0;
  std::size_t crossings = 0;
  for (double v : residual) {
    int s = v > 0.0 ? 1 : v < 0.0 ? -1 : 0;
    if (s == 0) continue;  // exact zero is not a crossing
    if (last_sign != 0 && s != last_sign) ++crossings;
    last_sign = s;
  }
  double duration = static_cast<double>(residual.size() - 1) / fs;
  return static_cast<double>(crossings) / (2.0 * duration);
}

std::optional<double> settling_time(std::span<const double> eo, double target, double tol, double fs) {
  if (!(tol > 0.0) || !(tol < 1.0)) throw ConfigError("settling tolerance must lie in (0, 1)");
  if (eo.empty()) throw ConfigError("settling_time needs a non-empty trace");
  std::size_t n = eo.size();
  while (n > 0 && std::abs(eo[n - 1] - target) <= tol) --n;
  if (n == eo.size()) return std::nullopt;  // final sample already out of band
  return static_cast<double>(n) / fs;
}

double max_bump(std::span<const double> eo) {
  if (eo.size() < 2) throw ConfigError("max_bump needs at least 2 samples");
  double worst = 0.0;
  for (std::size_t n = 1; n < eo.size(); ++n) {
    worst = std::max(worst, std::abs(eo[n] - eo[n - 1]));
  }
  return worst;
}

bool is_finite_envelope(std::span<const double> eo, std::size_t keyoff_start, double eps,
                        std::size_t min_quiet) {
  if (keyoff_start >= eo.size()) throw ConfigError("key-off start past end of trace");
  std::size_t tail = eo.size() - keyoff_start;
  if (tail < min_quiet) throw ConfigError("key-off tail too short to judge");
  std::size_t quiet = 0;
  for (std::size_t n = eo.size(); n > keyoff_start; --n) {
    if (eo[n - 1] > eps) break;
    ++quiet;
  }
  return quiet >= min_quiet;
}

OscillationReport oscillation_report(std::span<const double> fc, std::span<const double> lc, double fs) {
  if (fc.size() != lc.size()) throw ConfigError("fc and lc windows differ in length");
  if (fc.size() < 3) throw ConfigError("oscillation_report needs at least 3 samples");
  std::vector<double> residual(fc.size());
  double mad = 0.0;
  for (std::size_t n = 0; n < fc.size(); ++n) {
    residual[n] = fc[n] - lc[n];
    mad += std::abs(residual[n]);
  }
  OscillationReport r;
  r.mean_abs_deviation = mad / static_cast<double>(fc.size());
  r.mean_frequency_hz = oscillation_frequency(residual, fs);
  r.alternation_ratio = alternation_ratio(fc);
  return r;
}

}  // namespace pideg
