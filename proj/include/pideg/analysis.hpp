#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace pideg {

struct OscillationReport {
  double mean_frequency_hz = 0.0;
  double mean_abs_deviation = 0.0;  // average |fc - lc| over the window
  double alternation_ratio = 0.0;
};

/// Fraction of interior samples whose neighboring first differences have
/// strictly opposite signs; 1.0 means the signal flips direction every
/// sample (oscillation at half the sampling rate). Needs length >= 3.
double alternation_ratio(std::span<const double> x);

/// Zero-crossing frequency estimate of a residual: sign changes divided by
/// twice the duration, where duration = (length - 1) / fs. Exact zeros carry
/// the previous sign forward and never count as crossings. Needs length >= 2.
double oscillation_frequency(std::span<const double> residual, double fs);

/// Earliest time t such that |eo[n] - target| <= tol for every n >= t * fs.
/// 0 when the whole trace qualifies; empty when even the final sample is out
/// of tolerance.
std::optional<double> settling_time(std::span<const double> eo, double target, double tol, double fs);

/// Largest jump between consecutive samples. Needs length >= 2.
double max_bump(std::span<const double> eo);

/// Whether the tail starting at keyoff_start goes quiet and stays quiet:
/// true iff the trace ends with at least min_quiet consecutive samples at or
/// below eps. A tail shorter than min_quiet samples cannot be judged and is
/// a ConfigError.
bool is_finite_envelope(std::span<const double> eo, std::size_t keyoff_start, double eps,
                        std::size_t min_quiet = 100);

/// Oscillation metrics over one window: frequency and mean absolute
/// deviation of the residual fc - lc, alternation measured on fc itself.
OscillationReport oscillation_report(std::span<const double> fc, std::span<const double> lc, double fs);

}  // namespace pideg
