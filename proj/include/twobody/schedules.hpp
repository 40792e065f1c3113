#pragma once

namespace twobody {

/// Piecewise-linear penalty ramp over the normalized epoch fraction t/T:
/// constant lambda_start before f_start, linear up to lambda_end by f_end,
/// constant after.
struct KlRampSchedule {
  double lambda_start = 0.10;
  double lambda_end = 0.30;
  double f_start = 0.15;
  double f_end = 0.85;
};
double lambda_kl(double t, double total, const KlRampSchedule& s);

/// Warmup-hold-exponential profile: linear from eta_start to eta_peak over
/// [0, f_warm], flat through the hold, then exponential decay with the rate
/// chosen so eta(T) = eta_end exactly.
struct LrSchedule {
  double eta_start = 0.03;
  double eta_peak = 0.10;
  double eta_end = 0.01;
  double f_warm = 0.10;
  double f_hold = 0.40;
};
double learning_rate(double t, double total, const LrSchedule& s);

}  // namespace twobody
