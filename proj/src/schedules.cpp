#include "twobody/schedules.hpp"

#include <cmath>

namespace twobody {

double lambda_kl(double t, double total, const KlRampSchedule& s) {
  const double frac = total > 0.0 ? t / total : 1.0;
  if (frac < s.f_start) return s.lambda_start;
  if (frac >= s.f_end) return s.lambda_end;  // also covers a degenerate f_start == f_end step
  return s.lambda_start +
         (s.lambda_end - s.lambda_start) * (frac - s.f_start) / (s.f_end - s.f_start);
}

double learning_rate(double t, double total, const LrSchedule& s) {
  if (t >= total) return s.eta_end;
  const double frac = total > 0.0 ? t / total : 1.0;
  if (frac < s.f_warm) return s.eta_start + (s.eta_peak - s.eta_start) * frac / s.f_warm;
  const double decay_start = s.f_warm + s.f_hold;
  if (frac < decay_start) return s.eta_peak;
  const double span = 1.0 - decay_start;
  if (span <= 0.0) return s.eta_peak;  // hold runs to the end
  const double kappa = std::log(s.eta_peak / s.eta_end);
  return s.eta_peak * std::exp(-kappa * (frac - decay_start) / span);
}

}  // namespace twobody
