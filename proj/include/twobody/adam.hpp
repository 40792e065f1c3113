#pragma once

#include <cstdint>
#include <vector>

namespace twobody {

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::int64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;
  AdamParams params;

  explicit AdamState(std::size_t size, AdamParams p = {})
      : m(size, 0.0), v(size, 0.0), params(p) {}
};

/// Standard bias-corrected Adam update with a per-step learning rate.
void adam_step(AdamState& state, std::vector<double>& theta,
               const std::vector<double>& grad, double eta);

}  // namespace twobody
