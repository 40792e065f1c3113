#include "twobody/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace twobody {

void adam_step(AdamState& state, std::vector<double>& theta,
               const std::vector<double>& grad, double eta) {
  if (theta.size() != grad.size() || theta.size() != state.m.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  const AdamParams& p = state.params;
  state.step += 1;
  const double bc1 = 1.0 - std::pow(p.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(p.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < theta.size(); ++k) {
    state.m[k] = p.beta1 * state.m[k] + (1.0 - p.beta1) * grad[k];
    state.v[k] = p.beta2 * state.v[k] + (1.0 - p.beta2) * grad[k] * grad[k];
    const double mhat = state.m[k] / bc1;
    const double vhat = state.v[k] / bc2;
    theta[k] -= eta * mhat / (std::sqrt(vhat) + p.eps);
  }
}

}  // namespace twobody
