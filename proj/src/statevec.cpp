#include "twobody/statevec.hpp"

#include <bit>
#include <cstring>
#include <ostream>

#include "twobody/prng.hpp"

namespace twobody {

CircuitConfig::CircuitConfig(int n_vars, int layer_count) {
  if (n_vars < 2) throw std::invalid_argument("circuit: need at least 2 variables");
  if (layer_count < 0) throw std::invalid_argument("circuit: negative depth");
  n = n_vars;
  addr_bits = ceil_log2(n_vars);
  n_qubits = 2 * (addr_bits + 1);
  depth = layer_count;
}

int CircuitConfig::two_qubit_gate_count() const {
  return depth * (n_qubits / 2 + (n_qubits - 1) / 2);
}

ParameterTensor ParameterTensor::zeros(const CircuitConfig& cfg) {
  ParameterTensor t;
  t.depth = cfg.depth;
  t.n_qubits = cfg.n_qubits;
  t.theta.assign(static_cast<std::size_t>(cfg.depth) * cfg.n_qubits, 0.0);
  return t;
}

ParameterTensor ParameterTensor::gaussian(const CircuitConfig& cfg, double sigma,
                                          std::uint64_t seed) {
  ParameterTensor t = zeros(cfg);
  SplitMix64 rng(derive_stream(seed, 0x7468657461ull));  // "theta"
  for (auto& x : t.theta) x = sigma * standard_normal(rng);
  return t;
}

void dump_state_raw(std::span<const double> amplitudes, std::ostream& out) {
  static_assert(std::endian::native == std::endian::little,
                "raw state dump assumes a little-endian host");
  for (double a : amplitudes) {
    char buf[sizeof(double)];
    std::memcpy(buf, &a, sizeof(double));
    out.write(buf, sizeof(double));
  }
}

}  // namespace twobody
