#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "twobody/kernels.hpp"
#include "twobody/util.hpp"

namespace twobody {

/// Register geometry for an n-variable instance: two address registers I and
/// J of ceil(log2 n) qubits each and two readout qubits A and B, ordered
/// (I, A, J, B) with qubit 0 the most significant bit of the state index.
struct CircuitConfig {
  int n = 0;
  int addr_bits = 0;
  int n_qubits = 0;
  int depth = 0;

  CircuitConfig() = default;
  CircuitConfig(int n_vars, int layer_count);

  std::size_t dim() const { return std::size_t{1} << n_qubits; }
  /// CNOT count of the prepared circuit: depth * (floor(nq/2) + floor((nq-1)/2)).
  int two_qubit_gate_count() const;
  /// One initial Hadamard sublayer plus three sublayers per block.
  int physical_depth() const { return 3 * depth + 1; }
};

/// One R_y angle per qubit per layer, row-major depth x n_qubits.
struct ParameterTensor {
  int depth = 0;
  int n_qubits = 0;
  std::vector<double> theta;

  static ParameterTensor zeros(const CircuitConfig& cfg);
  static ParameterTensor gaussian(const CircuitConfig& cfg, double sigma, std::uint64_t seed);

  double& at(int d, int q) { return theta[static_cast<std::size_t>(d) * n_qubits + q]; }
  double at(int d, int q) const { return theta[static_cast<std::size_t>(d) * n_qubits + q]; }
  std::size_t size() const { return theta.size(); }
};

/// Real-amplitude statevector. The gate set {H, R_y, CNOT} is real
/// orthogonal, so no imaginary part is ever stored.
template <typename T>
class StateVector {
 public:
  explicit StateVector(int n_qubits)
      : n_qubits_(n_qubits), amp_(std::size_t{1} << n_qubits, T{0}) {
    amp_[0] = T{1};
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amp_.size(); }
  std::span<const T> amplitudes() const { return amp_; }
  T* data() { return amp_.data(); }
  const T* data() const { return amp_.data(); }

  void apply_h(int q) {
    check_qubit(q);
    if constexpr (std::is_same_v<T, double>) {
      kernels::h_pairs(amp_.data(), amp_.size(), bit_of(q));
    } else {
      kernels::h_pairs_generic(amp_.data(), amp_.size(), bit_of(q));
    }
  }

  void apply_ry(int q, double angle) {
    check_qubit(q);
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    if constexpr (std::is_same_v<T, double>) {
      kernels::ry_pairs(amp_.data(), amp_.size(), bit_of(q), c, s);
    } else {
      kernels::ry_pairs_generic(amp_.data(), amp_.size(), bit_of(q), c, s);
    }
  }

  void apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target)
      throw std::invalid_argument("apply_cnot: control equals target");
    if constexpr (std::is_same_v<T, double>) {
      kernels::cnot_swap(amp_.data(), amp_.size(), bit_of(control), bit_of(target));
    } else {
      kernels::cnot_swap_generic(amp_.data(), amp_.size(), bit_of(control), bit_of(target));
    }
  }

  double norm2() const {
    double acc = 0.0;
    for (T a : amp_) acc += static_cast<double>(a) * static_cast<double>(a);
    return acc;
  }

  /// Qubit 0 is the most significant index bit.
  int bit_of(int q) const { return n_qubits_ - 1 - q; }

 private:
  void check_qubit(int q) const {
    if (q < 0 || q >= n_qubits_) throw std::out_of_range("qubit index out of range");
  }

  int n_qubits_;
  std::vector<T> amp_;
};

namespace detail {

/// Brickwork CNOT sublayers: pairs (0,1),(2,3),... then (1,2),(3,4),...
/// Control is the lower qubit index of each pair.
template <typename T, typename F>
void for_each_layer_gate(const CircuitConfig& cfg, int layer, const ParameterTensor& th,
                         StateVector<T>& psi, F&& on_ry) {
  for (int q = 0; q < cfg.n_qubits; ++q) on_ry(psi, layer, q, th.at(layer, q));
  for (int q = 0; q + 1 < cfg.n_qubits; q += 2) psi.apply_cnot(q, q + 1);
  for (int q = 1; q + 1 < cfg.n_qubits; q += 2) psi.apply_cnot(q, q + 1);
}

}  // namespace detail

/// Hadamards on all qubits, then `depth` blocks of parallel R_y rotations
/// followed by the two brickwork CNOT sublayers.
template <typename T = double>
StateVector<T> prepare_state(const CircuitConfig& cfg, const ParameterTensor& th) {
  if (th.depth != cfg.depth || th.n_qubits != cfg.n_qubits)
    throw std::invalid_argument("prepare_state: parameter tensor shape mismatch");
  StateVector<T> psi(cfg.n_qubits);
  for (int q = 0; q < cfg.n_qubits; ++q) psi.apply_h(q);
  for (int d = 0; d < cfg.depth; ++d) {
    detail::for_each_layer_gate(cfg, d, th, psi,
                                [](StateVector<T>& s, int, int q, double a) { s.apply_ry(q, a); });
  }
  return psi;
}

template <typename T>
std::vector<T> born_probabilities(const StateVector<T>& psi) {
  std::vector<T> p(psi.dim());
  if constexpr (std::is_same_v<T, double>) {
    kernels::square(psi.data(), p.data(), psi.dim());
  } else {
    kernels::square_generic(psi.data(), p.data(), psi.dim());
  }
  return p;
}

/// Adjoint-mode differentiation of prepare_state. `psi` must hold the final
/// state and `cot` the cotangent dL/d(amplitudes); both are rewound in place
/// (all gates are orthogonal, so intermediate states are reconstructed by
/// inverse application rather than stored).
template <typename T>
ParameterTensor backprop_prepare(const CircuitConfig& cfg, const ParameterTensor& th,
                                 StateVector<T>& psi, std::vector<T>& cot) {
  ParameterTensor grad = ParameterTensor::zeros(cfg);
  const std::size_t dim = psi.dim();
  for (int d = cfg.depth - 1; d >= 0; --d) {
    // Undo the CNOT sublayers (self-inverse, disjoint pairs commute within a
    // sublayer) on both vectors: odd sublayer first, then even.
    for (int q = 1; q + 1 < cfg.n_qubits; q += 2) {
      psi.apply_cnot(q, q + 1);
      if constexpr (std::is_same_v<T, double>) {
        kernels::cnot_swap(cot.data(), dim, psi.bit_of(q), psi.bit_of(q + 1));
      } else {
        kernels::cnot_swap_generic(cot.data(), dim, psi.bit_of(q), psi.bit_of(q + 1));
      }
    }
    for (int q = 0; q + 1 < cfg.n_qubits; q += 2) {
      psi.apply_cnot(q, q + 1);
      if constexpr (std::is_same_v<T, double>) {
        kernels::cnot_swap(cot.data(), dim, psi.bit_of(q), psi.bit_of(q + 1));
      } else {
        kernels::cnot_swap_generic(cot.data(), dim, psi.bit_of(q), psi.bit_of(q + 1));
      }
    }
    // R_y gates commute within the sublayer; rewind each and accumulate the
    // parameter derivative with the state already at "before this gate".
    for (int q = cfg.n_qubits - 1; q >= 0; --q) {
      const double a = th.at(d, q);
      psi.apply_ry(q, -a);  // psi is now the state before R_y(a) on q
      const double c = std::cos(a / 2.0), s = std::sin(a / 2.0);
      const int bit = psi.bit_of(q);
      const std::size_t stride = std::size_t{1} << bit;
      const T* x = psi.data();
      const T* l = cot.data();
      double acc = 0.0;
      for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t k = 0; k < stride; ++k) {
          const double x0 = static_cast<double>(x[base + k]);
          const double x1 = static_cast<double>(x[base + k + stride]);
          const double l0 = static_cast<double>(l[base + k]);
          const double l1 = static_cast<double>(l[base + k + stride]);
          acc += l0 * (-s * x0 - c * x1) + l1 * (c * x0 - s * x1);
        }
      }
      grad.at(d, q) = 0.5 * acc;
      // lambda_{before} = R_y(a)^T lambda = R_y(-a) lambda
      if constexpr (std::is_same_v<T, double>) {
        kernels::ry_pairs(cot.data(), dim, bit, c, -s);
      } else {
        kernels::ry_pairs_generic(cot.data(), dim, bit, c, -s);
      }
    }
  }
  return grad;
}

// (I, A, J, B) cell coordinates of a basis-state index.
struct CellIndex {
  int i, a, j, b;
};

inline CellIndex decode_cell(std::size_t z, int addr_bits) {
  const std::size_t amask = (std::size_t{1} << addr_bits) - 1;
  CellIndex c;
  c.b = static_cast<int>(z & 1);
  c.j = static_cast<int>((z >> 1) & amask);
  c.a = static_cast<int>((z >> (1 + addr_bits)) & 1);
  c.i = static_cast<int>(z >> (2 + addr_bits));
  return c;
}

inline std::size_t encode_cell(int i, int a, int j, int b, int addr_bits) {
  return (((static_cast<std::size_t>(i) << 1 | static_cast<unsigned>(a)) << addr_bits |
           static_cast<std::size_t>(j))
          << 1) |
         static_cast<unsigned>(b);
}

/// Raw little-endian 64-bit dump in index order, for cross-implementation diffs.
void dump_state_raw(std::span<const double> amplitudes, std::ostream& out);

}  // namespace twobody
