#include <array>
#include <cmath>
#include <cstring>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "twobody/prng.hpp"
#include "twobody/statevec.hpp"

using namespace twobody;

namespace {

// Dense linear-algebra oracle built independently from Kronecker products.
using Mat = std::vector<std::vector<double>>;

Mat identity(std::size_t n) {
  Mat m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
  Mat m(ar * br, std::vector<double>(ac * bc, 0.0));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l) m[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return m;
}

Mat single_qubit(int nq, int q, const std::array<double, 4>& g) {
  // Qubit 0 is the most significant index bit.
  Mat m = {{g[0], g[1]}, {g[2], g[3]}};
  Mat left = identity(std::size_t{1} << q);
  Mat right = identity(std::size_t{1} << (nq - q - 1));
  return kron(kron(left, m), right);
}

Mat cnot_matrix(int nq, int control, int target) {
  const std::size_t dim = std::size_t{1} << nq;
  const std::size_t cmask = std::size_t{1} << (nq - 1 - control);
  const std::size_t tmask = std::size_t{1} << (nq - 1 - target);
  Mat m(dim, std::vector<double>(dim, 0.0));
  for (std::size_t z = 0; z < dim; ++z) {
    const std::size_t zp = (z & cmask) ? (z ^ tmask) : z;
    m[zp][z] = 1.0;
  }
  return m;
}

std::vector<double> matvec(const Mat& m, const std::vector<double>& x) {
  std::vector<double> y(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
  return y;
}

std::array<double, 4> h_gate() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s, s, -s};
}

std::array<double, 4> ry_gate(double a) {
  return {std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2)};
}

}  // namespace

TEST_CASE("register geometry and gate bookkeeping") {
  const CircuitConfig c800(800, 2);
  CHECK(c800.addr_bits == 10);
  CHECK(c800.n_qubits == 22);
  CHECK(c800.two_qubit_gate_count() == 42);
  CHECK(c800.physical_depth() == 7);

  const CircuitConfig c2000d2(2000, 2);
  CHECK(c2000d2.n_qubits == 24);
  CHECK(c2000d2.two_qubit_gate_count() == 46);
  CHECK(CircuitConfig(2000, 3).two_qubit_gate_count() == 69);

  CHECK(CircuitConfig(16, 0).n_qubits == 10);
  CHECK_THROWS_AS(CircuitConfig(1, 2), std::invalid_argument);
}

TEST_CASE("depth zero gives exactly uniform amplitudes") {
  const CircuitConfig cfg(5, 0);
  const auto psi = prepare_state<double>(cfg, ParameterTensor::zeros(cfg));
  const double expected = std::pow(2.0, -cfg.n_qubits / 2.0);
  for (double a : psi.amplitudes()) CHECK(a == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("zero angles keep the distribution uniform through CNOT layers") {
  const CircuitConfig cfg(6, 2);
  const auto psi = prepare_state<double>(cfg, ParameterTensor::zeros(cfg));
  const auto p = born_probabilities(psi);
  const double u = 1.0 / static_cast<double>(cfg.dim());
  for (double pz : p) CHECK(pz == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("norm is preserved gate by gate") {
  SplitMix64 rng(21);
  StateVector<double> psi(8);
  for (int q = 0; q < 8; ++q) psi.apply_h(q);
  for (int step = 0; step < 60; ++step) {
    const int kind = static_cast<int>(rng.next() % 3);
    const int q = static_cast<int>(rng.next() % 8);
    if (kind == 0) {
      psi.apply_h(q);
    } else if (kind == 1) {
      psi.apply_ry(q, rng.uniform(-3.0, 3.0));
    } else {
      const int t = (q + 1 + static_cast<int>(rng.next() % 7)) % 8;
      psi.apply_cnot(q, t);
    }
    CHECK(std::abs(psi.norm2() - 1.0) < 1e-9);
  }
}

TEST_CASE("trivial gate identities") {
  SplitMix64 rng(22);
  StateVector<double> psi(4);
  for (int q = 0; q < 4; ++q) psi.apply_h(q);
  psi.apply_ry(2, rng.uniform(-1.0, 1.0));
  std::vector<double> before(psi.amplitudes().begin(), psi.amplitudes().end());

  psi.apply_ry(1, 0.0);
  std::vector<double> after(psi.amplitudes().begin(), psi.amplitudes().end());
  CHECK(before == after);

  psi.apply_cnot(0, 3);
  psi.apply_cnot(0, 3);
  after.assign(psi.amplitudes().begin(), psi.amplitudes().end());
  CHECK(before == after);
}

TEST_CASE("gate kernels match the dense unitary oracle") {
  SplitMix64 rng(23);
  for (int nq = 2; nq <= 6; ++nq) {
    const std::size_t dim = std::size_t{1} << nq;
    std::vector<double> x(dim);
    double norm = 0.0;
    for (auto& v : x) {
      v = rng.uniform(-1.0, 1.0);
      norm += v * v;
    }
    for (auto& v : x) v /= std::sqrt(norm);

    StateVector<double> psi(nq);
    std::memcpy(psi.data(), x.data(), dim * sizeof(double));
    std::vector<double> dense = x;

    for (int step = 0; step < 25; ++step) {
      const int kind = static_cast<int>(rng.next() % 3);
      const int q = static_cast<int>(rng.next() % nq);
      if (kind == 0) {
        psi.apply_h(q);
        dense = matvec(single_qubit(nq, q, h_gate()), dense);
      } else if (kind == 1) {
        const double a = rng.uniform(-3.0, 3.0);
        psi.apply_ry(q, a);
        dense = matvec(single_qubit(nq, q, ry_gate(a)), dense);
      } else {
        const int t = (q + 1 + static_cast<int>(rng.next() % (nq - 1))) % nq;
        psi.apply_cnot(q, t);
        dense = matvec(cnot_matrix(nq, q, t), dense);
      }
      for (std::size_t z = 0; z < dim; ++z)
        CHECK(psi.amplitudes()[z] == doctest::Approx(dense[z]).epsilon(1e-12));
    }
  }
}

TEST_CASE("index and shape errors") {
  StateVector<double> psi(3);
  CHECK_THROWS_AS(psi.apply_h(3), std::out_of_range);
  CHECK_THROWS_AS(psi.apply_ry(-1, 0.5), std::out_of_range);
  CHECK_THROWS_AS(psi.apply_cnot(1, 1), std::invalid_argument);

  const CircuitConfig cfg(4, 2);
  const CircuitConfig other(4, 3);
  CHECK_THROWS_AS(prepare_state<double>(cfg, ParameterTensor::zeros(other)),
                  std::invalid_argument);
}

TEST_CASE("cell encoding round-trips the (I,A,J,B) layout") {
  const int addr_bits = 3;
  for (int i = 0; i < 8; ++i)
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 8; ++j)
        for (int b = 0; b < 2; ++b) {
          const CellIndex c = decode_cell(encode_cell(i, a, j, b, addr_bits), addr_bits);
          CHECK(c.i == i);
          CHECK(c.a == a);
          CHECK(c.j == j);
          CHECK(c.b == b);
        }
}

TEST_CASE("raw state dump is little-endian index order") {
  const CircuitConfig cfg(2, 0);
  const auto psi = prepare_state<double>(cfg, ParameterTensor::zeros(cfg));
  std::ostringstream out;
  dump_state_raw(psi.amplitudes(), out);
  const std::string bytes = out.str();
  REQUIRE(bytes.size() == psi.dim() * sizeof(double));
  double first = 0.0;
  std::memcpy(&first, bytes.data(), sizeof(double));
  CHECK(first == psi.amplitudes()[0]);
}

TEST_CASE("float32 state mode stays normalized within loosened tolerance") {
  const CircuitConfig cfg(13, 2);
  ParameterTensor th = ParameterTensor::gaussian(cfg, 0.4, 11);
  const auto psi = prepare_state<float>(cfg, th);
  CHECK(std::abs(psi.norm2() - 1.0) < 1e-5);
  const auto p = born_probabilities(psi);
  double total = 0.0;
  for (float v : p) total += v;
  CHECK(std::abs(total - 1.0) < 1e-5);
}
