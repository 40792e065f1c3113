#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "twobody/moments.hpp"
#include "twobody/prng.hpp"

using namespace twobody;

namespace {

std::vector<double> random_table(const CircuitConfig& cfg, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> p(cfg.dim());
  double total = 0.0;
  for (auto& v : p) {
    v = rng.uniform01();
    total += v;
  }
  for (auto& v : p) v /= total;
  return p;
}

// Independent brute-force evaluation of the conditional formulas, looping
// over (i, a, j, b) quadruples instead of scanning cells.
PseudoMoments moments_oracle(const std::vector<double>& p, const CircuitConfig& cfg) {
  const int n = cfg.n;
  const int na = 1 << cfg.addr_bits;
  PseudoMoments m;
  m.mu.assign(n, 0.5);
  m.nu = SquareMatrix(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < na; ++j) {
      if (j == i || j >= n) continue;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          den += p[encode_cell(i, a, j, b, cfg.addr_bits)];
          den += p[encode_cell(j, a, i, b, cfg.addr_bits)];
        }
      for (int b = 0; b < 2; ++b) num += p[encode_cell(i, 1, j, b, cfg.addr_bits)];
      for (int a = 0; a < 2; ++a) num += p[encode_cell(j, a, i, 1, cfg.addr_bits)];
    }
    if (den >= kDenominatorFloor) m.mu[i] = num / den;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double den = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          den += p[encode_cell(i, a, j, b, cfg.addr_bits)];
          den += p[encode_cell(j, a, i, b, cfg.addr_bits)];
        }
      const double num =
          p[encode_cell(i, 1, j, 1, cfg.addr_bits)] + p[encode_cell(j, 1, i, 1, cfg.addr_bits)];
      m.nu.set_sym(i, j, den >= kDenominatorFloor ? num / den : 0.25);
    }
  return m;
}

}  // namespace

TEST_CASE("uniform table gives mu=1/2, nu=1/4, also for non-power-of-two n") {
  for (int n : {4, 6, 13}) {
    const CircuitConfig cfg(n, 0);
    std::vector<double> p(cfg.dim(), 1.0 / static_cast<double>(cfg.dim()));
    const PseudoMoments m = accumulate_moments<double>(std::span<const double>(p), cfg);
    for (int i = 0; i < n; ++i) CHECK(m.mu[i] == doctest::Approx(0.5).epsilon(1e-12));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) CHECK(m.nu(i, j) == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("point mass on (i,1,j,1)") {
  const CircuitConfig cfg(4, 0);
  std::vector<double> p(cfg.dim(), 0.0);
  p[encode_cell(1, 1, 3, 1, cfg.addr_bits)] = 1.0;
  const PseudoMoments m = accumulate_moments<double>(std::span<const double>(p), cfg);
  CHECK(m.mu[1] == 1.0);
  CHECK(m.mu[3] == 1.0);
  CHECK(m.nu(1, 3) == 1.0);
  // untouched variables fall back to the neutral values
  CHECK(m.mu[0] == 0.5);
  CHECK(m.nu(0, 2) == 0.25);
}

TEST_CASE("random tables match the nested-loop oracle") {
  for (int n : {5, 8, 11}) {
    const CircuitConfig cfg(n, 0);
    const auto p = random_table(cfg, 40 + n);
    const PseudoMoments got = accumulate_moments<double>(std::span<const double>(p), cfg);
    const PseudoMoments want = moments_oracle(p, cfg);
    for (int i = 0; i < n; ++i) CHECK(got.mu[i] == doctest::Approx(want.mu[i]).epsilon(1e-12));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        CHECK(got.nu(i, j) == doctest::Approx(want.nu(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("self-pair and out-of-range address mass changes nothing") {
  const CircuitConfig cfg(5, 0);  // addr space 8, addresses 5..7 invalid
  auto p = random_table(cfg, 77);
  const PseudoMoments before = accumulate_moments<double>(std::span<const double>(p), cfg);
  for (int i = 0; i < 8; ++i) p[encode_cell(i, 1, i, 1, cfg.addr_bits)] += 0.3;
  p[encode_cell(6, 1, 2, 0, cfg.addr_bits)] += 0.9;
  p[encode_cell(1, 0, 7, 1, cfg.addr_bits)] += 1.7;
  const PseudoMoments after = accumulate_moments<double>(std::span<const double>(p), cfg);
  for (int i = 0; i < 5; ++i) CHECK(after.mu[i] == before.mu[i]);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) CHECK(after.nu(i, j) == before.nu(i, j));
}

TEST_CASE("permutation equivariance") {
  const int n = 6;
  const CircuitConfig cfg(n, 0);
  const auto p = random_table(cfg, 99);
  const std::vector<int> perm = {3, 0, 5, 1, 4, 2};
  std::vector<double> q(p.size(), 0.0);
  const int na = 1 << cfg.addr_bits;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const int pi = i < n ? perm[i] : i;
          const int pj = j < n ? perm[j] : j;
          q[encode_cell(pi, a, pj, b, cfg.addr_bits)] +=
              p[encode_cell(i, a, j, b, cfg.addr_bits)];
        }
  const PseudoMoments mp = accumulate_moments<double>(std::span<const double>(p), cfg);
  const PseudoMoments mq = accumulate_moments<double>(std::span<const double>(q), cfg);
  for (int i = 0; i < n; ++i) CHECK(mq.mu[perm[i]] == doctest::Approx(mp.mu[i]).epsilon(1e-12));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      CHECK(mq.nu(perm[i], perm[j]) == doctest::Approx(mp.nu(i, j)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate denominators fall back to neutral values") {
  const CircuitConfig cfg(4, 0);
  std::vector<double> p(cfg.dim(), 0.0);  // all mass missing
  const PseudoMoments m = accumulate_moments<double>(std::span<const double>(p), cfg);
  for (double v : m.mu) CHECK(v == 0.5);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) CHECK(m.nu(i, j) == 0.25);
}

TEST_CASE("moment outputs stay in [0,1]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CircuitConfig cfg(7, 0);
    const auto p = random_table(cfg, 1000 + seed);
    const PseudoMoments m = accumulate_moments<double>(std::span<const double>(p), cfg);
    for (double v : m.mu) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j) {
        CHECK(m.nu(i, j) >= 0.0);
        CHECK(m.nu(i, j) <= 1.0);
      }
  }
}

TEST_CASE("backprop_moments agrees with finite differences on the table") {
  const CircuitConfig cfg(5, 0);
  auto p = random_table(cfg, 123);
  MomentAccumulators acc;
  const PseudoMoments m = accumulate_moments<double>(std::span<const double>(p), cfg, &acc);

  SplitMix64 rng(9);
  std::vector<double> gmu(cfg.n);
  SquareMatrix gnu(cfg.n, 0.0);
  for (auto& g : gmu) g = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < cfg.n; ++i)
    for (int j = i + 1; j < cfg.n; ++j) gnu(i, j) = rng.uniform(-1.0, 1.0);

  auto scalar_fn = [&](const std::vector<double>& table) {
    const PseudoMoments mm = accumulate_moments<double>(std::span<const double>(table), cfg);
    double f = 0.0;
    for (int i = 0; i < cfg.n; ++i) f += gmu[i] * mm.mu[i];
    for (int i = 0; i < cfg.n; ++i)
      for (int j = i + 1; j < cfg.n; ++j) f += gnu(i, j) * mm.nu(i, j);
    return f;
  };

  std::vector<double> gp;
  backprop_moments<double>(cfg, acc, m, gmu, gnu, gp);

  const double h = 1e-6;
  for (std::size_t z = 0; z < p.size(); z += 13) {
    auto plus = p, minus = p;
    plus[z] += h;
    minus[z] -= h;
    const double fd = (scalar_fn(plus) - scalar_fn(minus)) / (2 * h);
    CHECK(gp[z] == doctest::Approx(fd).epsilon(1e-5));
  }
}
