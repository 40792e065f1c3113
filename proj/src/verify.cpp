#include "twobody/verify.hpp"

#include <cmath>
#include <sstream>

#include "twobody/ising.hpp"
#include "twobody/kernels.hpp"
#include "twobody/pipeline.hpp"
#include "twobody/prng.hpp"
#include "twobody/schedules.hpp"

namespace twobody {

namespace {

CheckResult check(const std::string& name, bool ok, const std::string& detail = "") {
  return {name, ok, detail};
}

PseudoMoments single_pair_moments(double mu_i, double mu_j, double nu) {
  PseudoMoments m;
  m.mu = {mu_i, mu_j};
  m.nu = SquareMatrix(2, 0.0);
  m.nu.set_sym(0, 1, nu);
  return m;
}

CheckResult ipf_worked_example() {
  auto [rep, report] = ipf_project(single_pair_moments(0.1, 0.1, 0.8), {0.6, 1, 1e-6});
  const bool ok = std::abs(rep.mu[0] - 0.268) < 1e-9 && std::abs(rep.mu[1] - 0.268) < 1e-9 &&
                  std::abs(rep.nu(0, 1) - 0.38) < 1e-9;
  std::ostringstream d;
  d << "(" << rep.mu[0] << ", " << rep.mu[1] << ", " << rep.nu(0, 1) << ")";
  return check("ipf worked example", ok, d.str());
}

CheckResult hadamard_init_moments() {
  double worst = 0.0;
  for (int n : {4, 13}) {
    for (int depth : {0, 2}) {
      const CircuitConfig cfg(n, depth);
      const auto psi = prepare_state<double>(cfg, ParameterTensor::zeros(cfg));
      const auto p = born_probabilities(psi);
      const PseudoMoments m = accumulate_moments<double>(std::span<const double>(p), cfg);
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(m.mu[i] - 0.5));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(m.nu(i, j) - 0.25));
    }
  }
  return check("hadamard-init moments", worst < 1e-6, "max deviation " + std::to_string(worst));
}

CheckResult nu_snap_contraction() {
  SplitMix64 rng(11);
  double worst = 0.0;
  for (double rho : {0.1, 0.5, 1.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 3 + static_cast<int>(rng.next() % 5);
      PseudoMoments m;
      m.mu.resize(n);
      for (auto& x : m.mu) x = rng.uniform(0.05, 0.95);
      m.nu = SquareMatrix(n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.nu.set_sym(i, j, rng.uniform(0.0, 1.0));
      const double before = violation_mass(m);
      if (before < 1e-6) continue;
      ipf_nu_snap(m.mu, m.nu, rho);
      const double after = violation_mass(m);
      worst = std::max(worst, std::abs(after - (1.0 - rho) * before) / before);
    }
  }
  return check("nu-snap contraction by (1-rho)", worst < 1e-10,
               "max relative deviation " + std::to_string(worst));
}

CheckResult table_box_equivalence() {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = rng.uniform01(), b = rng.uniform01(), v = rng.uniform01();
    if (pairwise_table(a, b, v).nonnegative() != bf_interval(a, b).contains(v))
      return check("pairwise table vs interval", false, "counterexample found");
  }
  return check("pairwise table vs interval", true, "10000 triples");
}

CheckResult maxent_single_edge() {
  Graph g = make_graph(2, {{0, 1, 1.0}});
  const QuboInstance q = maxcut_to_qubo(g);
  const IsingModel model = fit_maxent_ising(single_pair_moments(0.5, 0.5, 0.4), q);
  const double j = model.couplings.at(0).w;
  bool ok = std::abs(j - std::log(2.0)) < 1e-12 && std::abs(model.h[0]) < 1e-12 &&
            std::abs(model.h[1]) < 1e-12;
  // exact two-spin enumeration must reproduce the marginals
  double z = 0.0, mu0 = 0.0, nu = 0.0;
  for (int s0 : {-1, 1})
    for (int s1 : {-1, 1}) {
      const double w = std::exp(model.h[0] * s0 + model.h[1] * s1 + j * s0 * s1);
      z += w;
      if (s0 > 0) mu0 += w;
      if (s0 > 0 && s1 > 0) nu += w;
    }
  ok = ok && std::abs(mu0 / z - 0.5) < 1e-12 && std::abs(nu / z - 0.4) < 1e-12;
  return check("maxent single-edge fit", ok);
}

CheckResult gibbs_quick() {
  if (heat_bath_plus_probability(0.0, 1.0) != 0.5)
    return check("gibbs heat-bath", false, "f=0 probability != 0.5");
  // 2-spin chain vs exact enumeration, reduced sweep budget
  Graph g = make_graph(2, {{0, 1, 1.0}});
  const QuboInstance q = maxcut_to_qubo(g);
  const IsingModel model = fit_maxent_ising(single_pair_moments(0.5, 0.5, 0.4), q);
  const int sweeps = 200000;
  SplitMix64 rng(derive_stream(7, 0));
  std::vector<int> sigma = {1, 1};
  std::vector<double> counts(4, 0.0);
  const double jj = model.couplings[0].w;
  for (int s = 0; s < sweeps; ++s) {
    for (int i = 0; i < 2; ++i) {
      const double f = model.h[i] + jj * sigma[1 - i];
      sigma[i] = rng.uniform01() < heat_bath_plus_probability(f, 1.0) ? 1 : -1;
    }
    counts[(sigma[0] > 0 ? 2 : 0) + (sigma[1] > 0 ? 1 : 0)] += 1.0;
  }
  const double probs[4] = {0.4, 0.1, 0.1, 0.4};
  for (int k = 0; k < 4; ++k) {
    const double se = std::sqrt(probs[k] * (1 - probs[k]) / sweeps);
    if (std::abs(counts[k] / sweeps - probs[k]) > 6.0 * se)
      return check("gibbs heat-bath", false, "2-spin state " + std::to_string(k) + " off");
  }
  return check("gibbs heat-bath", true);
}

CheckResult spin_rewrite_equivalence() {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 4 + static_cast<int>(rng.next() % 5);
    QuboInstance q;
    q.n = n;
    q.diag.resize(n);
    for (auto& d : q.diag) d = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform01() < 0.5) q.offdiag.push_back({i, j, rng.uniform(-2.0, 2.0)});
    const SpinForm s = qubo_to_spin(q);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Bitstring x(n);
      std::vector<int> sigma(n);
      for (int i = 0; i < n; ++i) {
        x[i] = (mask >> i) & 1;
        sigma[i] = x[i] ? 1 : -1;
      }
      if (std::abs(spin_objective(s, sigma) + s.offset - qubo_energy_bits(q, x)) > 1e-9)
        return check("spin rewrite equivalence", false, "mismatch at n=" + std::to_string(n));
    }
  }
  std::vector<double> rows;
  for (int k = 1; k <= 100; ++k) rows.push_back(k);
  if (nearest_rank_quantile(rows, 0.95) != 95.0)
    return check("spin rewrite equivalence", false, "quantile rule");
  return check("spin rewrite equivalence", true);
}

CheckResult schedule_endpoints() {
  const KlRampSchedule kl;
  const LrSchedule lr;
  const double T = 300;
  const bool ok = lambda_kl(0, T, kl) == 0.10 && lambda_kl(T, T, kl) == 0.30 &&
                  learning_rate(0, T, lr) == 0.03 && learning_rate(0.3 * T, T, lr) == 0.10 &&
                  learning_rate(T, T, lr) == 0.01;
  return check("schedule endpoints", ok);
}

CheckResult kernel_equivalence() {
#if TWOBODY_HAVE_AVX2_BUILD
  if (!__builtin_cpu_supports("avx2"))
    return check("kernel scalar/avx2 equivalence", true, "avx2 unavailable, skipped");
  SplitMix64 rng(14);
  const int nq = 8;
  std::vector<double> a(1 << nq), b;
  for (auto& x : a) x = rng.uniform(-1.0, 1.0);
  b = a;
  for (int bit = 0; bit < nq; ++bit) {
    kernels::scalar::ry_pairs(a.data(), a.size(), bit, 0.3, 0.7);
    kernels::avx2::ry_pairs(b.data(), b.size(), bit, 0.3, 0.7);
    kernels::scalar::h_pairs(a.data(), a.size(), bit);
    kernels::avx2::h_pairs(b.data(), b.size(), bit);
    kernels::scalar::cnot_swap(a.data(), a.size(), bit, (bit + 3) % nq);
    kernels::avx2::cnot_swap(b.data(), b.size(), bit, (bit + 3) % nq);
  }
  return check("kernel scalar/avx2 equivalence", a == b,
               a == b ? "bitwise identical" : "paths diverge");
#else
  return check("kernel scalar/avx2 equivalence", true, "non-x86 build, skipped");
#endif
}

CheckResult energy_cut_identity() {
  SplitMix64 rng(15);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = generate_er(10, 4.0, trial);
    const QuboInstance q = maxcut_to_qubo(g);
    for (std::size_t mask = 0; mask < 1024; ++mask) {
      Bitstring x(10);
      for (int i = 0; i < 10; ++i) x[i] = (mask >> i) & 1;
      if (qubo_energy_bits(q, x) != -cut_value(g, x))
        return check("qubo energy == -cut", false, "mismatch");
    }
  }
  (void)rng;
  return check("qubo energy == -cut", true, "exhaustive n=10, 5 graphs");
}

}  // namespace

std::vector<CheckResult> run_verification() {
  std::vector<CheckResult> results;
  results.push_back(ipf_worked_example());
  results.push_back(hadamard_init_moments());
  results.push_back(nu_snap_contraction());
  results.push_back(table_box_equivalence());
  results.push_back(maxent_single_edge());
  results.push_back(gibbs_quick());
  results.push_back(spin_rewrite_equivalence());
  results.push_back(schedule_endpoints());
  results.push_back(kernel_equivalence());
  results.push_back(energy_cut_identity());
  return results;
}

}  // namespace twobody
