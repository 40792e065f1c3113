#include "twobody/ising.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twobody/prng.hpp"

namespace twobody {

std::vector<std::vector<std::pair<int, double>>> IsingModel::adjacency() const {
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : couplings) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  return adj;
}

IsingModel fit_maxent_ising(const FeasibleMoments& m, const QuboInstance& q, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("fit_maxent_ising: eps must be positive");
  IsingModel model;
  model.n = q.n;
  model.beta = 1.0;
  model.couplings.reserve(q.offdiag.size());
  for (const auto& e : q.offdiag) {
    const PairTable t = pairwise_table(m.mu[e.u], m.mu[e.v], m.nu(e.u, e.v));
    const double p11 = std::max(t.p11, eps);
    const double p10 = std::max(t.p10, eps);
    const double p01 = std::max(t.p01, eps);
    const double p00 = std::max(t.p00, eps);
    const double j = 0.25 * std::log(p11 * p00 / (p10 * p01));
    model.couplings.push_back({e.u, e.v, j});
  }
  model.h.assign(q.n, 0.0);
  for (int i = 0; i < q.n; ++i) {
    const double mu = clip(m.mu[i], eps, 1.0 - eps);
    model.h[i] = 0.5 * std::log(mu / (1.0 - mu));
  }
  for (const auto& e : model.couplings) {
    model.h[e.u] -= e.w * (2.0 * m.mu[e.v] - 1.0);
    model.h[e.v] -= e.w * (2.0 * m.mu[e.u] - 1.0);
  }
  return model;
}

double heat_bath_plus_probability(double field, double beta) {
  return 0.5 * (1.0 + std::tanh(beta * field));
}

SampleBatch gibbs_sample(const IsingModel& model, int sweeps, int chains,
                         std::uint64_t seed, const QuboInstance& q) {
  if (sweeps < 1) throw std::invalid_argument("gibbs_sample: sweeps must be >= 1");
  if (chains < 1) throw std::invalid_argument("gibbs_sample: chains must be >= 1");
  if (model.n != q.n) throw std::invalid_argument("gibbs_sample: model/instance size mismatch");

  const auto adj = model.adjacency();
  const int n = model.n;
  SampleBatch batch;
  batch.bits.resize(chains);
  batch.energies.resize(chains);

  std::vector<int> sigma(n);
  std::vector<double> field(n);
  for (int c = 0; c < chains; ++c) {
    SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(c)));
    for (int i = 0; i < n; ++i) sigma[i] = rng.uniform01() < 0.5 ? -1 : 1;
    for (int i = 0; i < n; ++i) {
      double f = model.h[i];
      for (const auto& [j, w] : adj[i]) f += w * sigma[j];
      field[i] = f;
    }
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (int i = 0; i < n; ++i) {
        const double p = heat_bath_plus_probability(field[i], model.beta);
        const int next = rng.uniform01() < p ? 1 : -1;
        if (next != sigma[i]) {
          const double d = static_cast<double>(next - sigma[i]);
          for (const auto& [j, w] : adj[i]) field[j] += w * d;
          sigma[i] = next;
        }
      }
    }
    Bitstring x(n);
    for (int i = 0; i < n; ++i) x[i] = sigma[i] > 0 ? 1 : 0;
    batch.energies[c] = qubo_energy_bits(q, x);
    batch.bits[c] = std::move(x);
  }
  return batch;
}

std::pair<Bitstring, double> best_bitstring(const SampleBatch& batch) {
  if (batch.bits.empty()) throw std::invalid_argument("best_bitstring: empty batch");
  std::size_t best = 0;
  for (std::size_t c = 1; c < batch.energies.size(); ++c)
    if (batch.energies[c] < batch.energies[best]) best = c;
  return {batch.bits[best], batch.energies[best]};
}

SpinForm qubo_to_spin(const QuboInstance& q) {
  // x = (1 + sigma)/2 substituted into sum Q_ii x_i + 2 sum_{u<v} Q_uv x_u x_v.
  SpinForm s;
  s.a.assign(q.n, 0.0);
  s.b.reserve(q.offdiag.size());
  double offset = 0.0;
  for (int i = 0; i < q.n; ++i) {
    s.a[i] = 0.5 * q.diag[i];
    offset += 0.5 * q.diag[i];
  }
  for (const auto& e : q.offdiag) {
    s.b.push_back({e.u, e.v, 0.5 * e.w});
    s.a[e.u] += 0.5 * e.w;
    s.a[e.v] += 0.5 * e.w;
    offset += 0.5 * e.w;
  }
  s.offset = offset;
  return s;
}

double spin_objective(const SpinForm& s, const std::vector<int>& sigma) {
  double e = 0.0;
  for (std::size_t i = 0; i < s.a.size(); ++i) e += s.a[i] * sigma[i];
  for (const auto& t : s.b) e += t.w * sigma[t.u] * sigma[t.v];
  return e;
}

double nearest_rank_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("nearest_rank_quantile: empty list");
  if (p <= 0.0 || p > 1.0) throw std::invalid_argument("nearest_rank_quantile: p outside (0,1]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(values.size())));
  return values[rank - 1];
}

IsingModel robust_ising_from_qubo(const QuboInstance& q) {
  bool any = false;
  for (double d : q.diag)
    if (d != 0.0) any = true;
  for (const auto& e : q.offdiag)
    if (e.w != 0.0) any = true;
  if (!any) throw std::invalid_argument("robust_ising_from_qubo: all-zero Q");

  const SpinForm s = qubo_to_spin(q);
  IsingModel model;
  model.n = q.n;
  model.beta = 1.0;
  // Gibbs favors large h.sigma + sigma.J.sigma, so negate to seek low energy.
  model.h.resize(q.n);
  for (int i = 0; i < q.n; ++i) model.h[i] = -s.a[i];
  model.couplings.reserve(s.b.size());
  for (const auto& t : s.b) model.couplings.push_back({t.u, t.v, -t.w});

  std::vector<double> row_abs(q.n, 0.0);
  for (const auto& e : model.couplings) {
    row_abs[e.u] += std::abs(e.w);
    row_abs[e.v] += std::abs(e.w);
  }
  const double rc = nearest_rank_quantile(row_abs, 0.95);
  if (rc > 0.0) {
    for (auto& h : model.h) h /= rc;
    for (auto& e : model.couplings) e.w /= rc;
  }
  return model;
}

int default_sweeps(int n) {
  const double s = std::ceil(10.0 * n * std::log2(static_cast<double>(n)));
  return std::max(1, static_cast<int>(s));
}

}  // namespace twobody
