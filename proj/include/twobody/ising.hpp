#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "twobody/graph.hpp"
#include "twobody/sa2.hpp"

namespace twobody {

/// Pairwise spin model p(sigma) ~ exp(beta * (sum h_i sigma_i +
/// sum_{i<j} J_ij sigma_i sigma_j)), sigma in {-1,+1}^n. Couplings are kept
/// both as an edge list and as adjacency for O(degree) field updates.
struct IsingModel {
  int n = 0;
  std::vector<double> h;
  std::vector<Edge> couplings;  // u < v, one entry per pair
  double beta = 1.0;

  std::vector<std::vector<std::pair<int, double>>> adjacency() const;
};

/// Closed-form maximum-entropy fit on the sparsity pattern of q: per edge the
/// coupling is the quarter log-odds of the 2x2 table, fields match the
/// node magnetizations m = 2 mu - 1 given those couplings. Table entries are
/// floored at eps before the logarithms; beta = 1.
IsingModel fit_maxent_ising(const FeasibleMoments& m, const QuboInstance& q,
                            double eps = 1e-12);

struct SampleBatch {
  std::vector<Bitstring> bits;   // one row per chain
  std::vector<double> energies;  // physical QUBO energy per chain
};

/// Heat-bath probability of setting a spin to +1 given its local field.
double heat_bath_plus_probability(double field, double beta);

/// Single-site heat-bath sweeps in fixed index order, local fields maintained
/// incrementally (O(|E|) per sweep). Chains start from independent uniform
/// spins and use streams derived from (seed, chain); the final state of each
/// chain is scored on q. Deterministic for fixed arguments.
SampleBatch gibbs_sample(const IsingModel& model, int sweeps, int chains,
                         std::uint64_t seed, const QuboInstance& q);

/// Lowest-energy row; ties broken by lowest chain index.
std::pair<Bitstring, double> best_bitstring(const SampleBatch& batch);

/// Exact spin rewrite of the QUBO objective: for every bitstring x with
/// sigma = 2x - 1, objective(sigma) + offset == x^T Q x, where
/// objective(sigma) = sum_i a_i sigma_i + sum_{u<v} b_uv sigma_u sigma_v.
struct SpinForm {
  std::vector<double> a;
  std::vector<Edge> b;
  double offset = 0.0;
};
SpinForm qubo_to_spin(const QuboInstance& q);
double spin_objective(const SpinForm& s, const std::vector<int>& sigma);

/// Nearest-rank quantile: the element at 1-based index ceil(p * count) of the
/// sorted list.
double nearest_rank_quantile(std::vector<double> values, double p);

/// Direct QUBO -> Ising baseline: spin rewrite with signs flipped so that
/// Gibbs sampling favors low QUBO energy, then h and J divided by the robust
/// scale r_c, the 0.95 nearest-rank quantile of the row absolute coupling
/// sums. beta = 1. Errors on an all-zero Q.
IsingModel robust_ising_from_qubo(const QuboInstance& q);

/// Default per-chain sweep budget, ceil(10 n log2 n).
int default_sweeps(int n);

}  // namespace twobody
