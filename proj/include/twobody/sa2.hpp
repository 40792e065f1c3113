#pragma once

#include <utility>
#include <vector>

#include "twobody/moments.hpp"
#include "twobody/util.hpp"

namespace twobody {

/// Boole-Frechet interval for a pairwise moment given the two marginals:
/// [max{0, mu_i + mu_j - 1}, min{mu_i, mu_j}]. Nonempty whenever the inputs
/// lie in [0,1].
struct BfInterval {
  double lo, hi;
  bool contains(double v) const { return lo <= v && v <= hi; }
};
BfInterval bf_interval(double mu_i, double mu_j);

/// The 2x2 joint table implied by (mu_i, mu_j, nu_ij). Entries sum to one by
/// construction; a negative entry is the infeasibility signal, not an error.
struct PairTable {
  double p00, p01, p10, p11;
  bool nonnegative() const { return p00 >= 0 && p01 >= 0 && p10 >= 0 && p11 >= 0; }
};
PairTable pairwise_table(double mu_i, double mu_j, double nu_ij);

/// Same shape as PseudoMoments; the name marks values that have been through
/// the feasibility repair.
using FeasibleMoments = PseudoMoments;

struct IpfOptions {
  double rho = 0.5;
  int iterations = 1;
  double tol = 1e-6;
};

struct IpfReport {
  int iterations_used = 0;
  double kl_gap = 0.0;
  double violation_before = 0.0;
  double violation_after = 0.0;
};

/// Initialization clip keeping logarithms finite; small enough not to perturb
/// training.
inline constexpr double kMomentClipEps = 1e-7;

/// Reverse-pass record for one damped iteration. Branch decisions are
/// recomputed from these snapshots rather than stored.
struct IpfIterationTape {
  std::vector<double> mu_in;
  SquareMatrix nu_in;
  SquareMatrix nu_damped;
};

struct IpfTape {
  std::vector<double> raw_mu;
  SquareMatrix raw_nu;
  std::vector<IpfIterationTape> iters;
  double rho = 0.0;
  /// Smallest distance to any piecewise-linear branch point encountered on
  /// the forward pass (clip switches, bound kinks, arg ties). Finite-
  /// difference probes are rejected when this is tiny.
  double margin = 0.0;
};

/// Damped alternating projection toward the pairwise-feasible polytope.
/// Per iteration: clip nu into its Boole-Frechet box and damp by rho, then
/// clip each mu into the bounds implied by the updated nu (with the
/// iteration-entry mu on the other side), damp, clamp to [0,1]. Early exit
/// when max_i |delta mu_i| < tol. Crossed mu bounds clip to the interval
/// midpoint.
std::pair<FeasibleMoments, IpfReport> ipf_project(const PseudoMoments& m,
                                                  const IpfOptions& opt,
                                                  IpfTape* tape = nullptr);

/// One nu-box pass in isolation (the contraction step).
void ipf_nu_snap(const std::vector<double>& mu, SquareMatrix& nu, double rho);

/// Generalized (Bregman, negative-entropy) divergence summed over all i and
/// all unordered pairs: sum a log(a/b) - a + b with the raw side pre-clipped
/// to [eps, 1-eps] before the logarithm. Nonnegative.
double kl_gap(const FeasibleMoments& repaired, const PseudoMoments& raw);

/// Total mass outside the Boole-Frechet boxes: sum over i<j of
/// (nu - U)_+ + (L - nu)_+.
double violation_mass(const PseudoMoments& m);

/// Transforms cotangents on the projector output into cotangents on the raw
/// inputs, in place. Subgradients at branch points follow the forward tie
/// rules (first argmax/argmin, lower index on equal bounds).
void backprop_ipf(const IpfTape& tape, std::vector<double>& gmu, SquareMatrix& gnu);

}  // namespace twobody
