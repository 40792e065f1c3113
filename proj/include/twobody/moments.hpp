#pragma once

#include <span>
#include <string>
#include <vector>

#include "twobody/statevec.hpp"
#include "twobody/util.hpp"

namespace twobody {

/// Address-conditioned one- and two-body statistics. mu_i and nu_ij are
/// conditional probabilities, so they live in [0,1] by construction; nu is
/// symmetric with zero diagonal. The pair (mu, nu) is locally valid per edge
/// but need not be jointly feasible.
struct PseudoMoments {
  std::vector<double> mu;
  SquareMatrix nu;
};

/// Conditioning events with mass below this floor get the neutral values
/// mu = 1/2, nu = 1/4 instead of a 0/0.
inline constexpr double kDenominatorFloor = 1e-30;

/// Raw numerators/denominators retained for the reverse pass.
struct MomentAccumulators {
  std::vector<double> mu_num, mu_den;
  SquareMatrix nu_num, nu_den;
};

/// Single pass over the 2^{n_q} probability cells, scattering each cell into
/// the numerator/denominator accumulators of its two addresses. Cells with
/// i == j or with an address >= n carry no information and are skipped.
template <typename T>
PseudoMoments accumulate_moments(std::span<const T> p, const CircuitConfig& cfg,
                                 MomentAccumulators* acc_out = nullptr) {
  const int n = cfg.n;
  MomentAccumulators acc;
  acc.mu_num.assign(n, 0.0);
  acc.mu_den.assign(n, 0.0);
  acc.nu_num = SquareMatrix(n, 0.0);
  acc.nu_den = SquareMatrix(n, 0.0);

  const std::size_t dim = cfg.dim();
  for (std::size_t z = 0; z < dim; ++z) {
    const double pz = static_cast<double>(p[z]);
    const CellIndex c = decode_cell(z, cfg.addr_bits);
    if (c.i == c.j || c.i >= n || c.j >= n) continue;
    acc.mu_den[c.i] += pz;
    acc.mu_den[c.j] += pz;
    if (c.a) acc.mu_num[c.i] += pz;
    if (c.b) acc.mu_num[c.j] += pz;
    const int lo = c.i < c.j ? c.i : c.j;
    const int hi = c.i < c.j ? c.j : c.i;
    acc.nu_den(lo, hi) += pz;
    if (c.a && c.b) acc.nu_num(lo, hi) += pz;
  }

  PseudoMoments m;
  m.mu.assign(n, 0.5);
  m.nu = SquareMatrix(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (acc.mu_den[i] >= kDenominatorFloor) m.mu[i] = acc.mu_num[i] / acc.mu_den[i];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double den = acc.nu_den(i, j);
      const double v = den >= kDenominatorFloor ? acc.nu_num(i, j) / den : 0.25;
      m.nu.set_sym(i, j, v);
    }
  if (acc_out) *acc_out = std::move(acc);
  return m;
}

/// Reverse pass of accumulate_moments: scatters the cotangents on (mu, nu)
/// back onto dL/dp. Coordinates that fell back to the neutral value are
/// constant, so they contribute nothing.
template <typename T>
void backprop_moments(const CircuitConfig& cfg, const MomentAccumulators& acc,
                      const PseudoMoments& m, const std::vector<double>& gmu,
                      const SquareMatrix& gnu, std::vector<T>& gp_out) {
  const int n = cfg.n;
  // d(num/den)/dp = (is_numerator_cell - value) / den, folded into per-target
  // coefficients so the cell loop stays cheap.
  std::vector<double> mu_scale(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (acc.mu_den[i] >= kDenominatorFloor) mu_scale[i] = gmu[i] / acc.mu_den[i];
  SquareMatrix nu_scale(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (acc.nu_den(i, j) >= kDenominatorFloor)
        nu_scale.set_sym(i, j, gnu(i, j) / acc.nu_den(i, j));

  const std::size_t dim = cfg.dim();
  gp_out.assign(dim, T{0});
  for (std::size_t z = 0; z < dim; ++z) {
    const CellIndex c = decode_cell(z, cfg.addr_bits);
    if (c.i == c.j || c.i >= n || c.j >= n) continue;
    double g = mu_scale[c.i] * ((c.a ? 1.0 : 0.0) - m.mu[c.i]) +
               mu_scale[c.j] * ((c.b ? 1.0 : 0.0) - m.mu[c.j]);
    const int lo = c.i < c.j ? c.i : c.j;
    const int hi = c.i < c.j ? c.j : c.i;
    g += nu_scale(lo, hi) * (((c.a && c.b) ? 1.0 : 0.0) - m.nu(lo, hi));
    gp_out[z] = static_cast<T>(g);
  }
}

/// Diagnostic JSON form {"mu": [...], "nu_entries": [[i, j, v], ...]}.
std::string moments_to_json(const PseudoMoments& m);

}  // namespace twobody
