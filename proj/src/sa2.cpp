#include "twobody/sa2.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace twobody {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bregman(double a, double b) {
  // lim_{a->0} a log(a/b) = 0
  return a > 0.0 ? a * std::log(a / b) - a + b : b;
}

struct RowBounds {
  double lo = -kInf, hi = kInf;
  int arg_lo = -1, arg_hi = -1;   // j attaining the max (lo) / min (hi)
  double lo_gap = kInf, hi_gap = kInf;  // gap to the second-best, for margins
};

// mu-snap bounds for row i: lo = max_{j!=i} nu(i,j),
// hi = min_{j!=i} (1 + nu(i,j) - mu_j). First index wins ties, and the
// backward pass recomputes branches through this same scan.
RowBounds mu_row_bounds(int i, const std::vector<double>& mu, const SquareMatrix& nu) {
  const int n = static_cast<int>(mu.size());
  RowBounds rb;
  double lo2 = -kInf, hi2 = kInf;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const double v = nu(i, j);
    if (v > rb.lo) {
      lo2 = rb.lo;
      rb.lo = v;
      rb.arg_lo = j;
    } else if (v > lo2) {
      lo2 = v;
    }
    const double u = 1.0 + v - mu[j];
    if (u < rb.hi) {
      hi2 = rb.hi;
      rb.hi = u;
      rb.arg_hi = j;
    } else if (u < hi2) {
      hi2 = u;
    }
  }
  rb.lo_gap = rb.lo - lo2;
  rb.hi_gap = hi2 - rb.hi;
  return rb;
}

}  // namespace

BfInterval bf_interval(double mu_i, double mu_j) {
  return {std::max(0.0, mu_i + mu_j - 1.0), std::min(mu_i, mu_j)};
}

PairTable pairwise_table(double mu_i, double mu_j, double nu_ij) {
  return {1.0 - mu_i - mu_j + nu_ij, mu_j - nu_ij, mu_i - nu_ij, nu_ij};
}

void ipf_nu_snap(const std::vector<double>& mu, SquareMatrix& nu, double rho) {
  const int n = static_cast<int>(mu.size());
  for (int i = 0; i < n; ++i) {
    nu(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const BfInterval box = bf_interval(mu[i], mu[j]);
      const double v = nu(i, j);
      nu.set_sym(i, j, (1.0 - rho) * v + rho * clip(v, box.lo, box.hi));
    }
  }
}

double violation_mass(const PseudoMoments& m) {
  const int n = static_cast<int>(m.mu.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const BfInterval box = bf_interval(m.mu[i], m.mu[j]);
      const double v = m.nu(i, j);
      total += std::max(0.0, v - box.hi) + std::max(0.0, box.lo - v);
    }
  return total;
}

double kl_gap(const FeasibleMoments& repaired, const PseudoMoments& raw) {
  const int n = static_cast<int>(raw.mu.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    total += bregman(repaired.mu[i], clip(raw.mu[i], kMomentClipEps, 1.0 - kMomentClipEps));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      total += bregman(repaired.nu(i, j),
                       clip(raw.nu(i, j), kMomentClipEps, 1.0 - kMomentClipEps));
  return total;
}

std::pair<FeasibleMoments, IpfReport> ipf_project(const PseudoMoments& m,
                                                  const IpfOptions& opt, IpfTape* tape) {
  if (!(opt.rho > 0.0 && opt.rho <= 1.0))
    throw std::invalid_argument("ipf_project: rho must lie in (0, 1]");
  if (opt.iterations < 1)
    throw std::invalid_argument("ipf_project: need at least one iteration");
  const int n = static_cast<int>(m.mu.size());
  const double rho = opt.rho;
  const double eps = kMomentClipEps;

  IpfReport rep;
  rep.violation_before = violation_mass(m);

  double margin = kInf;
  auto note = [&margin](double d) { margin = std::min(margin, std::abs(d)); };

  std::vector<double> mu(n);
  SquareMatrix nu(n, 0.0);
  for (int i = 0; i < n; ++i) {
    mu[i] = clip(m.mu[i], eps, 1.0 - eps);
    note(m.mu[i] - eps);
    note(m.mu[i] - (1.0 - eps));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m.nu(i, j) + m.nu(j, i));
      nu.set_sym(i, j, clip(v, eps, 1.0 - eps));
      note(v - eps);
      note(v - (1.0 - eps));
    }

  if (tape) {
    tape->raw_mu = m.mu;
    tape->raw_nu = m.nu;
    tape->rho = rho;
    tape->iters.clear();
  }

  std::vector<double> mu_next(n);
  for (int t = 0; t < opt.iterations; ++t) {
    if (tape) tape->iters.push_back({mu, nu, SquareMatrix()});

    // nu-box snap
    SquareMatrix nu_d(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const BfInterval box = bf_interval(mu[i], mu[j]);
        const double v = nu(i, j);
        nu_d.set_sym(i, j, (1.0 - rho) * v + rho * clip(v, box.lo, box.hi));
        note(v - box.lo);
        note(v - box.hi);
        note(mu[i] + mu[j] - 1.0);
        note(mu[i] - mu[j]);
      }
    if (tape) tape->iters.back().nu_damped = nu_d;

    // mu-consistency snap, bounds from the damped nu and the iteration-entry mu
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      const RowBounds rb = mu_row_bounds(i, mu, nu_d);
      double c;
      if (rb.lo <= rb.hi) {
        c = clip(mu[i], rb.lo, rb.hi);
      } else {
        c = 0.5 * (rb.lo + rb.hi);
      }
      const double tgt = clip(c, 0.0, 1.0);
      mu_next[i] = (1.0 - rho) * mu[i] + rho * tgt;
      delta = std::max(delta, std::abs(mu_next[i] - mu[i]));
      note(mu[i] - rb.lo);
      note(mu[i] - rb.hi);
      note(rb.lo - rb.hi);
      note(c);
      note(c - 1.0);
      if (n > 2) {
        note(rb.lo_gap);
        note(rb.hi_gap);
      }
    }
    mu = mu_next;
    nu = nu_d;
    rep.iterations_used = t + 1;
    if (delta < opt.tol) break;
  }

  FeasibleMoments out{mu, nu};
  rep.violation_after = violation_mass(out);
  rep.kl_gap = kl_gap(out, m);
  if (tape) tape->margin = margin;
  return {std::move(out), rep};
}

void backprop_ipf(const IpfTape& tape, std::vector<double>& gmu, SquareMatrix& gnu) {
  const int n = static_cast<int>(gmu.size());
  const double rho = tape.rho;
  const double eps = kMomentClipEps;

  for (int t = static_cast<int>(tape.iters.size()) - 1; t >= 0; --t) {
    const IpfIterationTape& it = tape.iters[t];

    // mu-snap backward: splits gmu into the pass-through part and the bound
    // contributions feeding the damped nu (and the mu_j inside U_i).
    std::vector<double> gmu_in(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double g = gmu[i];
      if (g == 0.0) continue;
      gmu_in[i] += (1.0 - rho) * g;
      const RowBounds rb = mu_row_bounds(i, it.mu_in, it.nu_damped);
      double c;
      bool crossed = false;
      if (rb.lo <= rb.hi) {
        c = clip(it.mu_in[i], rb.lo, rb.hi);
      } else {
        c = 0.5 * (rb.lo + rb.hi);
        crossed = true;
      }
      const double gc = (c > 0.0 && c < 1.0) ? rho * g : 0.0;
      if (gc == 0.0) continue;
      double g_lo = 0.0, g_hi = 0.0;
      if (crossed) {
        g_lo = 0.5 * gc;
        g_hi = 0.5 * gc;
      } else if (it.mu_in[i] < rb.lo) {
        g_lo = gc;
      } else if (it.mu_in[i] > rb.hi) {
        g_hi = gc;
      } else {
        gmu_in[i] += gc;
      }
      if (g_lo != 0.0) {
        const int j = rb.arg_lo;
        gnu(std::min(i, j), std::max(i, j)) += g_lo;
      }
      if (g_hi != 0.0) {
        const int j = rb.arg_hi;
        gnu(std::min(i, j), std::max(i, j)) += g_hi;
        gmu_in[j] -= g_hi;
      }
    }

    // nu-snap backward
    SquareMatrix gnu_in(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double gd = gnu(i, j);
        if (gd == 0.0) continue;
        gnu_in(i, j) += (1.0 - rho) * gd;
        const double gs = rho * gd;
        const BfInterval box = bf_interval(it.mu_in[i], it.mu_in[j]);
        const double v = it.nu_in(i, j);
        if (v < box.lo) {
          if (it.mu_in[i] + it.mu_in[j] - 1.0 > 0.0) {
            gmu_in[i] += gs;
            gmu_in[j] += gs;
          }
          // lo == 0 branch is constant
        } else if (v > box.hi) {
          if (it.mu_in[i] <= it.mu_in[j]) {
            gmu_in[i] += gs;
          } else {
            gmu_in[j] += gs;
          }
        } else {
          gnu_in(i, j) += gs;
        }
      }

    gmu = std::move(gmu_in);
    gnu = std::move(gnu_in);
  }

  // Initialization clip: pass-through only strictly inside [eps, 1-eps].
  for (int i = 0; i < n; ++i)
    if (!(tape.raw_mu[i] > eps && tape.raw_mu[i] < 1.0 - eps)) gmu[i] = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (tape.raw_nu(i, j) + tape.raw_nu(j, i));
      if (!(v > eps && v < 1.0 - eps)) gnu(i, j) = 0.0;
    }
}

}  // namespace twobody
