#pragma once

#include <cmath>
#include <limits>

#include "twobody/graph.hpp"
#include "twobody/moments.hpp"
#include "twobody/sa2.hpp"
#include "twobody/statevec.hpp"

namespace twobody {

struct LossBreakdown {
  double energy = 0.0;
  double kl = 0.0;
  double lambda = 0.0;
  double total = 0.0;
};

struct LossOptions {
  double rho = 0.5;       // 0 disables the projection entirely
  int ipf_iterations = 1;
  double ipf_tol = 1e-6;
  double lambda = 0.0;
};

struct LossDiagnostics {
  IpfReport report;
  double margin = std::numeric_limits<double>::infinity();
  PseudoMoments raw;
  FeasibleMoments repaired;
};

/// E(mu, nu) = sum_i Q_ii mu_i + 2 sum_{(i,j) in pattern} Q_ij nu_ij.
/// Only the sparsity pattern of Q is read.
inline double qubo_energy_moments(const QuboInstance& q, const PseudoMoments& m) {
  double e = 0.0;
  for (int i = 0; i < q.n; ++i) e += q.diag[i] * m.mu[i];
  for (const auto& t : q.offdiag) e += 2.0 * t.w * m.nu(t.u, t.v);
  return e;
}

namespace detail {

struct PipelineState {
  PseudoMoments raw;
  FeasibleMoments repaired;
  IpfReport report;
  double margin = std::numeric_limits<double>::infinity();
  double kl = 0.0;
};

inline PipelineState project_stage(const PseudoMoments& raw, const LossOptions& opt,
                                   IpfTape* tape) {
  PipelineState st;
  st.raw = raw;
  if (opt.rho > 0.0) {
    auto [rep, report] = ipf_project(raw, {opt.rho, opt.ipf_iterations, opt.ipf_tol}, tape);
    st.repaired = std::move(rep);
    st.report = report;
    st.kl = report.kl_gap;
    if (tape) st.margin = tape->margin;
  } else {
    // Unprojected control: the loss is the raw energy and the penalty vanishes.
    st.repaired = raw;
    st.report.violation_before = st.report.violation_after = violation_mass(raw);
    st.report.kl_gap = 0.0;
  }
  return st;
}

}  // namespace detail

template <typename T = double>
LossBreakdown loss(const ParameterTensor& th, const QuboInstance& q,
                   const CircuitConfig& cfg, const LossOptions& opt,
                   LossDiagnostics* diag = nullptr) {
  StateVector<T> psi = prepare_state<T>(cfg, th);
  std::vector<T> p = born_probabilities(psi);
  PseudoMoments raw = accumulate_moments<T>(std::span<const T>(p), cfg);
  IpfTape tape;
  detail::PipelineState st = detail::project_stage(raw, opt, diag ? &tape : nullptr);

  LossBreakdown out;
  out.energy = qubo_energy_moments(q, st.repaired);
  out.kl = st.kl;
  out.lambda = opt.lambda;
  out.total = out.energy + out.lambda * out.kl;
  if (diag) {
    diag->report = st.report;
    diag->margin = st.margin;
    diag->raw = std::move(st.raw);
    diag->repaired = std::move(st.repaired);
  }
  return out;
}

/// Reverse-mode gradient of LossBreakdown.total with respect to every theta
/// entry: energy and penalty cotangents flow through the repair map (both of
/// the divergence's arguments), the moment conditionals, the Born rule, and
/// the circuit adjoint.
template <typename T = double>
LossBreakdown loss_and_gradient(const ParameterTensor& th, const QuboInstance& q,
                                const CircuitConfig& cfg, const LossOptions& opt,
                                ParameterTensor& grad, LossDiagnostics* diag = nullptr) {
  StateVector<T> psi = prepare_state<T>(cfg, th);
  std::vector<T> p = born_probabilities(psi);
  MomentAccumulators acc;
  PseudoMoments raw = accumulate_moments<T>(std::span<const T>(p), cfg, &acc);

  IpfTape tape;
  const bool project = opt.rho > 0.0;
  detail::PipelineState st = detail::project_stage(raw, opt, project ? &tape : nullptr);

  LossBreakdown out;
  out.energy = qubo_energy_moments(q, st.repaired);
  out.kl = st.kl;
  out.lambda = opt.lambda;
  out.total = out.energy + out.lambda * out.kl;

  const int n = q.n;
  std::vector<double> gmu(n, 0.0);
  SquareMatrix gnu(n, 0.0);  // upper triangle carries the pair cotangents
  for (int i = 0; i < n; ++i) gmu[i] = q.diag[i];
  for (const auto& t : q.offdiag) gnu(std::min(t.u, t.v), std::max(t.u, t.v)) += 2.0 * t.w;

  std::vector<double> gmu_raw(n, 0.0);
  SquareMatrix gnu_raw(n, 0.0);
  if (project && opt.lambda != 0.0) {
    const double eps = kMomentClipEps;
    for (int i = 0; i < n; ++i) {
      const double b = clip(raw.mu[i], eps, 1.0 - eps);
      gmu[i] += opt.lambda * std::log(st.repaired.mu[i] / b);
      if (raw.mu[i] > eps && raw.mu[i] < 1.0 - eps)
        gmu_raw[i] += opt.lambda * (1.0 - st.repaired.mu[i] / b);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double b = clip(raw.nu(i, j), eps, 1.0 - eps);
        gnu(i, j) += opt.lambda * std::log(st.repaired.nu(i, j) / b);
        if (raw.nu(i, j) > eps && raw.nu(i, j) < 1.0 - eps)
          gnu_raw(i, j) += opt.lambda * (1.0 - st.repaired.nu(i, j) / b);
      }
  }

  if (project) backprop_ipf(tape, gmu, gnu);
  for (int i = 0; i < n; ++i) gmu[i] += gmu_raw[i];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) gnu(i, j) += gnu_raw(i, j);

  std::vector<T> gp;
  backprop_moments<T>(cfg, acc, raw, gmu, gnu, gp);

  std::vector<T> cot(psi.dim());
  const T* amp = psi.data();
  for (std::size_t z = 0; z < cot.size(); ++z) cot[z] = T{2} * amp[z] * gp[z];

  grad = backprop_prepare<T>(cfg, th, psi, cot);

  if (diag) {
    diag->report = st.report;
    diag->margin = st.margin;
    diag->raw = std::move(st.raw);
    diag->repaired = std::move(st.repaired);
  }
  return out;
}

}  // namespace twobody
