#include "twobody/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "twobody/prng.hpp"

namespace twobody {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename T>
void epoch_step(const ParameterTensor& th, const QuboInstance& q, const CircuitConfig& ccfg,
                const LossOptions& opt, ParameterTensor& grad, LossBreakdown& lb,
                LossDiagnostics& diag) {
  lb = loss_and_gradient<T>(th, q, ccfg, opt, grad, &diag);
}

template <typename T>
FeasibleMoments current_repaired(const ParameterTensor& th, const QuboInstance& q,
                                 const CircuitConfig& ccfg, const LossOptions& opt) {
  LossDiagnostics diag;
  (void)loss<T>(th, q, ccfg, opt, &diag);
  return std::move(diag.repaired);
}

}  // namespace

bool is_decode_epoch(int epoch, int total, const DecodePolicy& policy) {
  if (epoch == total) return true;
  if (policy.every > 0 && epoch % policy.every == 0) return true;
  if (policy.dense_every > 0 && epoch > total - policy.dense_tail &&
      epoch % policy.dense_every == 0)
    return true;
  return false;
}

std::optional<double> RunRecord::r_star() const {
  if (!best_known || *best_known == 0.0) return std::nullopt;
  return best_cut / *best_known;
}

std::optional<double> RunRecord::final_ratio() const {
  if (!best_known || *best_known == 0.0) return std::nullopt;
  return final_cut / *best_known;
}

RunRecord train(const Graph& g, const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (cfg.rho < 0.0 || cfg.rho > 1.0) throw std::invalid_argument("train: rho outside [0,1]");
  if (g.n > 2048)
    throw std::invalid_argument(
        "train: instances beyond 2048 variables exceed the dense pairwise storage");

  const QuboInstance q = maxcut_to_qubo(g);
  const CircuitConfig ccfg(g.n, cfg.depth);

  ParameterTensor theta = cfg.gaussian_init
                              ? ParameterTensor::gaussian(ccfg, cfg.init_sigma, cfg.seed)
                              : ParameterTensor::zeros(ccfg);
  AdamState adam(theta.size(), cfg.adam);

  const int sweeps = cfg.decode.sweeps > 0 ? cfg.decode.sweeps : default_sweeps(g.n);

  RunRecord rec;
  rec.best_known = cfg.best_known;
  rec.best_cut = -std::numeric_limits<double>::infinity();

  const auto run_start = std::chrono::steady_clock::now();
  ParameterTensor grad;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const double lambda = lambda_kl(epoch, cfg.epochs, cfg.kl);
    const double eta = learning_rate(epoch, cfg.epochs, cfg.lr);
    const LossOptions opt{cfg.rho, cfg.ipf_iterations, cfg.ipf_tol, lambda};

    LossBreakdown lb;
    LossDiagnostics diag;
    if (cfg.precision == Precision::f32) {
      epoch_step<float>(theta, q, ccfg, opt, grad, lb, diag);
    } else {
      epoch_step<double>(theta, q, ccfg, opt, grad, lb, diag);
    }
    adam_step(adam, theta.theta, grad.theta, eta);

    if (is_decode_epoch(epoch, cfg.epochs, cfg.decode)) {
      const FeasibleMoments rep =
          cfg.precision == Precision::f32
              ? current_repaired<float>(theta, q, ccfg, opt)
              : current_repaired<double>(theta, q, ccfg, opt);
      const IsingModel model = fit_maxent_ising(rep, q, cfg.fit_eps);
      const std::uint64_t gibbs_seed =
          derive_stream(cfg.seed ^ 0x6465636f646575ull, static_cast<std::uint64_t>(epoch));
      const SampleBatch batch =
          gibbs_sample(model, sweeps, cfg.decode.chains, gibbs_seed, q);
      auto [bits, energy] = best_bitstring(batch);
      int chain = 0;
      for (std::size_t c = 0; c < batch.energies.size(); ++c)
        if (batch.energies[c] == energy) {
          chain = static_cast<int>(c);
          break;
        }
      const double cut = cut_value(g, bits);
      if (cut > rec.best_cut) {
        rec.best_cut = cut;
        rec.best_bits = bits;
      }
      rec.final_cut = cut;
      rec.decodes.push_back({epoch, energy, cut, chain, rec.best_cut});
      if (cfg.keep_final_moments && epoch == cfg.epochs) rec.final_moments = rep;
    }

    const double dt = cfg.timing ? seconds_since(t0) : 0.0;
    rec.epochs.push_back({epoch, lb.energy, lb.kl, lambda, eta, diag.report.violation_before, dt,
                          diag.report.iterations_used, diag.report.violation_after});
  }
  rec.wall_time_s = cfg.timing ? seconds_since(run_start) : 0.0;
  return rec;
}

}  // namespace twobody
