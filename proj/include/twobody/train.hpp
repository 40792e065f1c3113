#pragma once

#include <optional>

#include "twobody/adam.hpp"
#include "twobody/ising.hpp"
#include "twobody/pipeline.hpp"
#include "twobody/schedules.hpp"

namespace twobody {

enum class Precision { f64, f32 };

struct DecodePolicy {
  int chains = 8;
  int sweeps = 0;  // 0: use default_sweeps(n)
  int every = 30;
  int dense_tail = 40;   // within the last dense_tail epochs ...
  int dense_every = 10;  // ... decode this often as well
};

/// Decode at multiples of `every`, densified near the end, and always at the
/// final epoch so the final ratio is defined.
bool is_decode_epoch(int epoch, int total, const DecodePolicy& policy);

struct TrainConfig {
  int depth = 2;
  double rho = 0.5;
  int epochs = 300;
  std::uint64_t seed = 0;
  KlRampSchedule kl;
  LrSchedule lr;
  AdamParams adam;
  int ipf_iterations = 1;
  double ipf_tol = 1e-6;
  DecodePolicy decode;
  double fit_eps = 1e-12;
  bool gaussian_init = false;  // default all-zero init (uniform state)
  double init_sigma = 0.01;
  std::optional<double> best_known;
  bool timing = true;
  Precision precision = Precision::f64;
  bool keep_final_moments = false;
};

struct EpochRecord {
  int epoch;
  double energy, kl, lambda, eta, violation, wall_time;
  int ipf_iterations;
  double violation_after;
};

struct DecodeEvent {
  int epoch;
  double best_energy;
  double best_cut;
  int chain;
  double incumbent_cut;
};

struct RunRecord {
  std::vector<EpochRecord> epochs;
  std::vector<DecodeEvent> decodes;
  Bitstring best_bits;
  double best_cut = 0.0;   // incumbent over all decode events
  double final_cut = 0.0;  // the last decode event's sample
  std::optional<double> best_known;
  double wall_time_s = 0.0;
  std::optional<FeasibleMoments> final_moments;  // kept on request

  std::optional<double> r_star() const;
  std::optional<double> final_ratio() const;
};

/// Full training run on a Max-Cut instance: per epoch one loss/gradient
/// evaluation and one Adam step under the scheduled learning rate and penalty
/// weight; at decode epochs the current repaired moments are fitted and
/// sampled, and the incumbent updated. Bit-deterministic for a fixed config.
RunRecord train(const Graph& g, const TrainConfig& cfg);

}  // namespace twobody
