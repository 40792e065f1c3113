#pragma once

#include <optional>
#include <string>

#include "twobody/train.hpp"

namespace twobody {

// Result-file schemas are versioned; the version is embedded in every JSON
// artifact and in the leading comment line of every CSV. Timing fields are
// the only non-deterministic content a run produces; disabling timing in the
// config makes every artifact byte-reproducible.
inline constexpr int kSchemaVersion = 1;

/// Writes via a temp file in the same directory followed by a rename.
void atomic_write_file(const std::string& path, const std::string& content);

struct RunMeta {
  std::string instance;
  int n = 0;
  int edge_count = 0;
  int depth = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  int n_qubits = 0;
  int two_qubit_gates = 0;
};

/// One JSON object per line: the per-epoch records followed by the decode
/// events, in epoch order.
std::string run_record_jsonl(const RunRecord& rec);

std::string summary_json(const RunMeta& meta, const RunRecord& rec);

/// Anytime curve: epoch, incumbent_cut, incumbent_ratio (blank without a
/// best-known value).
std::string anytime_curve_csv(const RunRecord& rec);

struct BaselineResult {
  RunMeta meta;
  double best_cut = 0.0;
  double best_energy = 0.0;
  std::optional<double> best_known;
  int sweeps = 0;
  int chains = 0;
  double wall_time_s = 0.0;
};
std::string baseline_summary_json(const BaselineResult& r);

/// Best-known cut lookup from a JSON object file {"g14": 3064, ...};
/// returns nullopt when the file or the key is absent.
std::optional<double> lookup_best_known(const std::string& file, const std::string& instance);

}  // namespace twobody
