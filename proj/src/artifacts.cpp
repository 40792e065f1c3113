#include "twobody/artifacts.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace twobody {

namespace {

nlohmann::json json_or_null(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string run_record_jsonl(const RunRecord& rec) {
  std::ostringstream out;
  for (const auto& e : rec.epochs) {
    nlohmann::json j;
    j["type"] = "epoch";
    j["schema_version"] = kSchemaVersion;
    j["epoch"] = e.epoch;
    j["energy"] = e.energy;
    j["kl"] = e.kl;
    j["lambda"] = e.lambda;
    j["eta"] = e.eta;
    j["violation"] = e.violation;
    j["violation_after"] = e.violation_after;
    j["ipf_iterations"] = e.ipf_iterations;
    j["wall_time"] = e.wall_time;
    out << j.dump() << '\n';
  }
  for (const auto& d : rec.decodes) {
    nlohmann::json j;
    j["type"] = "decode";
    j["schema_version"] = kSchemaVersion;
    j["epoch"] = d.epoch;
    j["best_cut"] = d.best_cut;
    j["best_energy"] = d.best_energy;
    j["chain"] = d.chain;
    j["incumbent_cut"] = d.incumbent_cut;
    if (rec.best_known && *rec.best_known != 0.0)
      j["incumbent_ratio"] = d.incumbent_cut / *rec.best_known;
    else
      j["incumbent_ratio"] = nullptr;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string summary_json(const RunMeta& meta, const RunRecord& rec) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["instance"] = meta.instance;
  j["n"] = meta.n;
  j["edges"] = meta.edge_count;
  j["D"] = meta.depth;
  j["rho"] = meta.rho;
  j["seed"] = meta.seed;
  j["n_qubits"] = meta.n_qubits;
  j["two_qubit_gates"] = meta.two_qubit_gates;
  j["best_cut"] = rec.best_cut;
  j["final_cut"] = rec.final_cut;
  j["best_known"] = json_or_null(rec.best_known);
  j["r_star"] = json_or_null(rec.r_star());
  j["final_ratio"] = json_or_null(rec.final_ratio());
  j["wall_time_s"] = rec.wall_time_s;
  return j.dump(2) + "\n";
}

std::string anytime_curve_csv(const RunRecord& rec) {
  std::ostringstream out;
  out << "# twobody-csv v" << kSchemaVersion << " anytime_curve\n";
  out << "epoch,incumbent_cut,incumbent_ratio\n";
  for (const auto& d : rec.decodes) {
    out << d.epoch << ',' << csv_number(d.incumbent_cut) << ',';
    if (rec.best_known && *rec.best_known != 0.0)
      out << csv_number(d.incumbent_cut / *rec.best_known);
    out << '\n';
  }
  return out.str();
}

std::string baseline_summary_json(const BaselineResult& r) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = "qubo-ising-robust";
  j["instance"] = r.meta.instance;
  j["n"] = r.meta.n;
  j["edges"] = r.meta.edge_count;
  j["seed"] = r.meta.seed;
  j["best_cut"] = r.best_cut;
  j["best_energy"] = r.best_energy;
  j["best_known"] = json_or_null(r.best_known);
  if (r.best_known && *r.best_known != 0.0)
    j["ratio"] = r.best_cut / *r.best_known;
  else
    j["ratio"] = nullptr;
  j["sweeps"] = r.sweeps;
  j["chains"] = r.chains;
  j["wall_time_s"] = r.wall_time_s;
  return j.dump(2) + "\n";
}

std::optional<double> lookup_best_known(const std::string& file, const std::string& instance) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    throw std::runtime_error("malformed best-known file: " + file);
  }
  if (!j.contains(instance) || !j[instance].is_number()) return std::nullopt;
  return j[instance].get<double>();
}

}  // namespace twobody
