#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "twobody/artifacts.hpp"
#include "twobody/moments.hpp"

using namespace twobody;
namespace fs = std::filesystem;

namespace {

RunRecord tiny_record() {
  RunRecord rec;
  rec.epochs = {{1, -1.0, 0.1, 0.1, 0.03, 0.2, 0.0, 1, 0.1},
                {2, -1.5, 0.05, 0.1, 0.04, 0.1, 0.0, 1, 0.05}};
  rec.decodes = {{2, -4.0, 4.0, 1, 4.0}};
  rec.best_cut = 4.0;
  rec.final_cut = 4.0;
  rec.best_known = 5.0;
  rec.wall_time_s = 0.0;
  return rec;
}

}  // namespace

TEST_CASE("atomic_write_file writes and replaces") {
  const fs::path dir = fs::temp_directory_path() / "twobody_test_artifacts";
  fs::create_directories(dir);
  const std::string path = (dir / "x.txt").string();
  atomic_write_file(path, "one\n");
  atomic_write_file(path, "two\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "two\n");
  fs::remove_all(dir);
}

TEST_CASE("summary JSON carries the documented fields") {
  RunMeta meta;
  meta.instance = "er_n16_a4_s1";
  meta.n = 16;
  meta.edge_count = 30;
  meta.depth = 2;
  meta.rho = 0.5;
  meta.seed = 7;
  meta.n_qubits = 10;
  meta.two_qubit_gates = 18;
  const auto j = nlohmann::json::parse(summary_json(meta, tiny_record()));
  for (const char* key : {"schema_version", "instance", "n", "edges", "D", "rho", "seed",
                          "best_cut", "best_known", "r_star", "wall_time_s",
                          "two_qubit_gates", "n_qubits", "final_cut", "final_ratio"})
    CHECK(j.contains(key));
  CHECK(j["r_star"].get<double>() == doctest::Approx(0.8));
  CHECK(j["schema_version"].get<int>() == kSchemaVersion);
}

TEST_CASE("jsonl has one line per epoch and decode event") {
  const std::string text = run_record_jsonl(tiny_record());
  int lines = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++lines;
    const auto j = nlohmann::json::parse(line);
    CHECK((j["type"] == "epoch" || j["type"] == "decode"));
  }
  CHECK(lines == 3);
}

TEST_CASE("anytime curve CSV is versioned and well formed") {
  const std::string csv = anytime_curve_csv(tiny_record());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# twobody-csv v", 0) == 0);
  std::getline(in, line);
  CHECK(line == "epoch,incumbent_cut,incumbent_ratio");
  std::getline(in, line);
  CHECK(line == "2,4,0.8");
}

TEST_CASE("best-known lookup") {
  const fs::path dir = fs::temp_directory_path() / "twobody_test_bk";
  fs::create_directories(dir);
  const std::string path = (dir / "bk.json").string();
  atomic_write_file(path, "{\"g14\": 3064, \"note\": \"text\"}\n");
  CHECK(*lookup_best_known(path, "g14") == 3064.0);
  CHECK(!lookup_best_known(path, "g999").has_value());
  CHECK(!lookup_best_known(path, "note").has_value());
  CHECK(!lookup_best_known((dir / "missing.json").string(), "g14").has_value());
  fs::remove_all(dir);
}

TEST_CASE("moments JSON diagnostic form") {
  PseudoMoments m;
  m.mu = {0.25, 0.75};
  m.nu = SquareMatrix(2, 0.0);
  m.nu.set_sym(0, 1, 0.2);
  const auto j = nlohmann::json::parse(moments_to_json(m));
  CHECK(j["mu"].size() == 2);
  CHECK(j["nu_entries"].size() == 1);
  CHECK(j["nu_entries"][0][2].get<double>() == 0.2);
}
