// Black-box checks of the CLI surface: validation failures exit nonzero,
// unknown config keys are rejected, and the report aggregation follows the
// median / best-median-depth rules. Invoked by ctest with the binary path.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
int g_failures = 0;

void expect(bool ok, const std::string& what) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << "\n";
  if (!ok) ++g_failures;
}

int run(const std::string& args, std::string* output = nullptr) {
  const fs::path tmp = fs::temp_directory_path() / "twobody_cli_checks_out.txt";
  const std::string cmd = "\"" + g_cli + "\" " + args + " > " + tmp.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    *output = ss.str();
  }
  return rc;
}

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_checks <path-to-cli>\n";
    return 2;
  }
  g_cli = argv[1];
  const fs::path root = fs::temp_directory_path() / "twobody_cli_checks";
  fs::remove_all(root);
  fs::create_directories(root);

  expect(run("solve --depth 2 --out " + (root / "x").string()) != 0,
         "solve without an instance exits nonzero");
  expect(run("solve --er 8,3,1 --depth 2") != 0, "solve without --out exits nonzero");
  expect(run("solve --er 8,3,1 --rho 1.5 --out " + (root / "x").string()) != 0,
         "rho outside [0,1] is rejected");
  expect(run("solve --gset " + (root / "missing.txt").string() + " --out " +
             (root / "x").string()) != 0,
         "missing instance file exits nonzero");
  expect(run("baseline-ising --er 8,0,1 --out " + (root / "x").string()) != 0,
         "baseline on an edgeless instance exits nonzero");
  expect(run("gen-er --n 4 --alpha 9 --seed 1 --out " + (root / "bad.txt").string()) != 0,
         "edge probability above one is rejected");
  expect(run("report " + (root / "empty_dir").string()) != 0,
         "report on a missing directory exits nonzero");

  write_file(root / "bad_config.json", "{\"depht\": 2}\n");
  expect(run("solve --config " + (root / "bad_config.json").string() + " --er 8,3,1 --out " +
             (root / "x").string()) != 0,
         "unknown config key is rejected");

  write_file(root / "config.json",
             "{\"instance\": {\"type\": \"er\", \"n\": 10, \"alpha\": 3.0, \"seed\": 2},\n"
             " \"depth\": 1, \"epochs\": 20, \"seeds\": [4], \"timing\": false,\n"
             " \"out\": \"" + (root / "from_config").string() + "\"}\n");
  expect(run("solve --config " + (root / "config.json").string()) == 0,
         "config-file-driven solve succeeds");
  expect(fs::exists(root / "from_config" / "summary_seed4.json"),
         "config-driven run wrote its summary");

  // Flag overrides the file value: different depth shows up in the echo.
  expect(run("solve --config " + (root / "config.json").string() + " --depth 2 --out " +
             (root / "override").string()) == 0,
         "flag override run succeeds");
  {
    std::ifstream in(root / "override" / "effective_config.json");
    std::stringstream ss;
    ss << in.rdbuf();
    expect(ss.str().find("\"depth\": 2") != std::string::npos,
           "explicit flag overrides the config file");
  }

  // Report aggregation: median of {0.98, 1.00} is 0.99 and the best-median
  // depth wins the D* marker.
  const fs::path rdir = root / "runs";
  fs::create_directories(rdir);
  auto summary = [](int depth, int seed, double r) {
    std::ostringstream s;
    s << "{\"schema_version\":1,\"instance\":\"demo\",\"n\":10,\"edges\":15,\"D\":" << depth
      << ",\"rho\":0.5,\"seed\":" << seed << ",\"n_qubits\":10,\"two_qubit_gates\":18,"
      << "\"best_cut\":" << r * 100 << ",\"final_cut\":" << r * 100
      << ",\"best_known\":100.0,\"r_star\":" << r << ",\"final_ratio\":" << r
      << ",\"wall_time_s\":0.0}\n";
    return s.str();
  };
  write_file(rdir / "summary_seed0.json", summary(2, 0, 0.98));
  write_file(rdir / "summary_seed1.json", summary(2, 1, 1.00));
  write_file(rdir / "summary_seed2.json", summary(3, 2, 0.97));
  write_file(rdir / "summary_seed3.json", summary(3, 3, 0.97));
  std::string text;
  expect(run("report " + rdir.string() + " --csv " + (rdir / "report.csv").string(), &text) == 0,
         "report over crafted summaries succeeds");
  {
    std::ifstream in(rdir / "report.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string csv = ss.str();
    const bool d2_star = csv.find("demo,twobody,10,15,2,2,1,0.99,0.99,0.01,0,1") != std::string::npos;
    const bool d3_not = csv.find("demo,twobody,10,15,3,2,0.97,0.97,0.97,0.03,0,0") != std::string::npos;
    expect(d2_star, "median 0.99 from {0.98, 1.00} and D*=2 marked");
    expect(d3_not, "depth 3 row aggregated without the D* marker");
  }

  fs::remove_all(root);
  std::cout << (g_failures == 0 ? "cli checks: all passed\n"
                                : "cli checks: " + std::to_string(g_failures) + " failed\n");
  return g_failures == 0 ? 0 : 1;
}
