#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "twobody/artifacts.hpp"
#include "twobody/graph.hpp"
#include "twobody/ising.hpp"
#include "twobody/train.hpp"
#include "twobody/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace twobody;

namespace {

struct InstanceSpec {
  std::string type;  // "gset" | "er"
  std::string path;
  int n = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;

  std::string name() const {
    if (type == "gset") {
      std::string base = fs::path(path).stem().string();
      return base.empty() ? "gset" : base;
    }
    std::ostringstream s;
    s << "er_n" << n << "_a" << alpha << "_s" << seed;
    return s.str();
  }
};

struct CliConfig {
  InstanceSpec instance;
  int depth = 2;
  double rho = 0.5;
  int epochs = 0;  // 0: 300 for n <= 1000, else 330
  std::vector<std::uint64_t> seeds = {0};
  KlRampSchedule kl;
  LrSchedule lr;
  AdamParams adam;
  int ipf_iterations = 1;
  double ipf_tol = 1e-6;
  DecodePolicy decode;
  bool gaussian_init = false;
  double init_sigma = 0.01;
  std::optional<double> best_known;
  std::string best_known_file;
  std::string precision = "f64";
  bool timing = true;
  int workers = 0;  // 0: min(hardware, seed count)
  bool dump_moments = false;
  std::string out_dir;
};

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

void require_keys(const json& j, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) fail("config: unknown key '" + it.key() + "' in " + where);
  }
}

void load_config_file(const std::string& path, CliConfig& cfg) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail("config parse error in " + path + ": " + e.what());
  }
  require_keys(j, "top level",
               {"instance", "depth", "rho", "epochs", "seeds", "schedules", "ipf", "adam",
                "decode", "init", "precision", "timing", "best_known", "best_known_file",
                "workers", "out", "dump_moments"});
  if (j.contains("instance")) {
    const json& ji = j["instance"];
    require_keys(ji, "instance", {"type", "path", "n", "alpha", "seed"});
    cfg.instance.type = ji.at("type").get<std::string>();
    if (cfg.instance.type == "gset") {
      cfg.instance.path = ji.at("path").get<std::string>();
    } else if (cfg.instance.type == "er") {
      cfg.instance.n = ji.at("n").get<int>();
      cfg.instance.alpha = ji.at("alpha").get<double>();
      cfg.instance.seed = ji.value("seed", 0ull);
    } else {
      fail("config: instance.type must be 'gset' or 'er'");
    }
  }
  if (j.contains("depth")) cfg.depth = j["depth"].get<int>();
  if (j.contains("rho")) cfg.rho = j["rho"].get<double>();
  if (j.contains("epochs")) cfg.epochs = j["epochs"].get<int>();
  if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (j.contains("schedules")) {
    const json& js = j["schedules"];
    require_keys(js, "schedules", {"kl", "lr"});
    if (js.contains("kl")) {
      const json& jk = js["kl"];
      require_keys(jk, "schedules.kl", {"lambda_start", "lambda_end", "f_start", "f_end"});
      cfg.kl.lambda_start = jk.value("lambda_start", cfg.kl.lambda_start);
      cfg.kl.lambda_end = jk.value("lambda_end", cfg.kl.lambda_end);
      cfg.kl.f_start = jk.value("f_start", cfg.kl.f_start);
      cfg.kl.f_end = jk.value("f_end", cfg.kl.f_end);
    }
    if (js.contains("lr")) {
      const json& jl = js["lr"];
      require_keys(jl, "schedules.lr", {"eta_start", "eta_peak", "eta_end", "f_warm", "f_hold"});
      cfg.lr.eta_start = jl.value("eta_start", cfg.lr.eta_start);
      cfg.lr.eta_peak = jl.value("eta_peak", cfg.lr.eta_peak);
      cfg.lr.eta_end = jl.value("eta_end", cfg.lr.eta_end);
      cfg.lr.f_warm = jl.value("f_warm", cfg.lr.f_warm);
      cfg.lr.f_hold = jl.value("f_hold", cfg.lr.f_hold);
    }
  }
  if (j.contains("ipf")) {
    const json& ji = j["ipf"];
    require_keys(ji, "ipf", {"iterations", "tol"});
    cfg.ipf_iterations = ji.value("iterations", cfg.ipf_iterations);
    cfg.ipf_tol = ji.value("tol", cfg.ipf_tol);
  }
  if (j.contains("adam")) {
    const json& ja = j["adam"];
    require_keys(ja, "adam", {"beta1", "beta2", "eps"});
    cfg.adam.beta1 = ja.value("beta1", cfg.adam.beta1);
    cfg.adam.beta2 = ja.value("beta2", cfg.adam.beta2);
    cfg.adam.eps = ja.value("eps", cfg.adam.eps);
  }
  if (j.contains("decode")) {
    const json& jd = j["decode"];
    require_keys(jd, "decode", {"chains", "sweeps", "every", "dense_tail", "dense_every"});
    cfg.decode.chains = jd.value("chains", cfg.decode.chains);
    cfg.decode.sweeps = jd.value("sweeps", cfg.decode.sweeps);
    cfg.decode.every = jd.value("every", cfg.decode.every);
    cfg.decode.dense_tail = jd.value("dense_tail", cfg.decode.dense_tail);
    cfg.decode.dense_every = jd.value("dense_every", cfg.decode.dense_every);
  }
  if (j.contains("init")) {
    const json& ji = j["init"];
    require_keys(ji, "init", {"gaussian", "sigma"});
    cfg.gaussian_init = ji.value("gaussian", cfg.gaussian_init);
    cfg.init_sigma = ji.value("sigma", cfg.init_sigma);
  }
  if (j.contains("precision")) cfg.precision = j["precision"].get<std::string>();
  if (j.contains("timing")) cfg.timing = j["timing"].get<bool>();
  if (j.contains("best_known") && !j["best_known"].is_null())
    cfg.best_known = j["best_known"].get<double>();
  if (j.contains("best_known_file")) cfg.best_known_file = j["best_known_file"].get<std::string>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("dump_moments")) cfg.dump_moments = j["dump_moments"].get<bool>();
}

void validate(const CliConfig& cfg) {
  if (cfg.instance.type.empty()) fail("no instance given (use --gset, --er, or a config file)");
  if (cfg.depth < 0) fail("depth must be nonnegative");
  if (cfg.rho < 0.0 || cfg.rho > 1.0) fail("rho must lie in [0,1]");
  if (cfg.epochs < 0) fail("epochs must be positive");
  if (cfg.seeds.empty()) fail("need at least one seed");
  if (cfg.decode.chains < 1) fail("chains must be >= 1");
  if (cfg.decode.sweeps < 0) fail("sweeps must be nonnegative");
  if (cfg.ipf_iterations < 1) fail("ipf iterations must be >= 1");
  if (cfg.precision != "f64" && cfg.precision != "f32") fail("precision must be f64 or f32");
  if (cfg.out_dir.empty()) fail("--out directory is required");
}

Graph load_instance(const InstanceSpec& spec) {
  if (spec.type == "gset") {
    if (fs::path(spec.path).extension() == ".json") {
      std::ifstream in(spec.path);
      if (!in) fail("cannot open " + spec.path);
      std::stringstream ss;
      ss << in.rdbuf();
      return graph_from_json(ss.str());
    }
    return parse_gset_file(spec.path);
  }
  return generate_er(spec.n, spec.alpha, spec.seed);
}

std::string default_best_known_file(const char* argv0) {
  // Look next to the binary and in the working directory.
  std::vector<fs::path> candidates;
  std::error_code ec;
  fs::path exe = fs::canonical(fs::path(argv0), ec);
  if (!ec) {
    candidates.push_back(exe.parent_path() / "data" / "gset_best_known.json");
    candidates.push_back(exe.parent_path().parent_path() / "data" / "gset_best_known.json");
    candidates.push_back(exe.parent_path().parent_path().parent_path() / "data" /
                         "gset_best_known.json");
  }
  candidates.push_back(fs::path("data") / "gset_best_known.json");
  for (const auto& c : candidates)
    if (fs::exists(c, ec)) return c.string();
  return {};
}

std::optional<double> resolve_best_known(const CliConfig& cfg, const Graph& g,
                                         const char* argv0) {
  if (cfg.best_known) return cfg.best_known;
  const std::string file =
      cfg.best_known_file.empty() ? default_best_known_file(argv0) : cfg.best_known_file;
  if (!file.empty()) {
    if (auto v = lookup_best_known(file, cfg.instance.name())) return v;
  }
  // Small instances get an exhaustive optimum so ratios are always defined.
  if (g.n <= 20) {
    double best = 0.0;
    Bitstring x(g.n, 0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << g.n); ++mask) {
      for (int i = 0; i < g.n; ++i) x[i] = (mask >> i) & 1;
      best = std::max(best, cut_value(g, x));
    }
    return best;
  }
  return std::nullopt;
}

json effective_config_json(const CliConfig& cfg, int epochs, int sweeps) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json ji;
  ji["type"] = cfg.instance.type;
  if (cfg.instance.type == "gset") {
    ji["path"] = cfg.instance.path;
  } else {
    ji["n"] = cfg.instance.n;
    ji["alpha"] = cfg.instance.alpha;
    ji["seed"] = cfg.instance.seed;
  }
  j["instance"] = ji;
  j["depth"] = cfg.depth;
  j["rho"] = cfg.rho;
  j["epochs"] = epochs;
  j["seeds"] = cfg.seeds;
  j["schedules"] = {{"kl",
                     {{"lambda_start", cfg.kl.lambda_start},
                      {"lambda_end", cfg.kl.lambda_end},
                      {"f_start", cfg.kl.f_start},
                      {"f_end", cfg.kl.f_end}}},
                    {"lr",
                     {{"eta_start", cfg.lr.eta_start},
                      {"eta_peak", cfg.lr.eta_peak},
                      {"eta_end", cfg.lr.eta_end},
                      {"f_warm", cfg.lr.f_warm},
                      {"f_hold", cfg.lr.f_hold}}}};
  j["ipf"] = {{"iterations", cfg.ipf_iterations}, {"tol", cfg.ipf_tol}};
  j["adam"] = {{"beta1", cfg.adam.beta1}, {"beta2", cfg.adam.beta2}, {"eps", cfg.adam.eps}};
  j["decode"] = {{"chains", cfg.decode.chains},
                 {"sweeps", sweeps},
                 {"every", cfg.decode.every},
                 {"dense_tail", cfg.decode.dense_tail},
                 {"dense_every", cfg.decode.dense_every}};
  j["init"] = {{"gaussian", cfg.gaussian_init}, {"sigma", cfg.init_sigma}};
  j["precision"] = cfg.precision;
  j["timing"] = cfg.timing;
  if (cfg.best_known)
    j["best_known"] = *cfg.best_known;
  else
    j["best_known"] = nullptr;
  j["workers"] = cfg.workers;
  j["out"] = cfg.out_dir;
  j["dump_moments"] = cfg.dump_moments;
  return j;
}

int resolve_epochs(const CliConfig& cfg, int n) {
  if (cfg.epochs > 0) return cfg.epochs;
  return n <= 1000 ? 300 : 330;
}

void add_config_flags(CLI::App* cmd, CliConfig& cfg, std::string& config_path,
                      std::string& er_spec, std::string& seeds_spec, std::string& kl_spec,
                      std::string& lr_spec) {
  cmd->add_option("--config", config_path, "JSON config file; flags override its values");
  cmd->add_option("--gset", cfg.instance.path, "GSET-format (or .json) instance file");
  cmd->add_option("--er", er_spec, "ER instance as n,alpha,seed (e.g. 16,4.0,1)");
  cmd->add_option("--depth", cfg.depth, "circuit layer count D");
  cmd->add_option("--rho", cfg.rho, "projection damping in [0,1]; 0 disables projection");
  cmd->add_option("--epochs", cfg.epochs, "epoch budget (default 300, 330 for n > 1000)");
  cmd->add_option("--seeds", seeds_spec, "comma-separated run seeds (default 0)");
  cmd->add_option("--chains", cfg.decode.chains, "Gibbs chains per decode");
  cmd->add_option("--sweeps", cfg.decode.sweeps, "Gibbs sweeps per chain (default 10*n*log2 n)");
  cmd->add_option("--decode-every", cfg.decode.every, "decode cadence in epochs");
  cmd->add_option("--ipf-iters", cfg.ipf_iterations, "projection iterations per loss");
  cmd->add_option("--ipf-tol", cfg.ipf_tol, "projection early-exit tolerance");
  cmd->add_option("--kl-ramp", kl_spec, "lambda_start,lambda_end,f_start,f_end");
  cmd->add_option("--lr-schedule", lr_spec, "eta_start,eta_peak,eta_end,f_warm,f_hold");
  cmd->add_option("--precision", cfg.precision, "statevector precision: f64 or f32");
  cmd->add_option("--best-known", [&cfg](const CLI::results_t& r) {
    cfg.best_known = std::stod(r[0]);
    return true;
  }, "best-known cut for ratio reporting");
  cmd->add_option("--best-known-file", cfg.best_known_file,
                  "JSON file of best-known cuts keyed by instance name");
  cmd->add_flag("--gaussian-init", cfg.gaussian_init, "Gaussian theta init instead of zeros");
  cmd->add_option("--init-sigma", cfg.init_sigma, "stddev for --gaussian-init");
  cmd->add_flag("!--no-timing", cfg.timing, "omit wall times for byte-reproducible artifacts");
  cmd->add_option("--workers", cfg.workers, "seed-level worker pool size (default: cores)");
  cmd->add_flag("--dump-moments", cfg.dump_moments, "also write final repaired moments JSON");
  cmd->add_option("--out", cfg.out_dir, "output directory");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    seeds.push_back(std::stoull(tok));
  }
  if (seeds.empty()) fail("empty seed list");
  return seeds;
}

std::vector<double> parse_double_list(const std::string& s, std::size_t expect,
                                      const std::string& what) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  if (vals.size() != expect) fail(what + ": expected " + std::to_string(expect) + " values");
  return vals;
}

void finalize_config(CliConfig& cfg, const std::string& config_path, const std::string& er_spec,
                     const std::string& seeds_spec, const std::string& kl_spec,
                     const std::string& lr_spec, const CLI::App* cmd) {
  CliConfig from_file;
  if (!config_path.empty()) load_config_file(config_path, from_file);
  // Start from the file values, then apply any explicitly passed flags.
  CliConfig merged = config_path.empty() ? cfg : from_file;
  auto passed = [cmd](const std::string& flag) { return cmd->count(flag) > 0; };
  if (passed("--gset")) {
    merged.instance = {};
    merged.instance.type = "gset";
    merged.instance.path = cfg.instance.path;
  }
  if (!er_spec.empty()) {
    if (passed("--gset")) fail("give either --gset or --er, not both");
    const auto v = parse_double_list(er_spec, 3, "--er");
    merged.instance = {};
    merged.instance.type = "er";
    merged.instance.n = static_cast<int>(v[0]);
    merged.instance.alpha = v[1];
    merged.instance.seed = static_cast<std::uint64_t>(v[2]);
  }
  if (passed("--depth")) merged.depth = cfg.depth;
  if (passed("--rho")) merged.rho = cfg.rho;
  if (passed("--epochs")) merged.epochs = cfg.epochs;
  if (!seeds_spec.empty()) merged.seeds = parse_seed_list(seeds_spec);
  if (passed("--chains")) merged.decode.chains = cfg.decode.chains;
  if (passed("--sweeps")) merged.decode.sweeps = cfg.decode.sweeps;
  if (passed("--decode-every")) merged.decode.every = cfg.decode.every;
  if (passed("--ipf-iters")) merged.ipf_iterations = cfg.ipf_iterations;
  if (passed("--ipf-tol")) merged.ipf_tol = cfg.ipf_tol;
  if (!kl_spec.empty()) {
    const auto v = parse_double_list(kl_spec, 4, "--kl-ramp");
    merged.kl = {v[0], v[1], v[2], v[3]};
  }
  if (!lr_spec.empty()) {
    const auto v = parse_double_list(lr_spec, 5, "--lr-schedule");
    merged.lr = {v[0], v[1], v[2], v[3], v[4]};
  }
  if (passed("--precision")) merged.precision = cfg.precision;
  if (cfg.best_known) merged.best_known = cfg.best_known;
  if (passed("--best-known-file")) merged.best_known_file = cfg.best_known_file;
  if (passed("--gaussian-init")) merged.gaussian_init = cfg.gaussian_init;
  if (passed("--init-sigma")) merged.init_sigma = cfg.init_sigma;
  if (passed("--no-timing")) merged.timing = cfg.timing;
  if (passed("--workers")) merged.workers = cfg.workers;
  if (passed("--dump-moments")) merged.dump_moments = cfg.dump_moments;
  if (passed("--out")) merged.out_dir = cfg.out_dir;
  cfg = merged;
  validate(cfg);
}

TrainConfig to_train_config(const CliConfig& cfg, std::uint64_t seed, int epochs,
                            std::optional<double> best_known) {
  TrainConfig t;
  t.depth = cfg.depth;
  t.rho = cfg.rho;
  t.epochs = epochs;
  t.seed = seed;
  t.kl = cfg.kl;
  t.lr = cfg.lr;
  t.adam = cfg.adam;
  t.ipf_iterations = cfg.ipf_iterations;
  t.ipf_tol = cfg.ipf_tol;
  t.decode = cfg.decode;
  t.gaussian_init = cfg.gaussian_init;
  t.init_sigma = cfg.init_sigma;
  t.best_known = best_known;
  t.timing = cfg.timing;
  t.precision = cfg.precision == "f32" ? Precision::f32 : Precision::f64;
  return t;
}

int cmd_solve(CliConfig& cfg, const char* argv0) {
  const Graph g = load_instance(cfg.instance);
  const auto best_known = resolve_best_known(cfg, g, argv0);
  const int epochs = resolve_epochs(cfg, g.n);
  const int sweeps = cfg.decode.sweeps > 0 ? cfg.decode.sweeps : default_sweeps(g.n);
  const CircuitConfig ccfg(g.n, cfg.depth);

  fs::create_directories(cfg.out_dir);
  atomic_write_file((fs::path(cfg.out_dir) / "effective_config.json").string(),
                    effective_config_json(cfg, epochs, sweeps).dump(2) + "\n");

  RunMeta meta;
  meta.instance = cfg.instance.name();
  meta.n = g.n;
  meta.edge_count = static_cast<int>(g.edges.size());
  meta.depth = cfg.depth;
  meta.rho = cfg.rho;
  meta.n_qubits = ccfg.n_qubits;
  meta.two_qubit_gates = ccfg.two_qubit_gate_count();

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers = cfg.workers > 0
                          ? cfg.workers
                          : std::max(1, std::min<int>(hw > 0 ? hw : 1,
                                                      static_cast<int>(cfg.seeds.size())));

  std::atomic<std::size_t> next{0};
  std::vector<std::string> lines(cfg.seeds.size());
  std::mutex err_mutex;
  std::vector<std::string> errors;

  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cfg.seeds.size()) break;
      const std::uint64_t seed = cfg.seeds[k];
      try {
        TrainConfig tc = to_train_config(cfg, seed, epochs, best_known);
        tc.decode.sweeps = sweeps;
        tc.keep_final_moments = cfg.dump_moments;
        const RunRecord rec = train(g, tc);
        RunMeta m = meta;
        m.seed = seed;
        const std::string tag = "seed" + std::to_string(seed);
        atomic_write_file((fs::path(cfg.out_dir) / ("run_" + tag + ".jsonl")).string(),
                          run_record_jsonl(rec));
        atomic_write_file((fs::path(cfg.out_dir) / ("summary_" + tag + ".json")).string(),
                          summary_json(m, rec));
        atomic_write_file((fs::path(cfg.out_dir) / ("curve_" + tag + ".csv")).string(),
                          anytime_curve_csv(rec));
        if (rec.final_moments) {
          atomic_write_file((fs::path(cfg.out_dir) / ("moments_" + tag + ".json")).string(),
                            moments_to_json(*rec.final_moments));
        }
        std::ostringstream line;
        line << meta.instance << " seed " << seed << ": best_cut " << rec.best_cut;
        if (auto r = rec.r_star()) line << " r* " << *r;
        lines[k] = line.str();
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        errors.push_back("seed " + std::to_string(seed) + ": " + e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const auto& line : lines)
    if (!line.empty()) std::cout << line << "\n";
  if (!errors.empty()) {
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    return 1;
  }
  return 0;
}

int cmd_baseline(CliConfig& cfg, const char* argv0) {
  const Graph g = load_instance(cfg.instance);
  const auto best_known = resolve_best_known(cfg, g, argv0);
  const QuboInstance q = maxcut_to_qubo(g);
  const int sweeps = cfg.decode.sweeps > 0 ? cfg.decode.sweeps : default_sweeps(g.n);

  fs::create_directories(cfg.out_dir);
  atomic_write_file((fs::path(cfg.out_dir) / "effective_config.json").string(),
                    effective_config_json(cfg, 0, sweeps).dump(2) + "\n");

  const IsingModel model = robust_ising_from_qubo(q);
  for (const std::uint64_t seed : cfg.seeds) {
    const auto t0 = std::chrono::steady_clock::now();
    const SampleBatch batch = gibbs_sample(model, sweeps, cfg.decode.chains, seed, q);
    auto [bits, energy] = best_bitstring(batch);
    BaselineResult r;
    r.meta.instance = cfg.instance.name();
    r.meta.n = g.n;
    r.meta.edge_count = static_cast<int>(g.edges.size());
    r.meta.seed = seed;
    r.best_cut = cut_value(g, bits);
    r.best_energy = energy;
    r.best_known = best_known;
    r.sweeps = sweeps;
    r.chains = cfg.decode.chains;
    r.wall_time_s =
        cfg.timing
            ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
            : 0.0;
    atomic_write_file(
        (fs::path(cfg.out_dir) / ("baseline_summary_seed" + std::to_string(seed) + ".json"))
            .string(),
        baseline_summary_json(r));
    std::cout << r.meta.instance << " baseline seed " << seed << ": best_cut " << r.best_cut;
    if (best_known && *best_known != 0.0) std::cout << " ratio " << r.best_cut / *best_known;
    std::cout << "\n";
  }
  return 0;
}

int cmd_gen_er(int n, double alpha, std::uint64_t seed, const std::string& out, bool as_json) {
  const Graph g = generate_er(n, alpha, seed);
  std::string content;
  if (as_json || fs::path(out).extension() == ".json") {
    content = graph_to_json(g);
  } else {
    std::ostringstream ss;
    serialize_gset(g, ss);
    content = ss.str();
  }
  atomic_write_file(out, content);
  std::cout << "wrote " << out << " (n=" << g.n << ", edges=" << g.edges.size() << ")\n";
  return 0;
}

struct SummaryRow {
  std::string instance;
  int n = 0, edges = 0, depth = 0;
  std::optional<double> r_star, final_ratio, best_known;
  double best_cut = 0.0;
  double wall_time_s = 0.0;
  std::string method;  // empty for the solver
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

int cmd_report(const std::vector<std::string>& dirs, const std::string& csv_out) {
  std::vector<SummaryRow> rows;
  for (const auto& dir : dirs) {
    if (!fs::is_directory(dir)) fail("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      const bool solver = name.rfind("summary_seed", 0) == 0;
      const bool baseline = name.rfind("baseline_summary_seed", 0) == 0;
      if (!solver && !baseline) continue;
      std::ifstream in(entry.path());
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        fail("corrupt run file " + entry.path().string() + ": " + e.what());
      }
      SummaryRow row;
      row.instance = j.at("instance").get<std::string>();
      row.n = j.at("n").get<int>();
      row.edges = j.at("edges").get<int>();
      row.best_cut = j.at("best_cut").get<double>();
      row.wall_time_s = j.value("wall_time_s", 0.0);
      if (j.contains("best_known") && j["best_known"].is_number())
        row.best_known = j["best_known"].get<double>();
      if (solver) {
        row.depth = j.at("D").get<int>();
        if (j.contains("r_star") && j["r_star"].is_number())
          row.r_star = j["r_star"].get<double>();
        if (j.contains("final_ratio") && j["final_ratio"].is_number())
          row.final_ratio = j["final_ratio"].get<double>();
      } else {
        row.method = j.at("method").get<std::string>();
        if (j.contains("ratio") && j["ratio"].is_number()) row.r_star = j["ratio"].get<double>();
      }
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) fail("no run summaries found");

  // Solver rows grouped by (instance, depth).
  std::map<std::pair<std::string, int>, std::vector<SummaryRow>> groups;
  std::map<std::string, std::vector<SummaryRow>> baselines;
  for (const auto& r : rows) {
    if (r.method.empty())
      groups[{r.instance, r.depth}].push_back(r);
    else
      baselines[r.instance].push_back(r);
  }

  std::ostringstream csv;
  csv << "# twobody-csv v" << kSchemaVersion << " benchmark_report\n";
  csv << "instance,method,n,edges,D,runs,r_star_best,r_star_median,r_star_mean,"
         "gap_final_median,wall_s_median,is_depth_star\n";

  // Best median r* per instance picks D*.
  std::map<std::string, std::pair<int, double>> depth_star;
  for (const auto& [key, rs] : groups) {
    std::vector<double> ratios;
    for (const auto& r : rs)
      if (r.r_star) ratios.push_back(*r.r_star);
    const double med = ratios.empty() ? -1.0 : median(ratios);
    auto it = depth_star.find(key.first);
    if (it == depth_star.end() || med > it->second.second)
      depth_star[key.first] = {key.second, med};
  }

  std::cout << "instance      method             D   runs  r*_best  r*_med   r*_mean  gap_med   "
               "wall_med_s\n";
  auto emit = [&](const std::string& instance, const std::string& method, int n, int edges,
                  int depth, const std::vector<SummaryRow>& rs, bool star) {
    std::vector<double> ratios, finals, walls;
    for (const auto& r : rs) {
      if (r.r_star) ratios.push_back(*r.r_star);
      if (r.final_ratio) finals.push_back(1.0 - *r.final_ratio);
      walls.push_back(r.wall_time_s);
    }
    const bool have = !ratios.empty();
    const double best = have ? *std::max_element(ratios.begin(), ratios.end()) : 0.0;
    const double med = have ? median(ratios) : 0.0;
    const double mean =
        have ? std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size() : 0.0;
    const double gap_med = finals.empty() ? 0.0 : median(finals);
    const double wall_med = median(walls);
    auto num = [](bool ok, double v) {
      if (!ok) return std::string("-");
      char b[32];
      std::snprintf(b, sizeof(b), "%.5g", v);
      return std::string(b);
    };
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-13s %-18s %-3s %4zu  %-8s %-8s %-8s %-9s %-9.5g%s",
                  instance.c_str(), method.c_str(),
                  method == "twobody" ? std::to_string(depth).c_str() : "-", rs.size(),
                  num(have, best).c_str(), num(have, med).c_str(), num(have, mean).c_str(),
                  num(!finals.empty(), gap_med).c_str(), wall_med, star ? "  [D*]" : "");
    std::cout << buf << "\n";
    csv << instance << ',' << method << ',' << n << ',' << edges << ',' << depth << ','
        << rs.size() << ',';
    if (have)
      csv << best << ',' << med << ',' << mean << ',';
    else
      csv << ",,,";
    if (!finals.empty())
      csv << gap_med << ',';
    else
      csv << ',';
    csv << wall_med << ',' << (star ? 1 : 0) << "\n";
  };

  for (const auto& [key, rs] : groups) {
    const bool star = depth_star[key.first].first == key.second;
    emit(key.first, "twobody", rs.front().n, rs.front().edges, key.second, rs, star);
  }
  for (const auto& [instance, rs] : baselines)
    emit(instance, rs.front().method, rs.front().n, rs.front().edges, 0, rs, false);

  if (!csv_out.empty()) {
    atomic_write_file(csv_out, csv.str());
    std::cout << "wrote " << csv_out << "\n";
  }
  return 0;
}

int cmd_verify() {
  const auto results = run_verification();
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) std::cout << " — " << r.detail;
    std::cout << "\n";
    if (!r.passed) ++failures;
  }
  std::cout << (failures == 0 ? "all checks passed\n"
                              : std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twobody — log-width two-body moment solver for Max-Cut/QUBO"};
  app.require_subcommand(1);

  CliConfig solve_cfg, base_cfg;
  std::string solve_config_path, solve_er, solve_seeds, solve_kl, solve_lr;
  std::string base_config_path, base_er, base_seeds, base_kl, base_lr;

  CLI::App* solve = app.add_subcommand("solve", "train and decode an instance");
  add_config_flags(solve, solve_cfg, solve_config_path, solve_er, solve_seeds, solve_kl,
                   solve_lr);

  CLI::App* baseline =
      app.add_subcommand("baseline-ising", "direct QUBO->Ising Gibbs baseline");
  add_config_flags(baseline, base_cfg, base_config_path, base_er, base_seeds, base_kl, base_lr);

  int gen_n = 0;
  double gen_alpha = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  bool gen_json = false;
  CLI::App* gen = app.add_subcommand("gen-er", "generate an Erdos-Renyi instance file");
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--alpha", gen_alpha, "expected degree")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file")->required();
  gen->add_flag("--json", gen_json, "write the JSON graph form instead of GSET text");

  std::vector<std::string> report_dirs;
  std::string report_csv;
  CLI::App* report = app.add_subcommand("report", "aggregate run directories into a table");
  report->add_option("dirs", report_dirs, "run directories")->required();
  report->add_option("--csv", report_csv, "also write the table as CSV");

  CLI::App* verify = app.add_subcommand("verify", "run the oracle/property suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      finalize_config(solve_cfg, solve_config_path, solve_er, solve_seeds, solve_kl, solve_lr,
                      solve);
      return cmd_solve(solve_cfg, argv[0]);
    }
    if (baseline->parsed()) {
      finalize_config(base_cfg, base_config_path, base_er, base_seeds, base_kl, base_lr,
                      baseline);
      return cmd_baseline(base_cfg, argv[0]);
    }
    if (gen->parsed()) return cmd_gen_er(gen_n, gen_alpha, gen_seed, gen_out, gen_json);
    if (report->parsed()) return cmd_report(report_dirs, report_csv);
    if (verify->parsed()) return cmd_verify();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
