#include "twobody/graph.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "twobody/prng.hpp"

namespace twobody {

namespace {

std::uint64_t pair_key(int u, int v, int n) {
  return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) +
         static_cast<std::uint64_t>(v);
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw std::runtime_error("gset parse error at line " + std::to_string(line_no) +
                           ": " + what);
}

std::string format_weight(double w) {
  // Integers print without a decimal point so integer-weight files round-trip
  // byte-exactly.
  if (w == std::floor(w) && std::abs(w) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(w));
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

Graph make_graph(int n, std::vector<Edge> edges) {
  if (n < 0) throw std::invalid_argument("graph: negative vertex count");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);
  for (auto& e : edges) {
    if (e.u == e.v) throw std::invalid_argument("graph: self-loop on vertex " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw std::invalid_argument("graph: edge index out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.insert(pair_key(e.u, e.v, n)).second)
      throw std::invalid_argument("graph: duplicate edge (" + std::to_string(e.u) +
                                  "," + std::to_string(e.v) + ")");
  }
  return Graph{n, std::move(edges)};
}

Graph parse_gset(std::istream& in) {
  std::string line;
  int line_no = 0;
  long long n = 0, m = 0;
  // Header line: "n m".
  while (true) {
    if (!std::getline(in, line)) parse_fail(line_no + 1, "missing header");
    ++line_no;
    std::istringstream ls(line);
    if (ls >> n) {
      std::string extra;
      if (!(ls >> m) || (ls >> extra)) parse_fail(line_no, "header must be 'n m'");
      break;
    }
    std::istringstream ws(line);
    std::string tok;
    if (ws >> tok) parse_fail(line_no, "header must be 'n m'");
    // blank line before the header is tolerated
  }
  if (n < 0 || m < 0) parse_fail(line_no, "negative counts in header");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(m) * 2);

  long long read = 0;
  while (read < m) {
    if (!std::getline(in, line))
      parse_fail(line_no + 1, "unexpected end of file, expected " +
                                  std::to_string(m - read) + " more edge lines");
    ++line_no;
    std::istringstream ls(line);
    long long u, v;
    double w;
    if (!(ls >> u)) {
      std::string tok;
      std::istringstream ws(line);
      if (!(ws >> tok)) continue;  // skip blank lines
      parse_fail(line_no, "malformed edge line");
    }
    std::string extra;
    if (!(ls >> v >> w) || (ls >> extra)) parse_fail(line_no, "malformed edge line");
    if (u < 1 || u > n) parse_fail(line_no, "vertex index " + std::to_string(u) +
                                                " outside [1," + std::to_string(n) + "]");
    if (v < 1 || v > n) parse_fail(line_no, "vertex index " + std::to_string(v) +
                                                " outside [1," + std::to_string(n) + "]");
    if (u == v) parse_fail(line_no, "self-loop on vertex " + std::to_string(u));
    int a = static_cast<int>(u - 1), b = static_cast<int>(v - 1);
    if (a > b) std::swap(a, b);
    if (!seen.insert(pair_key(a, b, static_cast<int>(n))).second)
      parse_fail(line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    edges.push_back({a, b, w});
    ++read;
  }
  // Anything but whitespace after the last edge is an error.
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ws(line);
    std::string tok;
    if (ws >> tok) parse_fail(line_no, "unexpected content after last edge");
  }
  return Graph{static_cast<int>(n), std::move(edges)};
}

Graph parse_gset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_gset(in);
}

void serialize_gset(const Graph& g, std::ostream& out) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges)
    out << (e.u + 1) << ' ' << (e.v + 1) << ' ' << format_weight(e.w) << '\n';
}

Graph generate_er(int n, double alpha, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_er: n must be at least 2");
  if (alpha < 0) throw std::invalid_argument("generate_er: alpha must be nonnegative");
  const double p = alpha / static_cast<double>(n - 1);
  if (p > 1.0) throw std::invalid_argument("generate_er: edge probability exceeds 1");
  SplitMix64 rng(derive_stream(seed, 0x45526762ull));  // "ERgb"
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) edges.push_back({i, j, 1.0});
  return Graph{n, std::move(edges)};
}

double cut_value(const Graph& g, const Bitstring& x) {
  if (static_cast<int>(x.size()) != g.n)
    throw std::invalid_argument("cut_value: bitstring length mismatch");
  double total = 0.0;
  for (const auto& e : g.edges)
    if (x[e.u] != x[e.v]) total += e.w;
  return total;
}

QuboInstance maxcut_to_qubo(const Graph& g) {
  QuboInstance q;
  q.n = g.n;
  q.diag.assign(g.n, 0.0);
  q.offdiag = g.edges;
  for (const auto& e : g.edges) {
    q.diag[e.u] -= e.w;
    q.diag[e.v] -= e.w;
  }
  return q;
}

double qubo_energy_bits(const QuboInstance& q, const Bitstring& x) {
  if (static_cast<int>(x.size()) != q.n)
    throw std::invalid_argument("qubo_energy_bits: bitstring length mismatch");
  double e = 0.0;
  for (int i = 0; i < q.n; ++i)
    if (x[i]) e += q.diag[i];
  for (const auto& t : q.offdiag)
    if (x[t.u] && x[t.v]) e += 2.0 * t.w;
  return e;
}

std::string graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["n"] = g.n;
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back({e.u, e.v, e.w});
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

Graph graph_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  return make_graph(j.at("n").get<int>(), std::move(edges));
}

std::string qubo_to_json(const QuboInstance& q) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["n"] = q.n;
  j["diag"] = q.diag;
  auto edges = nlohmann::json::array();
  for (const auto& e : q.offdiag) edges.push_back({e.u, e.v, e.w});
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

QuboInstance qubo_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  QuboInstance q;
  q.n = j.at("n").get<int>();
  q.diag = j.at("diag").get<std::vector<double>>();
  if (static_cast<int>(q.diag.size()) != q.n)
    throw std::runtime_error("qubo json: diagonal length mismatch");
  for (const auto& e : j.at("edges")) {
    Edge t{e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()};
    if (t.u == t.v || t.u < 0 || t.v < 0 || t.u >= q.n || t.v >= q.n)
      throw std::runtime_error("qubo json: bad edge");
    if (t.u > t.v) std::swap(t.u, t.v);
    q.offdiag.push_back(t);
  }
  return q;
}

}  // namespace twobody
