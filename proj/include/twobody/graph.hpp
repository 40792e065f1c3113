#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace twobody {

struct Edge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

/// Undirected weighted graph. Edges are stored once per unordered pair with
/// u < v; self-loops and duplicates are rejected at construction.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;
};

using Bitstring = std::vector<std::uint8_t>;

/// Validates index ranges, u != v, and duplicate pairs; normalizes u < v.
Graph make_graph(int n, std::vector<Edge> edges);

/// GSET text format: first line "n m", then m lines "u v w" with 1-based
/// vertex indices. Errors name the offending line.
Graph parse_gset(std::istream& in);
Graph parse_gset_file(const std::string& path);
void serialize_gset(const Graph& g, std::ostream& out);

/// Erdos-Renyi G(n, p) with p = alpha / (n - 1), unit weights. Deterministic:
/// the same (n, alpha, seed) produces a byte-identical edge list.
Graph generate_er(int n, double alpha, std::uint64_t seed);

/// Total weight of edges crossing the partition induced by x.
double cut_value(const Graph& g, const Bitstring& x);

/// Symmetric QUBO, minimize E(x) = sum_i Q_ii x_i + 2 sum_{i<j} Q_ij x_i x_j.
/// Off-diagonal entries are stored once per unordered pair (the edge set).
struct QuboInstance {
  int n = 0;
  std::vector<double> diag;
  std::vector<Edge> offdiag;
};

/// Max-Cut as QUBO minimization: Q_ii = -sum_j w_ij, Q_ij = w_ij on edges,
/// so that E(x) = -cut(x) for every bitstring.
QuboInstance maxcut_to_qubo(const Graph& g);

double qubo_energy_bits(const QuboInstance& q, const Bitstring& x);

// JSON form {"n": .., "edges": [[u, v, w], ..]} used by the CLI.
std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

// QUBO JSON adds the diagonal: {"n": .., "diag": [..], "edges": [[u, v, w], ..]}.
std::string qubo_to_json(const QuboInstance& q);
QuboInstance qubo_from_json(const std::string& text);

}  // namespace twobody
