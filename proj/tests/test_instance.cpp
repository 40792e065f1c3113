#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "twobody/graph.hpp"
#include "twobody/prng.hpp"

using namespace twobody;

TEST_CASE("parse_gset minimal file") {
  std::istringstream in("3 2\n1 2 1\n2 3 1\n");
  const Graph g = parse_gset(in);
  CHECK(g.n == 3);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].u == 0);
  CHECK(g.edges[0].v == 1);
  CHECK(g.edges[0].w == 1.0);
  CHECK(g.edges[1].u == 1);
  CHECK(g.edges[1].v == 2);
}

TEST_CASE("parse_gset rejects bad input with line numbers") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      parse_gset(in);
      FAIL_CHECK("expected a parse error for: " << text);
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("2 1\n1 3 1\n", "line 2");       // index out of range
  expect_error("3 2\n1 2 1\n1 2 2\n", "duplicate");
  expect_error("3 1\n1 1 1\n", "self-loop");
  expect_error("3 1\n1 2\n", "line 2");          // malformed edge line
  expect_error("3 2\n1 2 1\n", "end of file");
  expect_error("2 1\n1 2 1\nstray\n", "line 3");
}

TEST_CASE("parse/serialize round trip") {
  const Graph g = generate_er(24, 5.0, 7);
  std::ostringstream out;
  serialize_gset(g, out);
  std::istringstream in(out.str());
  const Graph h = parse_gset(in);
  CHECK(h.n == g.n);
  std::set<std::tuple<int, int, double>> a, b;
  for (const auto& e : g.edges) a.insert({e.u, e.v, e.w});
  for (const auto& e : h.edges) b.insert({e.u, e.v, e.w});
  CHECK(a == b);
}

TEST_CASE("generate_er reproducibility and degenerate cases") {
  const Graph a = generate_er(32, 4.0, 123);
  const Graph b = generate_er(32, 4.0, 123);
  REQUIRE(a.edges.size() == b.edges.size());
  for (std::size_t k = 0; k < a.edges.size(); ++k) {
    CHECK(a.edges[k].u == b.edges[k].u);
    CHECK(a.edges[k].v == b.edges[k].v);
  }
  CHECK(generate_er(16, 0.0, 1).edges.empty());
  CHECK_THROWS_AS(generate_er(4, 5.0, 1), std::invalid_argument);  // p > 1
  CHECK_THROWS_AS(generate_er(1, 0.5, 1), std::invalid_argument);
}

TEST_CASE("generate_er mean edge count matches the binomial model") {
  // E[|edges|] = C(n,2) * p with n=32, alpha=4.
  const int n = 32;
  const double alpha = 4.0;
  const double p = alpha / (n - 1);
  const double pairs = n * (n - 1) / 2.0;
  const double expected = pairs * p;
  const double se_mean = std::sqrt(pairs * p * (1 - p) / 1000.0);
  double total = 0.0;
  for (int seed = 0; seed < 1000; ++seed)
    total += static_cast<double>(generate_er(n, alpha, seed).edges.size());
  const double mean = total / 1000.0;
  CHECK(std::abs(mean - expected) < 3.0 * se_mean);
}

TEST_CASE("maxcut_to_qubo on a single unit edge") {
  const Graph g = make_graph(2, {{0, 1, 1.0}});
  const QuboInstance q = maxcut_to_qubo(g);
  CHECK(q.diag[0] == -1.0);
  CHECK(q.diag[1] == -1.0);
  REQUIRE(q.offdiag.size() == 1);
  CHECK(q.offdiag[0].w == 1.0);
  CHECK(qubo_energy_bits(q, {1, 0}) == -1.0);
  CHECK(qubo_energy_bits(q, {1, 1}) == 0.0);
  CHECK(qubo_energy_bits(q, {0, 0}) == 0.0);
}

TEST_CASE("empty graph gives the zero QUBO") {
  const QuboInstance q = maxcut_to_qubo(Graph{4, {}});
  for (double d : q.diag) CHECK(d == 0.0);
  CHECK(q.offdiag.empty());
}

TEST_CASE("energy equals minus cut, exhaustively") {
  const Graph tri = make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  const QuboInstance qt = maxcut_to_qubo(tri);
  for (unsigned mask = 0; mask < 8; ++mask) {
    Bitstring x{static_cast<std::uint8_t>(mask & 1), static_cast<std::uint8_t>((mask >> 1) & 1),
                static_cast<std::uint8_t>((mask >> 2) & 1)};
    CHECK(qubo_energy_bits(qt, x) == -cut_value(tri, x));
  }
  for (int seed = 0; seed < 3; ++seed) {
    const Graph g = generate_er(12, 4.0, seed);
    const QuboInstance q = maxcut_to_qubo(g);
    for (unsigned mask = 0; mask < (1u << 12); ++mask) {
      Bitstring x(12);
      for (int i = 0; i < 12; ++i) x[i] = (mask >> i) & 1;
      CHECK(qubo_energy_bits(q, x) == -cut_value(g, x));
    }
  }
}

TEST_CASE("cut_value basics and an independent recomputation") {
  const Graph tri = make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  CHECK(cut_value(tri, {1, 0, 0}) == 2.0);
  CHECK(cut_value(tri, {1, 1, 1}) == 0.0);
  CHECK(cut_value(tri, {0, 0, 0}) == 0.0);
  CHECK_THROWS_AS(cut_value(tri, {0, 1}), std::invalid_argument);

  const Graph g = generate_er(20, 6.0, 9);
  SplitMix64 rng(3);
  Bitstring x(20);
  for (auto& b : x) b = rng.next() & 1;
  double manual = 0.0;
  for (const auto& e : g.edges) manual += (x[e.u] + x[e.v] == 1) ? e.w : 0.0;
  CHECK(cut_value(g, x) == manual);
}

TEST_CASE("graph JSON round trip") {
  const Graph g = generate_er(10, 3.0, 5);
  const Graph h = graph_from_json(graph_to_json(g));
  CHECK(h.n == g.n);
  REQUIRE(h.edges.size() == g.edges.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    CHECK(h.edges[k].u == g.edges[k].u);
    CHECK(h.edges[k].v == g.edges[k].v);
    CHECK(h.edges[k].w == g.edges[k].w);
  }
}

TEST_CASE("make_graph validates") {
  CHECK_THROWS_AS(make_graph(2, {{0, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(2, {{0, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), std::invalid_argument);
}

TEST_CASE("qubo JSON round trip") {
  const Graph g = generate_er(9, 3.0, 8);
  const QuboInstance q = maxcut_to_qubo(g);
  const QuboInstance r = qubo_from_json(qubo_to_json(q));
  CHECK(r.n == q.n);
  CHECK(r.diag == q.diag);
  REQUIRE(r.offdiag.size() == q.offdiag.size());
  for (std::size_t k = 0; k < q.offdiag.size(); ++k) {
    CHECK(r.offdiag[k].u == q.offdiag[k].u);
    CHECK(r.offdiag[k].v == q.offdiag[k].v);
    CHECK(r.offdiag[k].w == q.offdiag[k].w);
  }
}

TEST_CASE("g14 reference dimensions" * doctest::skip(std::getenv("TWOBODY_GSET_G14") == nullptr)) {
  const char* path = std::getenv("TWOBODY_GSET_G14");
  REQUIRE(path != nullptr);
  const Graph g = parse_gset_file(path);
  CHECK(g.n == 800);
  CHECK(g.edges.size() == 4694);
}
