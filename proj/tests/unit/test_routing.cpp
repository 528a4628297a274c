#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "cctskit/error.hpp"
#include "cctskit/routing.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cctskit;
using namespace cctskit::routing;

namespace {

Cell random_cell(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  return {std::uniform_int_distribution<std::size_t>(0, rows - 1)(rng),
          std::uniform_int_distribution<std::size_t>(0, cols - 1)(rng)};
}

void expect_valid_path(const RasterGrid& g, const RoutedPath& p, Connectivity conn) {
  const auto& offsets = neighbor_offsets(conn);
  double len = 0.0;
  for (std::size_t i = 1; i < p.cells.size(); ++i) {
    const int dr = static_cast<int>(p.cells[i].row) - static_cast<int>(p.cells[i - 1].row);
    const int dc = static_cast<int>(p.cells[i].col) - static_cast<int>(p.cells[i - 1].col);
    EXPECT_NE(std::find(offsets.begin(), offsets.end(), std::make_pair(dr, dc)), offsets.end());
    len += std::hypot(dr, dc) * g.cellsize() / 1000.0;
  }
  EXPECT_NEAR(p.length, len, 1e-9 * std::max(1.0, len));
  const double wmin = *std::min_element(g.values().begin(), g.values().end());
  EXPECT_GE(p.routed_cost, p.length * wmin * (1 - 1e-12));
}

}  // namespace

TEST(Routing, MatchesExhaustiveEnumerationOnSixBySix) {
  for (std::uint64_t seed = 1; seed <= 24; ++seed) {
    const auto g = testfx::random_surface(6, 6, seed);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 3; ++k) {
      const Cell a = random_cell(rng, 6, 6), b = random_cell(rng, 6, 6);
      const auto p = least_cost_path(g, a, b);
      EXPECT_NEAR(p.routed_cost, oracle::enumerate_paths(g, a, b), 1e-9 * std::max(1.0, p.routed_cost))
          << "seed " << seed;
      expect_valid_path(g, p, Connectivity::Eight);
      EXPECT_EQ(p.cells.front(), a);
      EXPECT_EQ(p.cells.back(), b);
    }
  }
}

TEST(Routing, SixteenNeighborMatchesEnumeration) {
  RoutingOptions opt;
  opt.connectivity = Connectivity::Sixteen;
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    const auto g = testfx::random_surface(6, 6, seed);
    const auto p = least_cost_path(g, {0, 0}, {5, 4}, opt);
    EXPECT_NEAR(p.routed_cost, oracle::enumerate_paths(g, {0, 0}, {5, 4}, true), 1e-9 * p.routed_cost);
    expect_valid_path(g, p, Connectivity::Sixteen);
  }
}

TEST(Routing, PathTreeMatchesBellmanFord) {
  const auto g = testfx::random_surface(25, 30, 77);
  const PathTree tree(g, {3, 4});
  const auto d = oracle::bellman_ford(g, {3, 4});
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(tree.cost_to(g.cell(i)), d[i], 1e-9 * std::max(1.0, d[i]));
}

TEST(Routing, ScaleInvariance) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto g = testfx::random_surface(12, 12, 1000 + i);
    const Cell a = random_cell(rng, 12, 12), b = random_cell(rng, 12, 12);
    const double alpha = std::uniform_real_distribution<double>(0.1, 50.0)(rng);
    const auto p1 = least_cost_path(g, a, b);
    for (auto& v : g.values()) v *= alpha;
    const auto p2 = least_cost_path(g, a, b);
    EXPECT_NEAR(p2.routed_cost, alpha * p1.routed_cost, 1e-9 * p2.routed_cost + 1e-12);
    EXPECT_EQ(p1.cells, p2.cells);
  }
}

TEST(Routing, TriangleInequality) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto g = testfx::random_surface(12, 12, 2000 + i);
    const Cell a = random_cell(rng, 12, 12), b = random_cell(rng, 12, 12), c = random_cell(rng, 12, 12);
    const double ac = least_cost_path(g, a, c).routed_cost;
    const double ab = least_cost_path(g, a, b).routed_cost;
    const double bc = least_cost_path(g, b, c).routed_cost;
    EXPECT_LE(ac, (ab + bc) * (1 + 1e-12));
  }
}

TEST(Routing, SameCellIsZeroCost) {
  const auto g = testfx::random_surface(4, 4, 1);
  const auto p = least_cost_path(g, {2, 2}, {2, 2});
  EXPECT_EQ(p.cells.size(), 1u);
  EXPECT_EQ(p.routed_cost, 0.0);
}

TEST(Routing, RejectsBadSurfacesAndCells) {
  auto g = testfx::random_surface(4, 4, 1);
  EXPECT_THROW(least_cost_path(g, {0, 0}, {4, 0}), DomainError);
  g(1, 1) = 0.0;
  EXPECT_THROW(least_cost_path(g, {0, 0}, {3, 3}), DomainError);
  g(1, 1) = std::nan("");
  EXPECT_THROW(least_cost_path(g, {0, 0}, {3, 3}), DomainError);
}

TEST(Routing, MeasurePathRecomputes) {
  const auto g = testfx::random_surface(10, 10, 3);
  const auto p = least_cost_path(g, {0, 0}, {9, 7});
  const auto m = measure_path(g, p.cells);
  EXPECT_NEAR(m.routed_cost, p.routed_cost, 1e-9);
  EXPECT_NEAR(m.length, p.length, 1e-12);
  EXPECT_THROW(measure_path(g, {{0, 0}, {3, 3}}), DomainError);
}

TEST(Routing, SejKmSplitsStepsBetweenEndCells) {
  Mask sej({5, 1, 1000.0, 0.0, 0.0}, 0);
  sej(0, 2) = 1;
  const std::vector<Cell> path{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}};
  // Steps 1-2 and 2-3 each give half their 1 km to cell 2.
  EXPECT_NEAR(path_sej_km(path, sej, 1000.0), 1.0, 1e-12);
  sej(0, 3) = 1;
  EXPECT_NEAR(path_sej_km(path, sej, 1000.0), 2.0, 1e-12);
}

TEST(Routing, CandidateNetworkShorterThanSumOfPairPaths) {
  const auto g = testfx::random_surface(30, 30, 8, 1.0, 3.0);
  const std::vector<Terminal> sources{{"A", TerminalKind::Source, 2'500, 27'500},
                                      {"B", TerminalKind::Source, 6'500, 25'500},
                                      {"C", TerminalKind::Source, 20'500, 28'500}};
  const std::vector<Terminal> sinks{{"K1", TerminalKind::Sink, 15'500, 2'500}, {"K2", TerminalKind::Sink, 27'500, 5'500}};
  const auto net = build_candidate_network(g, sources, sinks);
  double pairwise = 0.0;
  for (const auto& s : sources)
    for (const auto& k : sinks) {
      std::size_t r1, c1, r2, c2;
      ASSERT_TRUE(g.spec().locate(s.x, s.y, r1, c1));
      ASSERT_TRUE(g.spec().locate(k.x, k.y, r2, c2));
      pairwise += least_cost_path(g, {r1, c1}, {r2, c2}).length;
    }
  EXPECT_LE(net.total_length(), pairwise + 1e-9);

  // Every terminal is a node; every edge is a valid path between its end nodes.
  for (const auto& t : sources) EXPECT_NO_THROW(net.node_of(t.id));
  for (const auto& t : sinks) EXPECT_NO_THROW(net.node_of(t.id));
  for (const auto& e : net.edges) {
    EXPECT_LT(e.from, e.to);
    EXPECT_EQ(e.cells.front(), net.nodes[e.from].cell);
    EXPECT_EQ(e.cells.back(), net.nodes[e.to].cell);
    const auto m = measure_path(g, e.cells);
    EXPECT_NEAR(m.length, e.length, 1e-9);
    EXPECT_NEAR(m.routed_cost, e.routed_cost, 1e-9 * m.routed_cost);
  }
  // Connected: every sink reachable from every source over edges.
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (const auto& e : net.edges) links.push_back({e.from, e.to});
  EXPECT_EQ(oracle::union_find_components(net.nodes.size(), links).size(), 1u);
  // Junctions only where paths meet: a junction has degree other than 2.
  std::vector<int> degree(net.nodes.size(), 0);
  for (const auto& e : net.edges) ++degree[e.from], ++degree[e.to];
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    if (net.nodes[i].kind == NodeKind::Junction) {
      EXPECT_NE(degree[i], 2);
    }
  EXPECT_THROW(net.node_of("nope"), DomainError);
}

TEST(Routing, CandidateNetworkDeterministicAndRoundTrips) {
  const auto p1 = testfx::clustered_line_problem();
  const auto p2 = testfx::clustered_line_problem();
  ASSERT_EQ(p1.candidate.edges.size(), p2.candidate.edges.size());
  for (std::size_t i = 0; i < p1.candidate.edges.size(); ++i) EXPECT_EQ(p1.candidate.edges[i].cells, p2.candidate.edges[i].cells);

  const auto path = (std::filesystem::temp_directory_path() / "cctskit_net.json").string();
  write_network_json(path, p1.candidate);
  const auto back = read_network_json(path);
  ASSERT_EQ(back.edges.size(), p1.candidate.edges.size());
  ASSERT_EQ(back.nodes.size(), p1.candidate.nodes.size());
  for (std::size_t i = 0; i < back.edges.size(); ++i) {
    EXPECT_EQ(back.edges[i].cells, p1.candidate.edges[i].cells);
    EXPECT_EQ(back.edges[i].length, p1.candidate.edges[i].length);
    EXPECT_EQ(back.edges[i].weighted_length, p1.candidate.edges[i].weighted_length);
  }
  EXPECT_EQ(back.nodes[0].terminals, p1.candidate.nodes[0].terminals);
}

TEST(Routing, MeasureSejOnTwoCorridorFixture) {
  const auto f = testfx::two_corridor();
  const auto off = testfx::two_corridor_problem(f, false);
  const auto on = testfx::two_corridor_problem(f, true);
  double off_km = 0, on_km = 0;
  for (const auto& e : off.candidate.edges) off_km += e.sej_km.at("sej3");
  for (const auto& e : on.candidate.edges) on_km += e.sej_km.at("sej3");
  EXPECT_GT(off_km, 0.0);
  EXPECT_EQ(on_km, 0.0);
}
