#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "dualpolar/errors.hpp"
#include "dualpolar/export.hpp"
#include "dualpolar/graphs.hpp"
#include "oracles.hpp"

using namespace dualpolar;

namespace {

std::shared_ptr<const DenseGraph> dual(unsigned p, int n) {
  return std::make_shared<const DenseGraph>(dual_polar_graph(std::make_shared<const PolarSpace>(p, n)));
}

bool is_geodesic(const DenseGraph& g, const std::vector<std::size_t>& path, std::size_t v, std::size_t w) {
  if (path.empty() || path.front() != v || path.back() != w) return false;
  if (path.size() != static_cast<std::size_t>(g.dist(v, w)) + 1) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!g.adjacent(path[i - 1], path[i])) return false;
  }
  return true;
}

/// n - 1 - projdim(S ∩ U), with the intersection counted by enumeration.
int distance_by_enumeration(const DenseGraph& g, std::size_t a, std::size_t b, unsigned p, int n) {
  auto rows = [](const SingularSubspace& s) {
    std::vector<oracle::Coords> out;
    for (const auto& r : s.basis().rows()) out.push_back(r.to_ints());
    return out;
  };
  const std::size_t dim = static_cast<std::size_t>(2 * n);
  const auto sa = oracle::span_codes(p, dim, rows(g.subspace(a)));
  const auto sb = oracle::span_codes(p, dim, rows(g.subspace(b)));
  std::size_t common = 0;
  for (auto c : sa) common += sb.count(c);
  int rank = 0;
  for (std::size_t size = 1; size < common; size *= p) ++rank;
  return n - rank;
}

}  // namespace

TEST(Hypercube, DistancesAreHamming) {
  for (int m = 1; m <= 6; ++m) {
    const auto h = hypercube(m);
    ASSERT_EQ(h.size(), std::size_t{1} << m);
    EXPECT_EQ(h.diameter(), m);
    EXPECT_EQ(h.edge_count(), static_cast<std::size_t>(m) << (m - 1));
    for (std::size_t u = 0; u < h.size(); ++u) {
      EXPECT_EQ(h.cube_vertex(u).signs, u);
      for (std::size_t v = 0; v < h.size(); ++v) {
        EXPECT_EQ(h.dist(u, v), oracle::hamming(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)));
      }
    }
  }
  EXPECT_THROW(hypercube(0), ContractViolation);
  EXPECT_THROW(hypercube(21), ContractViolation);
}

TEST(Hypercube, VertexLabels) {
  HypercubeVertex v{0b101, 3};
  EXPECT_TRUE(v.contains(1));
  EXPECT_TRUE(v.contains(-2));
  EXPECT_TRUE(v.contains(3));
  EXPECT_FALSE(v.contains(2));
  EXPECT_EQ(v.to_string(), "{+1,-2,+3}");
  EXPECT_THROW(v.contains(4), ContractViolation);
}

TEST(DualPolarGraph, DistanceEqualsCodimensionOfIntersection) {
  for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {3, 2}, {2, 3}}) {
    const auto g = dual(p, n);
    EXPECT_EQ(g->diameter(), n);
    const std::size_t step = g->size() > 50 ? 7 : 1;
    for (std::size_t a = 0; a < g->size(); a += step) {
      for (std::size_t b = 0; b < g->size(); ++b) EXPECT_EQ(g->dist(a, b), distance_by_enumeration(*g, a, b, p, n));
    }
  }
}

TEST(DualPolarGraph, ValencyAndOppositeCounts) {
  // Valency p(p^n - 1)/(p - 1); p^{n(n+1)/2} vertices opposite a given one.
  struct Case { unsigned p; int n; std::size_t valency, opposite; };
  for (auto c : {Case{2, 2, 6, 8}, Case{2, 3, 14, 64}, Case{3, 2, 12, 27}, Case{5, 2, 30, 125}}) {
    const auto g = dual(c.p, c.n);
    for (std::size_t v = 0; v < g->size(); ++v) {
      EXPECT_EQ(g->neighbors(v).count(), c.valency);
      EXPECT_EQ(g->layer(v, static_cast<std::size_t>(c.n)).count(), c.opposite);
    }
    EXPECT_TRUE(g->layer(0, static_cast<std::size_t>(c.n) + 1).none());
  }
}

TEST(DualPolarGraph, LabelsIndexBack) {
  const auto g = dual(3, 2);
  for (std::size_t v = 0; v < g->size(); ++v) EXPECT_EQ(g->index_of(g->label(v)), v);
  EXPECT_FALSE(g->index_of(HypercubeVertex{0, 2}).has_value());
  EXPECT_THROW(g->cube_vertex(0), ContractViolation);
}

TEST(DenseGraph, ValidatesAdjacency) {
  std::vector<VertexLabel> labels{HypercubeVertex{0, 2}, HypercubeVertex{1, 2}, HypercubeVertex{2, 2}};
  std::vector<Bitset> adj(3, Bitset(3));
  adj[0].set(1);
  EXPECT_THROW(DenseGraph(labels, adj), InvariantViolation);
  adj[1].set(0);
  EXPECT_NO_THROW(DenseGraph(labels, adj));
  EXPECT_THROW(DenseGraph(labels, adj, Connectivity::Required), InvariantViolation);
  const DenseGraph loose(labels, adj);
  EXPECT_FALSE(loose.connected());
  EXPECT_EQ(loose.dist(0, 2), kUnreachable);
  adj[2].set(2);
  EXPECT_THROW(DenseGraph(labels, adj), InvariantViolation);
}

TEST(DenseGraph, MetricRestrictionKeepsAmbientDistances) {
  const auto g = dual(2, 3);
  std::vector<std::size_t> pick{0, 5, 17, 40, 99};
  const auto r = DenseGraph::metric_restriction(*g, pick);
  ASSERT_EQ(r.size(), pick.size());
  for (std::size_t i = 0; i < pick.size(); ++i) {
    EXPECT_EQ(r.label(i), g->label(pick[i]));
    for (std::size_t j = 0; j < pick.size(); ++j) EXPECT_EQ(r.dist(i, j), g->dist(pick[i], pick[j]));
  }
  EXPECT_EQ(r.space(), g->space());
}

TEST(DenseGraph, BfsOrder) {
  const auto g = dual(2, 3);
  const auto order = bfs_order(*g, 7);
  ASSERT_EQ(order.size(), g->size());
  EXPECT_EQ(order.front(), 7u);
  EXPECT_EQ(std::set<std::size_t>(order.begin(), order.end()).size(), g->size());
  for (std::size_t i = 1; i < order.size(); ++i) EXPECT_LE(g->dist(7, order[i - 1]), g->dist(7, order[i]));
}

TEST(Geodesics, AntipodalHypercubePairsHaveFactorialCount) {
  std::size_t fact = 1;
  for (int m = 1; m <= 5; ++m) {
    fact *= static_cast<std::size_t>(m);
    const auto h = hypercube(m);
    const auto gs = geodesics_between(h, 0, h.size() - 1, 1000);
    EXPECT_TRUE(gs.complete);
    EXPECT_EQ(gs.total, fact);
    EXPECT_EQ(gs.paths.size(), fact);
    std::set<std::vector<std::size_t>> distinct(gs.paths.begin(), gs.paths.end());
    EXPECT_EQ(distinct.size(), fact);
    for (const auto& path : gs.paths) EXPECT_TRUE(is_geodesic(h, path, 0, h.size() - 1));
  }
}

TEST(Geodesics, SamplingBeyondBudget) {
  const auto h = hypercube(6);
  const auto a = geodesics_between(h, 0, 63, 10, 42);
  const auto b = geodesics_between(h, 0, 63, 10, 42);
  EXPECT_FALSE(a.complete);
  EXPECT_EQ(a.total, 720u);
  EXPECT_EQ(a.paths.size(), 10u);
  EXPECT_EQ(a.paths, b.paths);
  for (const auto& path : a.paths) EXPECT_TRUE(is_geodesic(h, path, 0, 63));
  EXPECT_THROW(geodesics_between(h, 0, 63, 0), ContractViolation);
}

TEST(Geodesics, OppositeVerticesInSp42) {
  // Two opposite lines of W(3,2) have p+1 common neighbours.
  const auto g = dual(2, 2);
  const auto w = g->layer(0, 2).find_first();
  const auto gs = geodesics_between(*g, 0, w, 100);
  EXPECT_EQ(gs.total, 3u);
  for (const auto& path : gs.paths) EXPECT_TRUE(is_geodesic(*g, path, 0, w));
}

TEST(Export, JsonAndDot) {
  auto space = std::make_shared<const PolarSpace>(2, 3);
  const auto g = dual_polar_graph(space);
  const auto sj = space_to_json(*space);
  EXPECT_EQ(sj["points"].size(), 63u);
  EXPECT_EQ(sj["p"], 2);
  const auto gj = graph_to_json(g, true);
  EXPECT_EQ(gj["vertices"].size(), 135u);
  EXPECT_EQ(gj["edges"].size(), 135u * 14 / 2);
  EXPECT_EQ(gj["dist"].size(), 135u);
  const auto dot = graph_to_dot(g, "G");
  const std::regex node(R"(^  v[0-9a-f]{16} \[tooltip=)");
  std::size_t nodes = 0;
  std::istringstream lines(dot);
  for (std::string line; std::getline(lines, line);) nodes += std::regex_search(line, node);
  EXPECT_EQ(nodes, 135u);
  std::set<std::string> hashes;
  for (const auto& l : g.labels()) hashes.insert(label_hash(l));
  EXPECT_EQ(hashes.size(), 135u);
}
