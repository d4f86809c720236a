#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "dualpolar/polar_space.hpp"

namespace dualpolar {

using Bitset = boost::dynamic_bitset<>;

/// Maximal singular subset of J = {±1, ..., ±m}: bit i set means +(i+1) is in
/// the set, clear means -(i+1).
struct HypercubeVertex {
  std::uint32_t signs = 0;
  int m = 0;

  /// Whether the signed index (±1..±m) belongs to the set.
  bool contains(int signed_index) const;
  std::string to_string() const;

  friend bool operator==(const HypercubeVertex&, const HypercubeVertex&) = default;
  friend auto operator<=>(const HypercubeVertex&, const HypercubeVertex&) = default;
};

using VertexLabel = std::variant<SingularSubspace, HypercubeVertex>;

std::string label_string(const VertexLabel& label);

inline constexpr std::uint8_t kUnreachable = 0xFF;

struct DistanceMatrix {
  std::size_t size = 0;
  std::vector<std::uint8_t> data;
  bool connected = true;

  std::uint8_t at(std::size_t u, std::size_t v) const { return data[u * size + v]; }
};

/// BFS from every vertex. Unreachable pairs hold kUnreachable.
DistanceMatrix all_pairs_distances(const std::vector<Bitset>& adjacency);

enum class Connectivity { Required, Optional };

/// Labeled simple graph with cached all-pairs distances and distance layers.
class DenseGraph {
 public:
  DenseGraph(std::vector<VertexLabel> labels, std::vector<Bitset> adjacency,
             Connectivity connectivity = Connectivity::Optional,
             std::shared_ptr<const PolarSpace> space = nullptr);

  /// Same vertices as `base.vertices` with distances inherited from `base`
  /// (a metric subspace, not the induced subgraph's own metric).
  static DenseGraph metric_restriction(const DenseGraph& base, const std::vector<std::size_t>& vertices);

  std::size_t size() const { return labels_.size(); }
  const VertexLabel& label(std::size_t v) const { return labels_[v]; }
  const std::vector<VertexLabel>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(const VertexLabel& label) const;

  bool adjacent(std::size_t u, std::size_t v) const { return adjacency_[u].test(v); }
  const Bitset& neighbors(std::size_t v) const { return adjacency_[v]; }
  std::uint8_t dist(std::size_t u, std::size_t v) const { return dist_.at(u, v); }
  const DistanceMatrix& distances() const { return dist_; }
  /// Vertices at distance exactly d from v (empty for d > diameter).
  const Bitset& layer(std::size_t v, std::size_t d) const;
  int diameter() const { return diameter_; }
  bool connected() const { return dist_.connected; }
  std::size_t edge_count() const;

  /// Subspace label of v; throws ContractViolation for non-subspace labels.
  const SingularSubspace& subspace(std::size_t v) const;
  const HypercubeVertex& cube_vertex(std::size_t v) const;
  /// Ambient polar space of a dual polar graph (null otherwise).
  const std::shared_ptr<const PolarSpace>& space() const { return space_; }

 private:
  DenseGraph(std::vector<VertexLabel> labels, std::vector<Bitset> adjacency, DistanceMatrix dist,
             std::shared_ptr<const PolarSpace> space);
  void build_layers();

  std::vector<VertexLabel> labels_;
  std::vector<Bitset> adjacency_;
  DistanceMatrix dist_;
  int diameter_ = 0;
  std::vector<std::vector<Bitset>> layers_;
  std::map<VertexLabel, std::size_t> index_;
  std::shared_ptr<const PolarSpace> space_;
  Bitset empty_;
};

/// H_m on 2^m vertices; vertex index equals its sign mask.
DenseGraph hypercube(int m);

/// Maximal singular subspaces of `space`, adjacent when they meet in an
/// (n-2)-dimensional subspace.
DenseGraph dual_polar_graph(std::shared_ptr<const PolarSpace> space);

/// Vertex order of a breadth-first traversal from root, neighbors by index.
std::vector<std::size_t> bfs_order(const DenseGraph& graph, std::size_t root);

struct GeodesicSet {
  std::vector<std::vector<std::size_t>> paths;
  /// Total number of geodesics between the endpoints (saturates at UINT64_MAX).
  std::uint64_t total = 0;
  bool complete = true;
};

/// Every geodesic from v to w when there are at most `budget`, otherwise
/// `budget` geodesics sampled uniformly with the given seed.
GeodesicSet geodesics_between(const DenseGraph& graph, std::size_t v, std::size_t w, std::uint64_t budget,
                              std::uint64_t seed = 0);

}  // namespace dualpolar
