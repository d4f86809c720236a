#include "dualpolar/graphs.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "dualpolar/errors.hpp"

namespace dualpolar {

bool HypercubeVertex::contains(int signed_index) const {
  const int i = signed_index > 0 ? signed_index : -signed_index;
  if (i < 1 || i > m) throw ContractViolation("signed index out of range for H_" + std::to_string(m));
  const bool plus = (signs >> (i - 1)) & 1u;
  return plus == (signed_index > 0);
}

std::string HypercubeVertex::to_string() const {
  std::ostringstream os;
  os << '{';
  for (int i = 1; i <= m; ++i) {
    if (i > 1) os << ',';
    os << (((signs >> (i - 1)) & 1u) ? '+' : '-') << i;
  }
  os << '}';
  return os.str();
}

std::string label_string(const VertexLabel& label) {
  return std::visit([](const auto& l) { return l.to_string(); }, label);
}

DistanceMatrix all_pairs_distances(const std::vector<Bitset>& adjacency) {
  const std::size_t n = adjacency.size();
  DistanceMatrix dm;
  dm.size = n;
  dm.data.assign(n * n, kUnreachable);
  std::vector<std::size_t> queue(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto* row = &dm.data[s * n];
    row[s] = 0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      const auto u = queue[head++];
      const auto& nb = adjacency[u];
      for (auto v = nb.find_first(); v != Bitset::npos; v = nb.find_next(v)) {
        if (row[v] != kUnreachable) continue;
        if (row[u] + 1 >= kUnreachable) throw InvariantViolation("graph diameter exceeds distance storage");
        row[v] = static_cast<std::uint8_t>(row[u] + 1);
        queue[tail++] = v;
      }
    }
    if (tail != n) dm.connected = false;
  }
  return dm;
}

DenseGraph::DenseGraph(std::vector<VertexLabel> labels, std::vector<Bitset> adjacency, Connectivity connectivity,
                       std::shared_ptr<const PolarSpace> space)
    : labels_(std::move(labels)), adjacency_(std::move(adjacency)), space_(std::move(space)) {
  const std::size_t n = labels_.size();
  if (adjacency_.size() != n) throw StructuralError("adjacency and label counts differ");
  for (std::size_t u = 0; u < n; ++u) {
    if (adjacency_[u].size() != n) throw StructuralError("adjacency row has wrong width");
    if (adjacency_[u].test(u)) throw InvariantViolation("graph has a loop at vertex " + std::to_string(u));
    for (auto v = adjacency_[u].find_first(); v != Bitset::npos; v = adjacency_[u].find_next(v)) {
      if (!adjacency_[v].test(u)) throw InvariantViolation("adjacency is not symmetric");
    }
  }
  dist_ = all_pairs_distances(adjacency_);
  if (connectivity == Connectivity::Required && !dist_.connected) {
    throw InvariantViolation("graph required to be connected is disconnected");
  }
  build_layers();
}

DenseGraph::DenseGraph(std::vector<VertexLabel> labels, std::vector<Bitset> adjacency, DistanceMatrix dist,
                       std::shared_ptr<const PolarSpace> space)
    : labels_(std::move(labels)), adjacency_(std::move(adjacency)), dist_(std::move(dist)), space_(std::move(space)) {
  build_layers();
}

void DenseGraph::build_layers() {
  const std::size_t n = labels_.size();
  diameter_ = 0;
  for (auto d : dist_.data) {
    if (d != kUnreachable) diameter_ = std::max(diameter_, int{d});
  }
  empty_ = Bitset(n);
  layers_.assign(n, std::vector<Bitset>(static_cast<std::size_t>(diameter_) + 1, Bitset(n)));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      const auto d = dist_.at(u, v);
      if (d != kUnreachable) layers_[u][d].set(v);
    }
  }
  index_.clear();
  for (std::size_t v = 0; v < n; ++v) {
    if (!index_.emplace(labels_[v], v).second) throw InvariantViolation("duplicate vertex label " + label_string(labels_[v]));
  }
}

DenseGraph DenseGraph::metric_restriction(const DenseGraph& base, const std::vector<std::size_t>& vertices) {
  const std::size_t n = vertices.size();
  std::vector<VertexLabel> labels;
  std::vector<Bitset> adj(n, Bitset(n));
  DistanceMatrix dm;
  dm.size = n;
  dm.data.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (vertices[i] >= base.size()) throw ContractViolation("metric_restriction: vertex out of range");
    labels.push_back(base.label(vertices[i]));
    for (std::size_t j = 0; j < n; ++j) {
      const auto d = base.dist(vertices[i], vertices[j]);
      dm.data[i * n + j] = d;
      if (d == 1) adj[i].set(j);
      if (d == kUnreachable) dm.connected = false;
    }
  }
  return DenseGraph(std::move(labels), std::move(adj), std::move(dm), base.space_);
}

std::optional<std::size_t> DenseGraph::index_of(const VertexLabel& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Bitset& DenseGraph::layer(std::size_t v, std::size_t d) const {
  if (d >= layers_[v].size()) return empty_;
  return layers_[v][d];
}

std::size_t DenseGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& row : adjacency_) twice += row.count();
  return twice / 2;
}

const SingularSubspace& DenseGraph::subspace(std::size_t v) const {
  const auto* s = std::get_if<SingularSubspace>(&labels_[v]);
  if (!s) throw ContractViolation("vertex " + std::to_string(v) + " is not labeled by a subspace");
  return *s;
}

const HypercubeVertex& DenseGraph::cube_vertex(std::size_t v) const {
  const auto* h = std::get_if<HypercubeVertex>(&labels_[v]);
  if (!h) throw ContractViolation("vertex " + std::to_string(v) + " is not a hypercube vertex");
  return *h;
}

DenseGraph hypercube(int m) {
  if (m < 1 || m > 20) throw ContractViolation("hypercube: m must lie in [1, 20], got " + std::to_string(m));
  const std::size_t n = std::size_t{1} << m;
  std::vector<VertexLabel> labels;
  std::vector<Bitset> adj(n, Bitset(n));
  for (std::size_t x = 0; x < n; ++x) {
    labels.emplace_back(HypercubeVertex{static_cast<std::uint32_t>(x), m});
    for (int i = 0; i < m; ++i) adj[x].set(x ^ (std::size_t{1} << i));
  }
  return DenseGraph(std::move(labels), std::move(adj), Connectivity::Required);
}

DenseGraph dual_polar_graph(std::shared_ptr<const PolarSpace> space) {
  if (!space) throw ContractViolation("dual_polar_graph: null space");
  const int n = space->rank();
  const auto maximals = enumerate_singular(*space, n - 1);
  const std::size_t count = maximals.size();

  std::vector<Bitset> point_sets;
  point_sets.reserve(count);
  for (const auto& s : maximals) {
    Bitset b(space->point_count());
    for (auto id : space->point_ids(s.basis())) b.set(id);
    point_sets.push_back(std::move(b));
  }
  // Meeting in an (n-2)-dimensional subspace means sharing exactly
  // (p^(n-1) - 1)/(p - 1) points.
  std::size_t hyperplane_points = 0;
  for (std::size_t i = 0, pw = 1; i + 1 < static_cast<std::size_t>(n); ++i, pw *= space->p()) hyperplane_points += pw;

  std::vector<Bitset> adj(count, Bitset(count));
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      if ((point_sets[a] & point_sets[b]).count() == hyperplane_points) {
        adj[a].set(b);
        adj[b].set(a);
      }
    }
  }
  std::vector<VertexLabel> labels(maximals.begin(), maximals.end());
  return DenseGraph(std::move(labels), std::move(adj), Connectivity::Required, std::move(space));
}

std::vector<std::size_t> bfs_order(const DenseGraph& graph, std::size_t root) {
  std::vector<std::size_t> order{root};
  std::vector<bool> seen(graph.size(), false);
  seen[root] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto& nb = graph.neighbors(order[head]);
    for (auto v = nb.find_first(); v != Bitset::npos; v = nb.find_next(v)) {
      if (!seen[v]) {
        seen[v] = true;
        order.push_back(v);
      }
    }
  }
  return order;
}

GeodesicSet geodesics_between(const DenseGraph& graph, std::size_t v, std::size_t w, std::uint64_t budget,
                              std::uint64_t seed) {
  if (v >= graph.size() || w >= graph.size()) throw ContractViolation("geodesics_between: vertex out of range");
  if (budget == 0) throw ContractViolation("geodesics_between: budget must be positive");
  GeodesicSet out;
  const auto total_len = graph.dist(v, w);
  if (total_len == kUnreachable) {
    out.total = 0;
    return out;
  }

  // Geodesic counts to w over the interval [v, w].
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> count(graph.size(), 0);
  const auto& by_dist = [&](std::size_t d) -> Bitset {
    return graph.layer(w, d) & graph.layer(v, total_len - d);
  };
  count[w] = 1;
  for (std::size_t d = 1; d <= total_len; ++d) {
    const auto level = by_dist(d);
    for (auto x = level.find_first(); x != Bitset::npos; x = level.find_next(x)) {
      const auto closer = graph.neighbors(x) & graph.layer(w, d - 1);
      std::uint64_t c = 0;
      for (auto y = closer.find_first(); y != Bitset::npos; y = closer.find_next(y)) {
        c = (count[y] > kMax - c) ? kMax : c + count[y];
      }
      count[x] = c;
    }
  }
  out.total = count[v];

  auto next_steps = [&](std::size_t x) {
    const auto d = graph.dist(x, w);
    return graph.neighbors(x) & graph.layer(w, d - 1) & graph.layer(v, total_len - d + 1);
  };

  if (out.total <= budget) {
    std::vector<std::size_t> path{v};
    auto dfs = [&](auto&& self, std::size_t x) -> void {
      if (x == w) {
        out.paths.push_back(path);
        return;
      }
      const auto steps = next_steps(x);
      for (auto y = steps.find_first(); y != Bitset::npos; y = steps.find_next(y)) {
        path.push_back(y);
        self(self, y);
        path.pop_back();
      }
    };
    dfs(dfs, v);
    return out;
  }

  // Uniform sampling: step to y with probability count[y] / count[x].
  out.complete = false;
  std::mt19937_64 rng(seed);
  for (std::uint64_t k = 0; k < budget; ++k) {
    std::vector<std::size_t> path{v};
    std::size_t x = v;
    while (x != w) {
      const auto steps = next_steps(x);
      std::vector<std::size_t> ys;
      std::vector<double> weights;
      for (auto y = steps.find_first(); y != Bitset::npos; y = steps.find_next(y)) {
        ys.push_back(y);
        weights.push_back(static_cast<double>(count[y]));
      }
      std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
      x = ys[pick(rng)];
      path.push_back(x);
    }
    out.paths.push_back(std::move(path));
  }
  return out;
}

}  // namespace dualpolar
