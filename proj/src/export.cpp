#include "dualpolar/export.hpp"

#include <cstdio>
#include <sstream>

namespace dualpolar {

namespace {

nlohmann::json matrix_json(const SubspaceBasis& b) {
  auto rows = nlohmann::json::array();
  for (const auto& r : b.rows()) rows.push_back(r.to_ints());
  return rows;
}

nlohmann::json label_json(const VertexLabel& label) {
  if (const auto* s = std::get_if<SingularSubspace>(&label)) return matrix_json(s->basis());
  const auto& h = std::get<HypercubeVertex>(label);
  auto set = nlohmann::json::array();
  for (int i = 1; i <= h.m; ++i) set.push_back(h.contains(i) ? i : -i);
  return set;
}

}  // namespace

nlohmann::json space_to_json(const PolarSpace& space) {
  nlohmann::json j;
  j["p"] = space.p();
  j["n"] = space.rank();
  auto points = nlohmann::json::array();
  for (const auto& pt : space.points()) points.push_back(pt.rep().to_ints());
  j["points"] = std::move(points);
  auto by_dim = nlohmann::json::array();
  for (int k = 0; k < space.rank(); ++k) {
    auto layer = nlohmann::json::array();
    for (const auto& s : enumerate_singular(space, k)) layer.push_back(matrix_json(s.basis()));
    by_dim.push_back(std::move(layer));
  }
  j["singular_subspaces_by_dim"] = std::move(by_dim);
  return j;
}

nlohmann::json graph_to_json(const DenseGraph& graph, bool include_distances) {
  nlohmann::json j;
  auto vertices = nlohmann::json::array();
  for (std::size_t v = 0; v < graph.size(); ++v) {
    vertices.push_back({{"id", v}, {"label", label_json(graph.label(v))}});
  }
  j["vertices"] = std::move(vertices);
  auto edges = nlohmann::json::array();
  for (std::size_t u = 0; u < graph.size(); ++u) {
    const auto& nb = graph.neighbors(u);
    for (auto v = nb.find_next(u); v != Bitset::npos; v = nb.find_next(v)) edges.push_back({u, v});
  }
  j["edges"] = std::move(edges);
  if (include_distances) {
    auto dist = nlohmann::json::array();
    for (std::size_t u = 0; u < graph.size(); ++u) {
      auto row = nlohmann::json::array();
      for (std::size_t v = 0; v < graph.size(); ++v) {
        const auto d = graph.dist(u, v);
        row.push_back(d == kUnreachable ? -1 : int{d});
      }
      dist.push_back(std::move(row));
    }
    j["dist"] = std::move(dist);
  }
  return j;
}

std::string label_hash(const VertexLabel& label) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : label_string(label)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string graph_to_dot(const DenseGraph& graph, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  std::vector<std::string> ids;
  ids.reserve(graph.size());
  for (std::size_t v = 0; v < graph.size(); ++v) {
    ids.push_back("v" + label_hash(graph.label(v)));
    os << "  " << ids.back() << " [tooltip=\"" << label_string(graph.label(v)) << "\"];\n";
  }
  for (std::size_t u = 0; u < graph.size(); ++u) {
    const auto& nb = graph.neighbors(u);
    for (auto v = nb.find_next(u); v != Bitset::npos; v = nb.find_next(v)) {
      os << "  " << ids[u] << " -- " << ids[v] << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace dualpolar
