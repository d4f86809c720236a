#pragma once

#include <string>

#include <json.hpp>

#include "dualpolar/graphs.hpp"

namespace dualpolar {

/// {p, n, points, singular_subspaces_by_dim}; integers only, canonical order.
nlohmann::json space_to_json(const PolarSpace& space);

/// {vertices, edges[, dist]}: vertices carry their canonical label.
nlohmann::json graph_to_json(const DenseGraph& graph, bool include_distances);

/// Node names are label hashes; the tooltip carries the label itself.
std::string graph_to_dot(const DenseGraph& graph, const std::string& name = "G");

/// 64-bit FNV-1a of the canonical label string, as 16 hex digits.
std::string label_hash(const VertexLabel& label);

}  // namespace dualpolar
