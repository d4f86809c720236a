#pragma once

// Backtracking search for isometric embeddings between DenseGraphs.
//
// Source vertices are placed in BFS order from a fixed root. The candidates
// for the next source vertex s are the unused target vertices t with
// d_target(t, f(u)) = d_source(s, u) for every already placed u, obtained as
// an intersection of precomputed distance layers. One node is one placement.
//
// Exhaustive mode fans out over the root's candidates; sample mode runs
// independent randomized restarts, each stopping at its first embedding.
// Either way partial results are merged in a fixed order, so the output does
// not depend on the worker count.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dualpolar/graphs.hpp"

namespace dualpolar {

/// Injective vertex map source -> target; valid when distance-preserving.
struct Embedding {
  std::shared_ptr<const DenseGraph> source;
  std::shared_ptr<const DenseGraph> target;
  std::vector<std::size_t> map;

  /// Image vertices, sorted.
  std::vector<std::size_t> image() const;
  bool is_isometric() const;
};

bool is_isometric_embedding(const std::vector<std::size_t>& map, const DenseGraph& src, const DenseGraph& dst);

enum class SearchMode { Exhaustive, Sample };

std::string to_string(SearchMode mode);

/// What a sample run counts towards its target.
enum class SampleGoal { DistinctImages, DistinctMaps };

struct SearchOptions {
  SearchMode mode = SearchMode::Exhaustive;
  std::uint64_t node_budget = 10'000'000;
  std::uint64_t seed = 0;
  std::size_t sample_target = 1000;
  SampleGoal goal = SampleGoal::DistinctImages;
  /// Exhaustive mode: stop after this many embeddings (0 = no limit).
  std::size_t max_embeddings = 0;
  int workers = 1;
  /// Source vertex the BFS order starts from (default 0).
  std::optional<std::size_t> root;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t restarts = 0;
  std::size_t embeddings = 0;
  std::size_t distinct_images = 0;
  std::size_t distinct_maps = 0;
  /// Exhaustive: the whole tree was explored. Sample: the target was reached
  /// or the tree was shown empty.
  bool complete = false;
  bool budget_exhausted = false;
};

struct SearchResult {
  std::vector<Embedding> embeddings;
  SearchStats stats;
};

/// Generic engine. Requires a connected source and budget > 0.
SearchResult search_embeddings(std::shared_ptr<const DenseGraph> source, std::shared_ptr<const DenseGraph> target,
                               const SearchOptions& options);

/// SplitMix64 stream derivation: independent seed for sub-stream `stream`.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace dualpolar
