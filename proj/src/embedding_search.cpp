#include "dualpolar/embedding_search.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "dualpolar/errors.hpp"
#include "dualpolar/parallel.hpp"

namespace dualpolar {

std::vector<std::size_t> Embedding::image() const {
  auto img = map;
  std::sort(img.begin(), img.end());
  return img;
}

bool Embedding::is_isometric() const { return source && target && is_isometric_embedding(map, *source, *target); }

bool is_isometric_embedding(const std::vector<std::size_t>& map, const DenseGraph& src, const DenseGraph& dst) {
  if (map.size() != src.size()) return false;
  std::vector<bool> hit(dst.size(), false);
  for (auto t : map) {
    if (t >= dst.size() || hit[t]) return false;
    hit[t] = true;
  }
  for (std::size_t u = 0; u < src.size(); ++u) {
    for (std::size_t v = u + 1; v < src.size(); ++v) {
      if (src.dist(u, v) != dst.dist(map[u], map[v])) return false;
    }
  }
  return true;
}

std::string to_string(SearchMode mode) { return mode == SearchMode::Exhaustive ? "exhaustive" : "sample"; }

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

struct TaskResult {
  std::vector<std::vector<std::size_t>> found;
  std::uint64_t nodes = 0;
  bool capped = false;
};

class Backtracker {
 public:
  Backtracker(const DenseGraph& src, const DenseGraph& dst, const std::vector<std::size_t>& order, std::uint64_t cap,
              std::size_t limit, std::mt19937_64* rng)
      : src_(src), dst_(dst), order_(order), cap_(cap), limit_(limit), rng_(rng), map_(src.size()), used_(dst.size()) {}

  TaskResult run(const std::vector<std::size_t>& root_candidates) {
    for (auto t : root_candidates) {
      if (!place(0, t)) break;
      dfs(1);
      used_.reset(t);
      if (done_) break;
    }
    return std::move(result_);
  }

 private:
  // Returns false when the node budget is spent.
  bool place(std::size_t k, std::size_t t) {
    if (++result_.nodes > cap_) {
      result_.capped = true;
      done_ = true;
      return false;
    }
    map_[order_[k]] = t;
    used_.set(t);
    return true;
  }

  Bitset candidates(std::size_t k) const {
    Bitset c = ~used_;
    const auto s = order_[k];
    for (std::size_t j = 0; j < k && c.any(); ++j) {
      const auto u = order_[j];
      c &= dst_.layer(map_[u], src_.dist(u, s));
    }
    return c;
  }

  void dfs(std::size_t k) {
    if (k == order_.size()) {
      result_.found.push_back(map_);
      if (limit_ && result_.found.size() >= limit_) done_ = true;
      return;
    }
    const auto c = candidates(k);
    std::vector<std::size_t> list;
    for (auto t = c.find_first(); t != Bitset::npos; t = c.find_next(t)) list.push_back(t);
    if (rng_) std::shuffle(list.begin(), list.end(), *rng_);
    for (auto t : list) {
      if (!place(k, t)) return;
      dfs(k + 1);
      used_.reset(t);
      if (done_) return;
    }
  }

  const DenseGraph& src_;
  const DenseGraph& dst_;
  const std::vector<std::size_t>& order_;
  std::uint64_t cap_;
  std::size_t limit_;
  std::mt19937_64* rng_;
  std::vector<std::size_t> map_;
  Bitset used_;
  TaskResult result_;
  bool done_ = false;
};

constexpr std::size_t kBatch = 64;

}  // namespace

SearchResult search_embeddings(std::shared_ptr<const DenseGraph> source, std::shared_ptr<const DenseGraph> target,
                               const SearchOptions& options) {
  if (!source || !target) throw ContractViolation("search_embeddings: null graph");
  if (options.node_budget == 0) throw ContractViolation("search_embeddings: budget must be positive");
  if (source->size() == 0) throw ContractViolation("search_embeddings: empty source graph");
  if (!source->connected()) throw ContractViolation("search_embeddings: source graph must be connected");
  const auto root = options.root.value_or(0);
  if (root >= source->size()) throw ContractViolation("search_embeddings: root out of range");

  const auto order = bfs_order(*source, root);
  const DenseGraph& src = *source;
  const DenseGraph& dst = *target;

  SearchResult out;
  std::set<std::vector<std::size_t>> images;
  std::set<std::vector<std::size_t>> maps;
  auto record = [&](std::vector<std::size_t> map) {
    Embedding e{source, target, std::move(map)};
    images.insert(e.image());
    maps.insert(e.map);
    out.embeddings.push_back(std::move(e));
  };

  if (options.mode == SearchMode::Exhaustive) {
    const std::size_t tasks = dst.size();
    bool stop = false;
    out.stats.complete = true;
    for (std::size_t begin = 0; begin < tasks && !stop; begin += kBatch) {
      const std::size_t end = std::min(tasks, begin + kBatch);
      std::vector<TaskResult> batch(end - begin);
      detail::parallel_for(batch.size(), options.workers, [&](std::size_t i) {
        Backtracker bt(src, dst, order, options.node_budget, options.max_embeddings, nullptr);
        batch[i] = bt.run({begin + i});
      });
      for (auto& r : batch) {
        out.stats.nodes += r.nodes;
        if (r.capped || out.stats.nodes > options.node_budget) {
          out.stats.budget_exhausted = true;
          out.stats.complete = false;
          stop = true;
          break;
        }
        for (auto& m : r.found) {
          record(std::move(m));
          if (options.max_embeddings && out.embeddings.size() >= options.max_embeddings) {
            out.stats.complete = false;
            stop = true;
            break;
          }
        }
        if (stop) break;
      }
    }
  } else {
    std::vector<std::size_t> all(dst.size());
    for (std::size_t t = 0; t < all.size(); ++t) all[t] = t;
    auto goal_count = [&] { return options.goal == SampleGoal::DistinctImages ? images.size() : maps.size(); };
    bool stop = options.sample_target == 0;
    out.stats.complete = stop;
    for (std::uint64_t begin = 0; !stop; begin += kBatch) {
      std::vector<TaskResult> batch(kBatch);
      detail::parallel_for(batch.size(), options.workers, [&](std::size_t i) {
        std::mt19937_64 rng(split_seed(options.seed, begin + i));
        auto roots = all;
        std::shuffle(roots.begin(), roots.end(), rng);
        Backtracker bt(src, dst, order, options.node_budget, 1, &rng);
        batch[i] = bt.run(roots);
      });
      for (auto& r : batch) {
        out.stats.nodes += r.nodes;
        if (r.capped || out.stats.nodes > options.node_budget) {
          out.stats.nodes -= r.nodes;
          out.stats.budget_exhausted = true;
          stop = true;
          break;
        }
        ++out.stats.restarts;
        if (r.found.empty()) {
          // A restart that finished without a solution explored the whole tree.
          out.stats.complete = true;
          stop = true;
          break;
        }
        if (!maps.contains(r.found.front())) record(std::move(r.found.front()));
        if (goal_count() >= options.sample_target) {
          out.stats.complete = true;
          stop = true;
          break;
        }
      }
    }
  }

  out.stats.embeddings = out.embeddings.size();
  out.stats.distinct_images = images.size();
  out.stats.distinct_maps = maps.size();
  return out;
}

}  // namespace dualpolar
