#include "dualpolar/apartments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include "dualpolar/errors.hpp"
#include "dualpolar/parallel.hpp"

namespace dualpolar {

namespace {

std::shared_ptr<const DenseGraph> cube_graph(int m) {
  static std::mutex mutex;
  static std::array<std::shared_ptr<const DenseGraph>, 21> cache;
  if (m < 1 || m > 20) throw ContractViolation("hypercube dimension out of range");
  std::lock_guard lock(mutex);
  auto& slot = cache[static_cast<std::size_t>(m)];
  if (!slot) slot = std::make_shared<const DenseGraph>(hypercube(m));
  return slot;
}

int cube_dimension(const DenseGraph& g) {
  if (g.size() == 0) throw ContractViolation("empty source graph");
  const int m = g.cube_vertex(0).m;
  if (g.size() != (std::size_t{1} << m)) throw ContractViolation("source is not a hypercube graph");
  return m;
}

const PolarSpace& space_of(const DenseGraph& g) {
  if (!g.space()) throw ContractViolation("target graph is not a dual polar graph");
  return *g.space();
}

std::string path_string(const std::vector<std::size_t>& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) os << (i ? "-" : "") << path[i];
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace

std::size_t residue_slot(int signed_index) {
  if (signed_index == 0) throw ContractViolation("signed index must be nonzero");
  const int k = signed_index > 0 ? signed_index : -signed_index;
  return static_cast<std::size_t>(2 * (k - 1) + (signed_index > 0 ? 0 : 1));
}

const SingularSubspace& ApartmentWitness::q(int signed_index) const {
  return residue_frame.at(residue_slot(signed_index));
}

SearchResult search_hypercube_embeddings(int m, std::shared_ptr<const DenseGraph> graph, SearchOptions options) {
  if (!graph) throw ContractViolation("search_hypercube_embeddings: null graph");
  if (m < 1) throw ContractViolation("search_hypercube_embeddings: m must be positive");
  if (m > graph->diameter()) {
    throw ContractViolation("search_hypercube_embeddings: m = " + std::to_string(m) + " exceeds the diameter " +
                            std::to_string(graph->diameter()));
  }
  options.root = (std::size_t{1} << m) - 1;
  return search_embeddings(cube_graph(m), std::move(graph), options);
}

Verified<SingularSubspace> base_subspace(const Embedding& emb) {
  Verified<SingularSubspace> out;
  const DenseGraph& src = *emb.source;
  const DenseGraph& dst = *emb.target;
  const int m = cube_dimension(src);
  const PolarSpace& space = space_of(dst);
  const int n = space.rank();
  const std::size_t full = (std::size_t{1} << m) - 1;
  auto f = [&](std::size_t mask) -> const SubspaceBasis& { return dst.subspace(emb.map[mask]).basis(); };

  const auto base = intersect(f(full), f(0));
  if (projective_dim(base) != n - m - 1) {
    out.violations.push_back("opposite images meet in projective dimension " +
                             std::to_string(projective_dim(base)) + ", expected " + std::to_string(n - m - 1));
  }
  auto meet_all = f(0);
  for (std::size_t x = 0; x <= full; ++x) {
    if (!is_subspace_of(base, f(x))) {
      out.violations.push_back("base " + base.to_string() + " not contained in image of vertex " +
                               HypercubeVertex{static_cast<std::uint32_t>(x), m}.to_string());
    }
    meet_all = intersect(meet_all, f(x));
  }
  if (meet_all != base) out.violations.push_back("base differs from the intersection of all images");
  for (std::size_t x = 0; x <= full; ++x) {
    const std::size_t y = x ^ full;
    if (x > y) continue;
    if (intersect(f(x), f(y)) != base) {
      out.violations.push_back("opposite pair " + HypercubeVertex{static_cast<std::uint32_t>(x), m}.to_string() +
                               " gives a different base");
    }
  }
  out.value = SingularSubspace(space, base);
  return out;
}

Verified<ApartmentWitness> recover_frame(const Embedding& emb) {
  Verified<ApartmentWitness> out;
  if (!emb.is_isometric()) {
    out.violations.push_back("map is not an isometric embedding");
    return out;
  }
  auto based = base_subspace(emb);
  out.violations = based.violations;
  if (!based.ok()) return out;

  const DenseGraph& src = *emb.source;
  const DenseGraph& dst = *emb.target;
  const int m = cube_dimension(src);
  const PolarSpace& space = space_of(dst);
  const int n = space.rank();
  const std::size_t full = (std::size_t{1} << m) - 1;
  const SingularSubspace& base = *based.value;
  auto f = [&](std::size_t mask) -> const SubspaceBasis& { return dst.subspace(emb.map[mask]).basis(); };

  ApartmentWitness w;
  w.base = base;
  w.m = m;
  w.residue_frame.resize(static_cast<std::size_t>(2 * m));
  std::vector<bool> well_formed(w.residue_frame.size(), true);
  for (int k = 1; k <= m; ++k) {
    for (int sign : {+1, -1}) {
      std::optional<SubspaceBasis> face;
      for (std::size_t x = 0; x <= full; ++x) {
        const bool plus = (x >> (k - 1)) & 1u;
        if (plus != (sign > 0)) continue;
        face = face ? intersect(*face, f(x)) : f(x);
      }
      const int idx = sign * k;
      const auto slot = residue_slot(idx);
      w.residue_frame[slot] = SingularSubspace(space, *face);
      if (projective_dim(*face) != n - m) {
        out.violations.push_back("Q_" + std::to_string(idx) + " has projective dimension " +
                                 std::to_string(projective_dim(*face)) + ", expected " + std::to_string(n - m));
        well_formed[slot] = false;
      } else if (!is_subspace_of(base.basis(), *face)) {
        out.violations.push_back("Q_" + std::to_string(idx) + " does not contain the base");
        well_formed[slot] = false;
      }
    }
  }

  std::vector<int> indices;
  for (int k = 1; k <= m; ++k) {
    indices.push_back(k);
    indices.push_back(-k);
  }
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      const int i = indices[a], j = indices[b];
      const auto& qa = w.q(i);
      const auto& qb = w.q(j);
      if (!well_formed[residue_slot(i)] || !well_formed[residue_slot(j)]) continue;
      if (qa == qb) {
        out.violations.push_back("Q_" + std::to_string(i) + " equals Q_" + std::to_string(j));
        continue;
      }
      const bool expected = (i != -j);
      if (residue_collinear(space, base, qa, qb) != expected) {
        out.violations.push_back("Q_" + std::to_string(i) + (expected ? " not collinear with " : " collinear with ") +
                                 "Q_" + std::to_string(j) + " in the residue");
      }
    }
  }

  for (std::size_t x = 0; x <= full; ++x) {
    const HypercubeVertex vx{static_cast<std::uint32_t>(x), m};
    std::vector<SubspaceBasis> chosen;
    for (int i : indices) {
      const bool inside = is_subspace_of(w.q(i).basis(), f(x));
      if (inside != vx.contains(i)) {
        out.violations.push_back("membership of Q_" + std::to_string(i) + " in f(" + vx.to_string() +
                                 ") disagrees with the sign set");
      }
      if (vx.contains(i)) chosen.push_back(w.q(i).basis());
    }
    if (sum_span(chosen, space.p(), space.ambient_dim()) != f(x)) {
      out.violations.push_back("f(" + vx.to_string() + ") is not spanned by its Q_i");
    }
    w.members.push_back(dst.subspace(emb.map[x]));
  }

  if (m == n && out.violations.empty()) {
    std::vector<ProjectivePoint> pts;
    for (const auto& q : w.residue_frame) pts.emplace_back(q.basis().rows().front());
    if (!is_frame(space, pts)) out.violations.push_back("recovered points do not form a frame");
  }
  out.value = std::move(w);
  return out;
}

Embedding apartment_embedding(std::shared_ptr<const DenseGraph> graph, const Frame& frame) {
  const PolarSpace& space = space_of(*graph);
  const auto members = apartment_of_frame(space, frame);
  Embedding e{cube_graph(space.rank()), graph, {}};
  for (const auto& s : members) {
    const auto idx = graph->index_of(s);
    if (!idx) throw InvariantViolation("apartment member missing from the dual polar graph");
    e.map.push_back(*idx);
  }
  return e;
}

std::optional<ApartmentWitness> is_apartment(std::shared_ptr<const DenseGraph> graph,
                                             const std::vector<SingularSubspace>& members) {
  if (!graph || members.empty()) return std::nullopt;
  const PolarSpace& space = space_of(*graph);
  const std::size_t size = members.size();
  if ((size & (size - 1)) != 0 || size < 2) return std::nullopt;
  int m = 0;
  while ((std::size_t{1} << m) < size) ++m;
  if (m > space.rank()) return std::nullopt;

  std::vector<std::size_t> idx;
  for (const auto& s : members) {
    const auto i = graph->index_of(s);
    if (!i) return std::nullopt;
    idx.push_back(*i);
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) return std::nullopt;

  auto restricted = std::make_shared<const DenseGraph>(DenseGraph::metric_restriction(*graph, idx));
  SearchOptions opts;
  opts.max_embeddings = 1;
  opts.root = (std::size_t{1} << m) - 1;
  const auto found = search_embeddings(cube_graph(m), restricted, opts);
  if (found.embeddings.empty()) return std::nullopt;
  auto witness = recover_frame(found.embeddings.front());
  if (!witness.ok()) return std::nullopt;
  return std::move(witness.value);
}

VerificationReport verify_distance_formula(const DenseGraph& graph) {
  const auto start = std::chrono::steady_clock::now();
  const PolarSpace& space = space_of(graph);
  const int n = space.rank();
  VerificationReport r;
  r.statement = "distance";
  r.p = space.p();
  r.n = n;
  std::int64_t pairs = 0;
  for (std::size_t u = 0; u < graph.size(); ++u) {
    for (std::size_t v = u; v < graph.size(); ++v) {
      ++pairs;
      const auto meet = intersect(graph.subspace(u).basis(), graph.subspace(v).basis());
      const int expected = (n - 1) - projective_dim(meet);
      if (graph.dist(u, v) != expected) {
        r.add_violation("d(" + std::to_string(u) + "," + std::to_string(v) + ") = " + std::to_string(graph.dist(u, v)) +
                        " but (n-1) - dim(S∩U) = " + std::to_string(expected));
      }
      if ((graph.dist(u, v) == n) != (meet.rank() == 0)) {
        r.add_violation("opposition and disjointness disagree for " + std::to_string(u) + "," + std::to_string(v));
      }
    }
  }
  if (graph.diameter() != n) r.add_violation("diameter " + std::to_string(graph.diameter()) + " differs from n");
  r.counts["vertices"] = static_cast<std::int64_t>(graph.size());
  r.counts["pairs"] = pairs;
  r.counts["diameter"] = graph.diameter();
  r.elapsed_seconds = seconds_since(start);
  return r;
}

VerificationReport verify_axioms(const PolarSpace& space, bool include_point_residue) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.statement = "axioms";
  r.p = space.p();
  r.n = space.rank();
  auto record = [&](const AxiomReport& ax, const std::string& prefix) {
    for (const auto& c : ax.checks) {
      if (!c.passed) r.add_violation(prefix + c.name + ": " + c.witness);
    }
    r.counts[prefix + "points"] = static_cast<std::int64_t>(ax.point_count);
    r.counts[prefix + "lines"] = static_cast<std::int64_t>(ax.line_count);
    r.counts[prefix + "min_line_size"] = static_cast<std::int64_t>(ax.min_line_size);
    r.counts[prefix + "max_line_size"] = static_cast<std::int64_t>(ax.max_line_size);
  };
  record(check_polar_axioms(space), "");
  if (include_point_residue && space.rank() >= 3) {
    const SingularSubspace pt(space, space.points().front().as_subspace());
    record(check_polar_axioms(residue_geometry(space, pt)), "residue_");
  }
  r.elapsed_seconds = seconds_since(start);
  return r;
}

VerificationReport verify_lemma1(const DenseGraph& graph, SearchMode mode, std::uint64_t budget, std::uint64_t seed) {
  if (budget == 0) throw ContractViolation("verify_lemma1: budget must be positive");
  const auto start = std::chrono::steady_clock::now();
  const PolarSpace& space = space_of(graph);
  VerificationReport r;
  r.statement = "lemma1";
  r.p = space.p();
  r.n = space.rank();
  r.mode = to_string(mode);
  r.budget = budget;
  r.seed = seed;

  std::int64_t geodesics = 0, interior = 0, pairs = 0;
  auto check = [&](const std::vector<std::size_t>& path) {
    ++geodesics;
    if (path.size() < 3) return;
    const auto meet = intersect(graph.subspace(path.front()).basis(), graph.subspace(path.back()).basis());
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      ++interior;
      if (!is_subspace_of(meet, graph.subspace(path[i]).basis())) {
        r.add_violation("geodesic " + path_string(path) + ": endpoint intersection not inside vertex " +
                        std::to_string(path[i]));
      }
    }
  };

  if (mode == SearchMode::Exhaustive) {
    std::uint64_t remaining = budget;
    for (std::size_t u = 0; u < graph.size() && r.complete; ++u) {
      for (std::size_t v = u + 1; v < graph.size(); ++v) {
        const auto gs = remaining ? geodesics_between(graph, u, v, remaining) : GeodesicSet{{}, 0, false};
        if (!gs.complete) {
          r.complete = false;
          break;
        }
        ++pairs;
        remaining -= gs.paths.size();
        for (const auto& path : gs.paths) check(path);
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, graph.size() - 1);
    for (std::uint64_t k = 0; k < budget; ++k) {
      std::size_t u = pick(rng), v = pick(rng);
      while (v == u) v = pick(rng);
      ++pairs;
      const auto gs = geodesics_between(graph, u, v, 1, split_seed(seed, k));
      check(gs.paths.front());
    }
  }
  r.counts["geodesics"] = geodesics;
  r.counts["interior_checks"] = interior;
  r.counts["pairs"] = pairs;
  r.elapsed_seconds = seconds_since(start);
  return r;
}

VerificationReport verify_lemma2(int m, int geodesic_limit) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.statement = "lemma2";
  r.m = m;
  const auto& cube = *cube_graph(m);
  const std::size_t full = cube.size() - 1;
  for (std::size_t v = 0; v < cube.size(); ++v) {
    const auto& far = cube.layer(v, static_cast<std::size_t>(m));
    if (far.count() != 1 || !far.test(v ^ full)) {
      r.add_violation("vertex " + cube.cube_vertex(v).to_string() + " has " + std::to_string(far.count()) +
                      " opposite vertices");
    }
  }
  std::int64_t pairs = 0, geodesics = 0;
  if (m <= geodesic_limit) {
    for (std::size_t v = 0; v < cube.size(); ++v) {
      const std::size_t w = v ^ full;
      if (v > w) continue;
      ++pairs;
      const auto gs = geodesics_between(cube, v, w, std::numeric_limits<std::uint64_t>::max());
      geodesics += static_cast<std::int64_t>(gs.paths.size());
      Bitset covered(cube.size());
      for (const auto& path : gs.paths) {
        for (auto x : path) covered.set(x);
      }
      const auto missed = (~covered).find_first();
      if (missed != Bitset::npos) {
        r.add_violation("no geodesic " + cube.cube_vertex(v).to_string() + " -> " + cube.cube_vertex(w).to_string() +
                        " through " + cube.cube_vertex(missed).to_string());
      }
    }
  }
  r.counts["vertices"] = static_cast<std::int64_t>(cube.size());
  r.counts["opposite_pairs"] = pairs;
  r.counts["geodesics"] = geodesics;
  r.elapsed_seconds = seconds_since(start);
  return r;
}

VerificationReport verify_theorem2(std::shared_ptr<const DenseGraph> graph, int m, const SearchOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const PolarSpace& space = space_of(*graph);
  const int n = space.rank();
  if (m < 1 || m > n) throw ContractViolation("verify_theorem2: need 1 <= m <= n");
  VerificationReport r;
  r.statement = "theorem2";
  r.p = space.p();
  r.n = n;
  r.m = m;
  r.mode = to_string(options.mode);
  r.budget = options.node_budget;
  r.seed = options.seed;

  const auto found = search_hypercube_embeddings(m, graph, options);
  const auto& embs = found.embeddings;

  // Per embedding: frame recovery. Per distinct image: apartment recognition
  // and, for m = n, the frame round trip.
  std::vector<std::vector<std::string>> problems(embs.size());
  std::vector<bool> first_of_image(embs.size(), false);
  {
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < embs.size(); ++i) first_of_image[i] = seen.insert(embs[i].image()).second;
  }
  std::vector<int> is_apt(embs.size(), 0);
  detail::parallel_for(embs.size(), options.workers, [&](std::size_t i) {
    auto& out = problems[i];
    const auto rf = recover_frame(embs[i]);
    for (const auto& v : rf.violations) out.push_back(v);
    if (!rf.ok() || !first_of_image[i]) return;
    std::vector<SingularSubspace> members;
    for (auto t : embs[i].map) members.push_back(graph->subspace(t));
    const auto witness = is_apartment(graph, members);
    if (!witness) {
      out.push_back("image is not recognized as an apartment");
      return;
    }
    if (witness->base != rf.value->base) out.push_back("apartment base differs from the embedding's base");
    if (witness->base.projdim() != n - m - 1) out.push_back("apartment base has the wrong dimension");
    is_apt[i] = 1;
    if (m == n) {
      std::vector<ProjectivePoint> pts;
      for (const auto& q : rf.value->residue_frame) pts.emplace_back(q.basis().rows().front());
      const auto frame = is_frame(space, pts);
      if (!frame) {
        out.push_back("recovered points are not a frame");
        return;
      }
      auto rebuilt = apartment_of_frame(space, *frame);
      std::sort(rebuilt.begin(), rebuilt.end());
      std::sort(members.begin(), members.end());
      if (rebuilt != members) out.push_back("apartment_of_frame(recovered frame) differs from the image");
    }
  });
  for (std::size_t i = 0; i < embs.size(); ++i) {
    for (const auto& v : problems[i]) r.add_violation("embedding #" + std::to_string(i) + ": " + v);
  }

  std::int64_t apartments = 0;
  for (auto a : is_apt) apartments += a;
  r.counts["embeddings"] = static_cast<std::int64_t>(embs.size());
  r.counts["distinct_images"] = static_cast<std::int64_t>(found.stats.distinct_images);
  r.counts["apartments"] = apartments;
  r.counts["nodes"] = static_cast<std::int64_t>(found.stats.nodes);
  if (options.mode == SearchMode::Sample) r.counts["restarts"] = static_cast<std::int64_t>(found.stats.restarts);
  r.complete = found.stats.complete;

  if (options.mode == SearchMode::Exhaustive && found.stats.complete) {
    const std::uint64_t aut = (std::uint64_t{1} << m) * factorial(m);
    if (embs.size() % aut != 0) {
      r.add_violation("embedding count " + std::to_string(embs.size()) + " not divisible by |Aut(H_m)| = " +
                      std::to_string(aut));
    }
    if (embs.size() != found.stats.distinct_images * aut) {
      r.add_violation("embeddings per image differ from |Aut(H_m)|");
    }
    if (m == n) {
      const auto frames = enumerate_frames(space, options.node_budget);
      if (frames.complete) {
        r.counts["frames"] = static_cast<std::int64_t>(frames.frames.size());
        if (frames.frames.size() != found.stats.distinct_images) {
          r.add_violation("distinct images " + std::to_string(found.stats.distinct_images) + " != frames " +
                          std::to_string(frames.frames.size()));
        }
      }
    }
  }
  r.elapsed_seconds = seconds_since(start);
  return r;
}

}  // namespace dualpolar
