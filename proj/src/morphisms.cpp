#include "dualpolar/morphisms.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "dualpolar/errors.hpp"
#include "dualpolar/parallel.hpp"

namespace dualpolar {

namespace {

const PolarSpace& space_of(const DenseGraph& g) {
  if (!g.space()) throw ContractViolation("graph is not a dual polar graph");
  return *g.space();
}

std::string vertex_name(const DenseGraph& g, std::size_t v) { return g.subspace(v).to_string(); }

}  // namespace

Verified<SingularSubspace> verify_lemma5(const GraphEmbedding& f) {
  Verified<SingularSubspace> out;
  const DenseGraph& src = *f.source;
  const DenseGraph& dst = *f.target;
  const PolarSpace& s_space = space_of(src);
  const PolarSpace& d_space = space_of(dst);
  const int n = s_space.rank();
  const int n2 = d_space.rank();
  if (!f.is_isometric()) {
    out.violations.push_back("map is not an isometric embedding");
    return out;
  }
  auto img = [&](std::size_t v) -> const SubspaceBasis& { return dst.subspace(f.map[v]).basis(); };

  const std::size_t x0 = 0;
  const auto y0 = src.layer(x0, static_cast<std::size_t>(n)).find_first();
  if (y0 == Bitset::npos) throw InvariantViolation("source vertex 0 has no opposite vertex");
  const auto base = intersect(img(x0), img(y0));
  if (projective_dim(base) != n2 - n - 1) {
    out.violations.push_back("f(X0) ∩ f(Y0) has projective dimension " + std::to_string(projective_dim(base)) +
                             ", expected " + std::to_string(n2 - n - 1));
  }
  for (std::size_t v = 0; v < src.size(); ++v) {
    if (!is_subspace_of(base, img(v))) {
      out.violations.push_back("base not contained in f(" + vertex_name(src, v) + ")");
    }
  }
  for (std::size_t u = 0; u < src.size(); ++u) {
    const auto& opp = src.layer(u, static_cast<std::size_t>(n));
    for (auto v = opp.find_next(u); v != Bitset::npos; v = opp.find_next(v)) {
      if (intersect(img(u), img(v)) != base) {
        out.violations.push_back("opposite pair " + vertex_name(src, u) + ", " + vertex_name(src, v) +
                                 " gives a different base");
      }
    }
  }
  out.value = SingularSubspace(d_space, base);
  return out;
}

Verified<InducedPointMap> induced_point_map(const GraphEmbedding& f) {
  Verified<InducedPointMap> out;
  auto base_check = verify_lemma5(f);
  out.violations = base_check.violations;
  if (!base_check.ok()) return out;

  const DenseGraph& src = *f.source;
  const DenseGraph& dst = *f.target;
  const PolarSpace& s_space = space_of(src);
  const PolarSpace& d_space = space_of(dst);
  const int n = s_space.rank();
  const int n2 = d_space.rank();
  const auto& base = *base_check.value;

  std::vector<std::vector<std::size_t>> points_of_vertex(src.size());
  std::vector<std::optional<SubspaceBasis>> acc(s_space.point_count());
  for (std::size_t v = 0; v < src.size(); ++v) {
    points_of_vertex[v] = s_space.point_ids(src.subspace(v).basis());
    const auto& image = dst.subspace(f.map[v]).basis();
    for (auto id : points_of_vertex[v]) acc[id] = acc[id] ? intersect(*acc[id], image) : image;
  }

  InducedPointMap g;
  g.base = base;
  for (std::size_t id = 0; id < acc.size(); ++id) {
    if (!acc[id]) throw InvariantViolation("point lies in no maximal singular subspace");
    if (projective_dim(*acc[id]) != n2 - n) {
      out.violations.push_back("g(" + s_space.points()[id].rep().to_string() + ") has projective dimension " +
                               std::to_string(projective_dim(*acc[id])) + ", expected " + std::to_string(n2 - n));
    }
    if (!is_subspace_of(base.basis(), *acc[id])) {
      out.violations.push_back("g(" + s_space.points()[id].rep().to_string() + ") does not contain M");
    }
    g.images.emplace_back(d_space, *acc[id]);
  }
  for (std::size_t v = 0; v < src.size(); ++v) {
    std::vector<SubspaceBasis> parts;
    for (auto id : points_of_vertex[v]) parts.push_back(g.images[id].basis());
    if (sum_span(parts, d_space.p(), d_space.ambient_dim()) != dst.subspace(f.map[v]).basis()) {
      out.violations.push_back("f(" + vertex_name(src, v) + ") is not spanned by the g-images of its points");
    }
  }
  auto sorted = g.images;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    out.violations.push_back("induced point map is not injective");
  }
  out.value = std::move(g);
  return out;
}

FramesPreservingReport check_frames_preserving(const PolarSpace& src, const PolarSpace& dst,
                                               const InducedPointMap& g, const std::vector<Frame>& frames) {
  FramesPreservingReport out;
  if (g.images.size() != src.point_count()) throw ContractViolation("point map does not cover the source points");
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& frame = frames[k];
    ++out.frames_checked;
    std::vector<const SingularSubspace*> img;
    for (const auto& pt : frame.points) img.push_back(&g.images[src.point_index(pt)]);
    for (std::size_t i = 0; i < img.size(); ++i) {
      for (std::size_t j = i + 1; j < img.size(); ++j) {
        const std::string where = "frame #" + std::to_string(k) + " points " + std::to_string(i) + "," +
                                  std::to_string(j) + ": ";
        if (*img[i] == *img[j]) {
          out.violations.push_back(where + "images coincide");
          continue;
        }
        const bool expected = static_cast<int>(j) != frame.sigma[i];
        try {
          if (residue_collinear(dst, g.base, *img[i], *img[j]) != expected) {
            out.violations.push_back(where + (expected ? "images not collinear" : "opposite images collinear"));
          }
        } catch (const ContractViolation& e) {
          out.violations.push_back(where + e.what());
        }
      }
    }
  }
  return out;
}

std::vector<Frame> frames_for_check(const PolarSpace& space, std::uint64_t budget, std::size_t sample,
                                    std::uint64_t seed, bool* exhaustive) {
  auto all = enumerate_frames(space, budget);
  if (exhaustive) *exhaustive = all.complete;
  if (all.complete) return std::move(all.frames);
  std::mt19937_64 rng(seed);
  std::vector<Frame> frames;
  for (std::size_t i = 0; i < sample; ++i) frames.push_back(random_frame(space, rng));
  return frames;
}

Verified<GraphEmbedding> lift_frame_preserving_map(std::shared_ptr<const DenseGraph> src,
                                                   std::shared_ptr<const DenseGraph> dst, const SingularSubspace& base,
                                                   const std::vector<SingularSubspace>& g) {
  Verified<GraphEmbedding> out;
  const PolarSpace& s_space = space_of(*src);
  const PolarSpace& d_space = space_of(*dst);
  const int n = s_space.rank();
  const int n2 = d_space.rank();
  if (base.projdim() != n2 - n - 1) {
    out.violations.push_back("M has projective dimension " + std::to_string(base.projdim()) + ", expected " +
                             std::to_string(n2 - n - 1));
    return out;
  }
  if (g.size() != s_space.point_count()) throw ContractViolation("point map does not cover the source points");
  for (std::size_t id = 0; id < g.size(); ++id) {
    if (g[id].projdim() != base.projdim() + 1 || !is_subspace_of(base.basis(), g[id].basis())) {
      out.violations.push_back("g(" + s_space.points()[id].rep().to_string() + ") is not in star(M, projdim(M)+1)");
    }
  }
  if (!out.violations.empty()) return out;

  GraphEmbedding f{src, dst, {}};
  for (std::size_t v = 0; v < src->size(); ++v) {
    std::vector<SubspaceBasis> parts;
    for (auto id : s_space.point_ids(src->subspace(v).basis())) parts.push_back(g[id].basis());
    const auto span = sum_span(parts, d_space.p(), d_space.ambient_dim());
    if (span.rank() != static_cast<std::size_t>(n2) || !d_space.is_totally_isotropic(span)) {
      out.violations.push_back("span of g(" + vertex_name(*src, v) + ") = " + span.to_string() +
                               " is not a maximal singular subspace");
      continue;
    }
    const auto idx = dst->index_of(SingularSubspace(d_space, span));
    if (!idx) throw InvariantViolation("maximal singular subspace missing from the target graph");
    f.map.push_back(*idx);
  }
  if (!out.violations.empty()) return out;

  auto sorted = f.map;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    out.violations.push_back("induced map on maximal subspaces is not injective");
    return out;
  }
  for (std::size_t u = 0; u < src->size() && out.violations.empty(); ++u) {
    for (std::size_t v = u + 1; v < src->size(); ++v) {
      if (src->dist(u, v) != dst->dist(f.map[u], f.map[v])) {
        out.violations.push_back("distance not preserved between " + vertex_name(*src, u) + " and " +
                                 vertex_name(*src, v));
        break;
      }
    }
  }
  out.value = std::move(f);
  return out;
}

InducedPointMap shifted_point_map(const PolarSpace& src, const PolarSpace& dst) {
  const int d = dst.rank() - src.rank();
  if (d < 0 || src.p() != dst.p()) throw ContractViolation("shifted_point_map: need equal p and n <= n'");
  const unsigned p = dst.p();
  const std::size_t dim = dst.ambient_dim();
  std::vector<Vector> base_rows;
  for (int i = 0; i < d; ++i) base_rows.push_back(Vector::unit(p, dim, static_cast<std::size_t>(2 * i)));
  InducedPointMap g;
  g.base = SingularSubspace(dst, rref(p, dim, base_rows));
  for (const auto& pt : src.points()) {
    Vector shifted(p, dim);
    for (std::size_t j = 0; j < src.ambient_dim(); ++j) shifted.set(static_cast<std::size_t>(2 * d) + j, pt.rep()[j]);
    auto rows = base_rows;
    rows.push_back(shifted);
    g.images.emplace_back(dst, rref(p, dim, rows));
  }
  return g;
}

SearchResult search_dualpolar_embeddings(std::shared_ptr<const DenseGraph> src, std::shared_ptr<const DenseGraph> dst,
                                         SearchOptions options) {
  space_of(*src);
  space_of(*dst);
  if (src->diameter() > dst->diameter()) {
    SearchResult empty;
    empty.stats.complete = true;
    return empty;
  }
  options.root = 0;
  return search_embeddings(std::move(src), std::move(dst), options);
}

VerificationReport verify_morphisms(const std::string& statement, std::shared_ptr<const DenseGraph> src,
                                    std::shared_ptr<const DenseGraph> dst, const SearchOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (statement != "lemma5" && statement != "theorem3" && statement != "chow") {
    throw ContractViolation("unknown morphism statement " + statement);
  }
  const PolarSpace& s_space = space_of(*src);
  const PolarSpace& d_space = space_of(*dst);
  const int n = s_space.rank();
  const int n2 = d_space.rank();
  if (n > n2) throw ContractViolation("verify_morphisms: need n <= n'");
  if (statement == "chow" && n != n2) throw ContractViolation("chow: source and target ranks must agree");

  VerificationReport r;
  r.statement = statement;
  r.p = s_space.p();
  r.n = n;
  r.m = n;
  r.n_prime = n2;
  r.mode = to_string(options.mode);
  r.budget = options.node_budget;
  r.seed = options.seed;

  const bool full = statement != "lemma5";
  bool frames_exhaustive = false;
  std::vector<Frame> frames;
  if (full) frames = frames_for_check(s_space, options.node_budget, 100, split_seed(options.seed, 0xF), &frames_exhaustive);

  if (statement == "theorem3") {
    const auto fixture = shifted_point_map(s_space, d_space);
    const auto lifted = lift_frame_preserving_map(src, dst, fixture.base, fixture.images);
    r.merge_violations(lifted.violations, "fixture lift: ");
    if (lifted.ok()) {
      const auto l5 = verify_lemma5(*lifted.value);
      r.merge_violations(l5.violations, "fixture base: ");
      if (l5.ok() && *l5.value != fixture.base) r.add_violation("fixture base: extracted base differs from M");
      const auto g = induced_point_map(*lifted.value);
      r.merge_violations(g.violations, "fixture point map: ");
      if (g.ok() && (g.value->base != fixture.base || g.value->images != fixture.images)) {
        r.add_violation("fixture point map: (M, g) not recovered");
      }
      if (g.ok()) r.merge_violations(check_frames_preserving(s_space, d_space, *g.value, frames).violations, "fixture frames: ");
    }
    r.counts["fixture_checked"] = 1;
  }

  SearchOptions opts = options;
  opts.goal = SampleGoal::DistinctMaps;
  const auto found = search_dualpolar_embeddings(src, dst, opts);
  const auto& embs = found.embeddings;

  std::vector<std::vector<std::string>> problems(embs.size());
  std::vector<std::int64_t> apartments(embs.size(), 0);
  detail::parallel_for(embs.size(), options.workers, [&](std::size_t i) {
    auto& out = problems[i];
    const auto& f = embs[i];
    if (!full) {
      out = verify_lemma5(f).violations;
      return;
    }
    const auto g = induced_point_map(f);
    out = g.violations;
    if (!g.ok()) return;
    for (auto& v : check_frames_preserving(s_space, d_space, *g.value, frames).violations) out.push_back(std::move(v));

    // Apartments of the source go to apartments of [M>_{n'-1}.
    for (std::size_t k = 0; k < frames.size(); ++k) {
      std::vector<SingularSubspace> images;
      for (const auto& s : apartment_of_frame(s_space, frames[k])) images.push_back(dst->subspace(f.map[*src->index_of(s)]));
      const auto w = is_apartment(dst, images);
      if (!w || w->m != n || w->base != g.value->base) {
        out.push_back("apartment of frame #" + std::to_string(k) + " not sent to an apartment of [M>");
      } else {
        ++apartments[i];
      }
    }

    if (statement == "chow") {
      auto image = f.image();
      if (image.size() != dst->size()) out.push_back("embedding is not a bijection");
      const auto& imgs = g.value->images;
      for (std::size_t a = 0; a < imgs.size(); ++a) {
        for (std::size_t b = a + 1; b < imgs.size(); ++b) {
          const bool before = is_collinear(s_space, s_space.points()[a], s_space.points()[b]);
          const bool after = d_space.form_value(imgs[a].basis().rows().front(), imgs[b].basis().rows().front()).value == 0;
          if (before != after) {
            out.push_back("point map does not preserve collinearity of points " + std::to_string(a) + "," +
                          std::to_string(b));
          }
        }
      }
    }
  });
  for (std::size_t i = 0; i < embs.size(); ++i) {
    for (const auto& v : problems[i]) r.add_violation("embedding #" + std::to_string(i) + ": " + v);
  }

  std::int64_t apt_total = 0;
  for (auto a : apartments) apt_total += a;
  r.counts["embeddings"] = static_cast<std::int64_t>(embs.size());
  r.counts["distinct_images"] = static_cast<std::int64_t>(found.stats.distinct_images);
  r.counts["nodes"] = static_cast<std::int64_t>(found.stats.nodes);
  if (options.mode == SearchMode::Sample) r.counts["restarts"] = static_cast<std::int64_t>(found.stats.restarts);
  if (full) {
    r.counts["frames_per_embedding"] = static_cast<std::int64_t>(frames.size());
    r.counts["frames_exhaustive"] = frames_exhaustive ? 1 : 0;
    r.counts["apartments"] = apt_total;
  }
  r.complete = found.stats.complete;
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace dualpolar
