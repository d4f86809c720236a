#pragma once

// Isometric embeddings Γ_{n-1}(Π) -> Γ_{n'-1}(Π'), n <= n': the parabolic
// base M, the point map induced on Π, frame preservation, and the converse
// construction from a frame-preserving point map.

#include <memory>
#include <vector>

#include "dualpolar/apartments.hpp"

namespace dualpolar {

/// An Embedding whose source and target are both dual polar graphs.
using GraphEmbedding = Embedding;

/// g(p) in star(M, projdim(M)+1) for every point p of the source space,
/// indexed by source point ID.
struct InducedPointMap {
  SingularSubspace base;
  std::vector<SingularSubspace> images;
};

/// M = f(X0) ∩ f(Y0) for an opposite pair; containment in every image and
/// independence of the pair are checked.
Verified<SingularSubspace> verify_lemma5(const GraphEmbedding& f);

/// g(p) = ∩ {f(S) : p ∈ S}, with f(S) = <g(p) : p ∈ S> and injectivity checked.
Verified<InducedPointMap> induced_point_map(const GraphEmbedding& f);

struct FramesPreservingReport {
  std::uint64_t frames_checked = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// For each frame of the source space, the images must form a frame of the
/// residue polar space on star(M, projdim(M)+1).
FramesPreservingReport check_frames_preserving(const PolarSpace& src, const PolarSpace& dst,
                                               const InducedPointMap& g, const std::vector<Frame>& frames);

/// All frames when enumeration fits the budget, else `sample` seeded random ones.
std::vector<Frame> frames_for_check(const PolarSpace& space, std::uint64_t budget, std::size_t sample,
                                    std::uint64_t seed, bool* exhaustive = nullptr);

/// f(S) = <g(p) : p ∈ S>, validated as an isometric embedding.
Verified<GraphEmbedding> lift_frame_preserving_map(std::shared_ptr<const DenseGraph> src,
                                                   std::shared_ptr<const DenseGraph> dst, const SingularSubspace& base,
                                                   const std::vector<SingularSubspace>& g);

/// Fixture with d = n' - n: M = <e_1..e_d>, g(p) = <M, ι(p)> where ι shifts
/// e_i -> e_{i+d}, f_i -> f_{i+d}.
InducedPointMap shifted_point_map(const PolarSpace& src, const PolarSpace& dst);

/// Backtracking from source vertex 0 in BFS order. Empty when the source
/// diameter exceeds the target's.
SearchResult search_dualpolar_embeddings(std::shared_ptr<const DenseGraph> src, std::shared_ptr<const DenseGraph> dst,
                                         SearchOptions options);

/// `statement` is one of "lemma5", "theorem3", "chow".
VerificationReport verify_morphisms(const std::string& statement, std::shared_ptr<const DenseGraph> src,
                                    std::shared_ptr<const DenseGraph> dst, const SearchOptions& options);

}  // namespace dualpolar
