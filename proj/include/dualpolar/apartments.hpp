#pragma once

// Isometric embeddings of hypercubes into dual polar graphs, parabolic base
// extraction, frame recovery and apartment recognition, with verifiers for
// the geodesic, hypercube and apartment statements.

#include <memory>
#include <optional>
#include <vector>

#include "dualpolar/embedding_search.hpp"
#include "dualpolar/graphs.hpp"
#include "dualpolar/polar_space.hpp"
#include "dualpolar/report.hpp"

namespace dualpolar {

/// Witness that a set of 2^m maximal singular subspaces is an apartment of
/// the parabolic subspace [M>_{n-1}.
struct ApartmentWitness {
  SingularSubspace base;
  int m = 0;
  /// Q_{+1}, Q_{-1}, Q_{+2}, Q_{-2}, ...: the residue frame in star(M, projdim(M)+1).
  std::vector<SingularSubspace> residue_frame;
  /// Members indexed by hypercube sign mask.
  std::vector<SingularSubspace> members;

  const SingularSubspace& q(int signed_index) const;
};

/// Slot of signed index ±k in ApartmentWitness::residue_frame.
std::size_t residue_slot(int signed_index);

/// search_embeddings with H_m as source, BFS order from {+1, ..., +m}.
/// Throws ContractViolation if m < 1 or m exceeds the graph's diameter.
SearchResult search_hypercube_embeddings(int m, std::shared_ptr<const DenseGraph> graph, SearchOptions options);

/// M = f(v) ∩ f(w) for the opposite pair v = {+1..+m}, w = {-1..-m}, with the
/// parabolic containment and independence checks.
Verified<SingularSubspace> base_subspace(const Embedding& emb);

/// Q_i = ∩ {f(X) : i ∈ X} for every signed index i, checked to be a residue
/// frame whose transversal spans are the images.
Verified<ApartmentWitness> recover_frame(const Embedding& emb);

/// H_n -> Γ_{n-1} labeling of apartment_of_frame(frame) by sign masks.
Embedding apartment_embedding(std::shared_ptr<const DenseGraph> graph, const Frame& frame);

/// Recognizes apartments of parabolic subspaces by labeling and recovery.
std::optional<ApartmentWitness> is_apartment(std::shared_ptr<const DenseGraph> graph,
                                             const std::vector<SingularSubspace>& members);

/// d(S, U) = (n-1) - dim(S ∩ U) and "opposite iff disjoint" over all pairs.
VerificationReport verify_distance_formula(const DenseGraph& graph);

/// Polar axioms on the space and, optionally, on the residue of a point.
VerificationReport verify_axioms(const PolarSpace& space, bool include_point_residue);

/// Geodesic endpoints' intersection lies in every vertex along the geodesic.
/// Exhaustive: every geodesic (budget caps the count). Sample: `budget`
/// geodesics between seeded random pairs.
VerificationReport verify_lemma1(const DenseGraph& graph, SearchMode mode, std::uint64_t budget, std::uint64_t seed);

/// Unique opposite vertex in H_m; for m <= geodesic_limit also that every
/// vertex lies on a geodesic between every opposite pair.
VerificationReport verify_lemma2(int m, int geodesic_limit = 6);

/// Every image of H_m in the dual polar graph is an apartment of a parabolic
/// subspace with base of projective dimension n-m-1.
VerificationReport verify_theorem2(std::shared_ptr<const DenseGraph> graph, int m, const SearchOptions& options);

}  // namespace dualpolar
