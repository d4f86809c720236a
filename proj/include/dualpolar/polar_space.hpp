#pragma once

// The symplectic polar space W(2n-1, p): points of PG(2n-1, p) with the
// standard alternating form, whose Gram matrix pairs e_i with f_i in
// consecutive coordinates (e_1, f_1, e_2, f_2, ...).

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "dualpolar/field_linear.hpp"

namespace dualpolar {

using GramMatrix = std::vector<std::vector<std::uint8_t>>;

/// 1-dimensional subspace represented by its normalized vector.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  /// Throws ContractViolation for the zero vector.
  explicit ProjectivePoint(const Vector& v);

  const Vector& rep() const { return rep_; }
  SubspaceBasis as_subspace() const;

  friend bool operator==(const ProjectivePoint&, const ProjectivePoint&) = default;
  friend auto operator<=>(const ProjectivePoint&, const ProjectivePoint&) = default;

 private:
  Vector rep_;
};

class PolarSpace;

/// Totally isotropic subspace in canonical form.
class SingularSubspace {
 public:
  SingularSubspace() = default;
  /// Validates total isotropy; throws ContractViolation otherwise.
  SingularSubspace(const PolarSpace& space, SubspaceBasis basis);

  const SubspaceBasis& basis() const { return basis_; }
  int projdim() const { return projective_dim(basis_); }
  std::size_t rank() const { return basis_.rank(); }
  std::string to_string() const { return basis_.to_string(); }

  friend bool operator==(const SingularSubspace&, const SingularSubspace&) = default;
  friend auto operator<=>(const SingularSubspace& a, const SingularSubspace& b) { return a.basis_ <=> b.basis_; }

 private:
  SubspaceBasis basis_;
};

/// 2n points with the opposition involution; points sorted, sigma[i] is the
/// unique index whose point is not collinear with points[i].
struct Frame {
  std::vector<ProjectivePoint> points;
  std::vector<int> sigma;

  friend bool operator==(const Frame&, const Frame&) = default;
};

class PolarSpace {
 public:
  /// Sp(2n, p) with the standard Gram matrix. Requires p prime, n >= 1, 2n <= 8.
  PolarSpace(unsigned p, int rank);

  /// Test hook: arbitrary Gram matrix, no nondegeneracy or rank checks.
  static PolarSpace with_gram_unchecked(unsigned p, int rank, GramMatrix gram);

  unsigned p() const { return p_; }
  int rank() const { return rank_; }
  std::size_t ambient_dim() const { return static_cast<std::size_t>(2 * rank_); }
  const GramMatrix& gram() const { return gram_; }

  FieldScalar form_value(const Vector& u, const Vector& v) const;
  bool is_totally_isotropic(const SubspaceBasis& s) const;

  /// All points, sorted lexicographically; indices are stable point IDs.
  const std::vector<ProjectivePoint>& points() const { return points_; }
  std::size_t point_count() const { return points_.size(); }
  /// Index of a (not necessarily normalized) nonzero vector's point.
  std::size_t point_index(const Vector& v) const;
  std::size_t point_index(const ProjectivePoint& pt) const { return point_index(pt.rep()); }
  /// Point IDs lying in the subspace, ascending.
  std::vector<std::size_t> point_ids(const SubspaceBasis& s) const;
  /// Bit q set iff points q and `id` are distinct and orthogonal.
  const boost::dynamic_bitset<>& collinear_with(std::size_t id) const { return collinear_[id]; }

 private:
  PolarSpace(unsigned p, int rank, GramMatrix gram, bool validate);

  unsigned p_;
  int rank_;
  GramMatrix gram_;
  std::vector<ProjectivePoint> points_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<boost::dynamic_bitset<>> collinear_;
};

GramMatrix standard_gram(unsigned p, int rank);

inline FieldScalar form_value(const PolarSpace& space, const Vector& u, const Vector& v) {
  return space.form_value(u, v);
}

/// p ⊥ q for distinct points. Throws ContractViolation when a == b.
bool is_collinear(const PolarSpace& space, const ProjectivePoint& a, const ProjectivePoint& b);

std::vector<ProjectivePoint> enumerate_points(const PolarSpace& space);

/// Every singular subspace of projective dimension k, canonically sorted.
std::vector<SingularSubspace> enumerate_singular(const PolarSpace& space, int k);

/// Closed-form count of maximal singular subspaces, prod_{i=1..n} (p^i + 1).
std::uint64_t maximal_subspace_count(unsigned p, int rank);

/// {v : form(v, x) = 0 for all x in X}.
SubspaceBasis perp_subspace(const PolarSpace& space, const SubspaceBasis& x);
inline SubspaceBasis perp_subspace(const PolarSpace& space, const SingularSubspace& x) {
  return perp_subspace(space, x.basis());
}

/// All singular subspaces of projective dimension k containing M (M may be
/// the zero subspace). Requires projdim(M) < k <= n-1.
std::vector<SingularSubspace> star(const PolarSpace& space, const SingularSubspace& m, int k);

/// Collinearity in the residue polar space on star(M, projdim(M)+1): A and B
/// span a singular subspace of projective dimension projdim(M)+2.
bool residue_collinear(const PolarSpace& space, const SingularSubspace& m, const SingularSubspace& a,
                       const SingularSubspace& b);

SingularSubspace zero_subspace(const PolarSpace& space);
SingularSubspace span_points(const PolarSpace& space, std::span<const ProjectivePoint> pts);

// --- Frames and apartments ---

/// Returns the frame if every point has exactly one non-collinear partner.
/// Throws ContractViolation unless exactly 2n distinct points are given.
std::optional<Frame> is_frame(const PolarSpace& space, std::span<const ProjectivePoint> points);

/// The frame e_1, f_1, ..., e_n, f_n.
Frame standard_frame(const PolarSpace& space);

/// sigma-pairs (i, sigma(i)) with i < sigma(i), ordered by i.
std::vector<std::pair<int, int>> frame_pairs(const Frame& frame);

/// The 2^n maximal singular subspaces spanned by sigma-transversals. Entry
/// `mask` picks the first point of pair j when bit j is set, its partner
/// otherwise (pairs as in frame_pairs).
std::vector<SingularSubspace> apartment_of_frame(const PolarSpace& space, const Frame& frame);

struct FrameEnumeration {
  std::vector<Frame> frames;
  std::uint64_t nodes = 0;
  bool complete = true;
};

/// All frames (each once, sorted point lists) or a partial list when the
/// node budget runs out.
FrameEnumeration enumerate_frames(const PolarSpace& space, std::uint64_t budget);

/// One random frame grown pair by pair inside iterated perps.
Frame random_frame(const PolarSpace& space, std::mt19937_64& rng);

// --- Axioms ---

/// Abstract point-line geometry; lines list point indices.
struct IncidenceGeometry {
  std::size_t point_count = 0;
  std::vector<std::vector<std::size_t>> lines;
};

struct AxiomCheck {
  std::string name;
  bool passed = true;
  std::string witness;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  std::size_t point_count = 0;
  std::size_t line_count = 0;
  std::size_t min_line_size = 0;
  std::size_t max_line_size = 0;

  bool all_passed() const;
};

IncidenceGeometry point_line_geometry(const PolarSpace& space);
/// Points star(M, m+1), lines induced by star(M, m+2), m = projdim(M).
IncidenceGeometry residue_geometry(const PolarSpace& space, const SingularSubspace& m);

AxiomReport check_polar_axioms(const IncidenceGeometry& geometry);
AxiomReport check_polar_axioms(const PolarSpace& space);

}  // namespace dualpolar
