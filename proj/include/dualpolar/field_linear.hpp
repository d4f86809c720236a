#pragma once

// Exact linear algebra over small prime fields GF(p).
//
// Dimension convention: every SubspaceBasis stores its *linear* rank. The
// projective dimension of a subspace (points = 0, lines = 1, the empty
// subspace = -1) is obtained through projective_dim() and nowhere else.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dualpolar {

inline constexpr std::size_t kMaxAmbientDim = 16;

bool is_prime(unsigned value);

/// Element of GF(p); modulus travels with the value.
struct FieldScalar {
  std::uint8_t value = 0;
  std::uint8_t modulus = 2;

  friend bool operator==(const FieldScalar&, const FieldScalar&) = default;
};

/// Arithmetic helpers for GF(p). All inputs are residues in [0, p).
namespace gf {
inline std::uint8_t add(std::uint8_t a, std::uint8_t b, unsigned p) {
  return static_cast<std::uint8_t>((a + b) % p);
}
inline std::uint8_t sub(std::uint8_t a, std::uint8_t b, unsigned p) {
  return static_cast<std::uint8_t>((a + p - b) % p);
}
inline std::uint8_t mul(std::uint8_t a, std::uint8_t b, unsigned p) {
  return static_cast<std::uint8_t>((unsigned{a} * b) % p);
}
inline std::uint8_t neg(std::uint8_t a, unsigned p) {
  return static_cast<std::uint8_t>((p - a) % p);
}
std::uint8_t inv(std::uint8_t a, unsigned p);
}  // namespace gf

/// Coordinate vector in GF(p)^d with d <= kMaxAmbientDim.
class Vector {
 public:
  Vector() = default;
  Vector(unsigned p, std::size_t dim);
  Vector(unsigned p, std::initializer_list<int> coords);
  Vector(unsigned p, std::span<const int> coords);

  static Vector unit(unsigned p, std::size_t dim, std::size_t index);

  unsigned modulus() const { return p_; }
  std::size_t size() const { return dim_; }
  std::uint8_t operator[](std::size_t i) const { return c_[i]; }
  void set(std::size_t i, std::uint8_t v) { c_[i] = static_cast<std::uint8_t>(v % p_); }

  bool is_zero() const;
  /// Index of the first nonzero coordinate, or size() when zero.
  std::size_t leading_index() const;

  /// Scales so the first nonzero coordinate is 1. Zero stays zero.
  Vector normalized() const;
  Vector scaled(std::uint8_t factor) const;
  Vector plus(const Vector& other) const;
  /// this + factor * other
  Vector axpy(std::uint8_t factor, const Vector& other) const;

  /// Base-p integer code, first coordinate most significant. Monotone in
  /// lexicographic order for vectors of equal length.
  std::uint64_t code() const;

  std::vector<int> to_ints() const;
  std::string to_string() const;

  friend bool operator==(const Vector& a, const Vector& b);
  friend std::strong_ordering operator<=>(const Vector& a, const Vector& b);

 private:
  std::uint8_t p_ = 2;
  std::uint8_t dim_ = 0;
  std::array<std::uint8_t, kMaxAmbientDim> c_{};
};

/// Canonical basis of a linear subspace: rows in reduced row echelon form,
/// strictly increasing pivots. Equal row spaces give equal values.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;

  static SubspaceBasis zero(unsigned p, std::size_t dim);
  static SubspaceBasis whole(unsigned p, std::size_t dim);

  unsigned modulus() const { return p_; }
  std::size_t ambient_dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Vector>& rows() const { return rows_; }
  std::vector<std::size_t> pivots() const;

  std::string to_string() const;

  friend bool operator==(const SubspaceBasis&, const SubspaceBasis&) = default;
  friend std::strong_ordering operator<=>(const SubspaceBasis& a, const SubspaceBasis& b);

 private:
  friend SubspaceBasis rref(unsigned p, std::size_t dim, std::span<const Vector> rows);
  unsigned p_ = 2;
  std::size_t dim_ = 0;
  std::vector<Vector> rows_;
};

/// Projective dimension (rank - 1) of a subspace.
inline int projective_dim(const SubspaceBasis& s) { return static_cast<int>(s.rank()) - 1; }

/// RREF of the row space. Throws StructuralError on length or field mismatch.
SubspaceBasis rref(unsigned p, std::size_t dim, std::span<const Vector> rows);
/// Same, taking p and the ambient dimension from the first row (rows non-empty).
SubspaceBasis rref(std::span<const Vector> rows);

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b);
SubspaceBasis sum_span(const SubspaceBasis& a, const SubspaceBasis& b);
SubspaceBasis sum_span(std::span<const SubspaceBasis> parts, unsigned p, std::size_t dim);
bool contains(const SubspaceBasis& a, const Vector& v);
/// a is a subspace of b.
bool is_subspace_of(const SubspaceBasis& a, const SubspaceBasis& b);

/// Basis of {v : <a, v> = 0 for every row a}, where <,> is the dot product.
SubspaceBasis annihilator(unsigned p, std::size_t dim, std::span<const Vector> functionals);

/// All projective points (normalized nonzero vectors) of the subspace.
std::vector<Vector> points_of(const SubspaceBasis& s);

}  // namespace dualpolar
