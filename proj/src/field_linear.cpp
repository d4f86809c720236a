#include "dualpolar/field_linear.hpp"

#include <algorithm>
#include <sstream>

#include "dualpolar/errors.hpp"

namespace dualpolar {

bool is_prime(unsigned value) {
  if (value < 2) return false;
  for (unsigned d = 2; d * d <= value; ++d) {
    if (value % d == 0) return false;
  }
  return true;
}

namespace gf {
std::uint8_t inv(std::uint8_t a, unsigned p) {
  if (a == 0) throw ContractViolation("inverse of zero in GF(p)");
  for (unsigned x = 1; x < p; ++x) {
    if ((unsigned{a} * x) % p == 1) return static_cast<std::uint8_t>(x);
  }
  throw InvariantViolation("no inverse found; modulus is not prime");
}
}  // namespace gf

namespace {

void check_modulus(unsigned p) {
  if (p < 2 || p > 251 || !is_prime(p)) {
    throw StructuralError("field modulus must be a prime below 256, got " + std::to_string(p));
  }
}

void check_dim(std::size_t dim) {
  if (dim > kMaxAmbientDim) {
    throw StructuralError("ambient dimension " + std::to_string(dim) + " exceeds " +
                          std::to_string(kMaxAmbientDim));
  }
}

std::uint8_t reduce(int v, unsigned p) {
  int r = v % static_cast<int>(p);
  if (r < 0) r += static_cast<int>(p);
  return static_cast<std::uint8_t>(r);
}

}  // namespace

Vector::Vector(unsigned p, std::size_t dim) : p_(static_cast<std::uint8_t>(p)), dim_(static_cast<std::uint8_t>(dim)) {
  check_modulus(p);
  check_dim(dim);
}

Vector::Vector(unsigned p, std::initializer_list<int> coords)
    : Vector(p, std::span<const int>(coords.begin(), coords.size())) {}

Vector::Vector(unsigned p, std::span<const int> coords) : Vector(p, coords.size()) {
  for (std::size_t i = 0; i < coords.size(); ++i) c_[i] = reduce(coords[i], p);
}

Vector Vector::unit(unsigned p, std::size_t dim, std::size_t index) {
  Vector v(p, dim);
  if (index >= dim) throw StructuralError("unit vector index out of range");
  v.c_[index] = 1;
  return v;
}

bool Vector::is_zero() const { return leading_index() == dim_; }

std::size_t Vector::leading_index() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (c_[i] != 0) return i;
  }
  return dim_;
}

Vector Vector::normalized() const {
  const std::size_t lead = leading_index();
  if (lead == dim_ || c_[lead] == 1) return *this;
  return scaled(gf::inv(c_[lead], p_));
}

Vector Vector::scaled(std::uint8_t factor) const {
  Vector out = *this;
  for (std::size_t i = 0; i < dim_; ++i) out.c_[i] = gf::mul(c_[i], factor, p_);
  return out;
}

Vector Vector::plus(const Vector& other) const { return axpy(1, other); }

Vector Vector::axpy(std::uint8_t factor, const Vector& other) const {
  if (other.dim_ != dim_ || other.p_ != p_) throw StructuralError("vector shape mismatch");
  Vector out = *this;
  for (std::size_t i = 0; i < dim_; ++i) {
    out.c_[i] = gf::add(c_[i], gf::mul(factor, other.c_[i], p_), p_);
  }
  return out;
}

std::uint64_t Vector::code() const {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < dim_; ++i) code = code * p_ + c_[i];
  return code;
}

std::vector<int> Vector::to_ints() const { return {c_.begin(), c_.begin() + dim_}; }

std::string Vector::to_string() const {
  std::string s;
  s.reserve(dim_);
  for (std::size_t i = 0; i < dim_; ++i) s.push_back(static_cast<char>('0' + c_[i]));
  return s;
}

bool operator==(const Vector& a, const Vector& b) {
  return a.p_ == b.p_ && a.dim_ == b.dim_ && std::equal(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin());
}

std::strong_ordering operator<=>(const Vector& a, const Vector& b) {
  if (auto c = a.p_ <=> b.p_; c != 0) return c;
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin(),
                                                b.c_.begin() + b.dim_);
}

SubspaceBasis SubspaceBasis::zero(unsigned p, std::size_t dim) { return rref(p, dim, {}); }

SubspaceBasis SubspaceBasis::whole(unsigned p, std::size_t dim) {
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < dim; ++i) rows.push_back(Vector::unit(p, dim, i));
  return rref(p, dim, rows);
}

std::vector<std::size_t> SubspaceBasis::pivots() const {
  std::vector<std::size_t> out;
  for (const auto& r : rows_) out.push_back(r.leading_index());
  return out;
}

std::string SubspaceBasis::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (i) os << ';';
    os << rows_[i].to_string();
  }
  os << ']';
  return os.str();
}

std::strong_ordering operator<=>(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (auto c = a.p_ <=> b.p_; c != 0) return c;
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  if (auto c = a.rows_.size() <=> b.rows_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.rows_.begin(), a.rows_.end(), b.rows_.begin(), b.rows_.end());
}

SubspaceBasis rref(unsigned p, std::size_t dim, std::span<const Vector> rows) {
  check_modulus(p);
  check_dim(dim);
  std::vector<Vector> m;
  m.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != dim || r.modulus() != p) {
      throw StructuralError("rref: row of length " + std::to_string(r.size()) + " over GF(" +
                            std::to_string(r.modulus()) + ") in GF(" + std::to_string(p) + ")^" +
                            std::to_string(dim));
    }
    m.push_back(r);
  }

  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < m.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    m[rank] = m[rank].scaled(gf::inv(m[rank][col], p));
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r != rank && m[r][col] != 0) m[r] = m[r].axpy(gf::neg(m[r][col], p), m[rank]);
    }
    ++rank;
  }
  m.resize(rank);

  SubspaceBasis out;
  out.p_ = p;
  out.dim_ = dim;
  out.rows_ = std::move(m);
  return out;
}

SubspaceBasis rref(std::span<const Vector> rows) {
  if (rows.empty()) throw StructuralError("rref: cannot infer ambient space from an empty row list");
  return rref(rows.front().modulus(), rows.front().size(), rows);
}

namespace {
void check_same_ambient(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.modulus() != b.modulus()) {
    throw StructuralError("subspaces live in different ambient spaces");
  }
}
}  // namespace

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b) {
  check_same_ambient(a, b);
  const unsigned p = a.modulus();
  const std::size_t d = a.ambient_dim();
  if (2 * d > kMaxAmbientDim) {
    // Zassenhaus needs doubled width; fall back to the annihilator route.
    // a ∩ b = ann(ann(a) + ann(b))
    const auto ann_a = annihilator(p, d, a.rows());
    const auto ann_b = annihilator(p, d, b.rows());
    const auto both = sum_span(ann_a, ann_b);
    return annihilator(p, d, both.rows());
  }
  // Zassenhaus: rows [u | u] for u in a and [w | 0] for w in b; the rows of the
  // echelon form with zero left half carry a basis of a ∩ b on the right.
  std::vector<Vector> block;
  block.reserve(a.rank() + b.rank());
  for (const auto& u : a.rows()) {
    Vector r(p, 2 * d);
    for (std::size_t i = 0; i < d; ++i) {
      r.set(i, u[i]);
      r.set(d + i, u[i]);
    }
    block.push_back(r);
  }
  for (const auto& w : b.rows()) {
    Vector r(p, 2 * d);
    for (std::size_t i = 0; i < d; ++i) r.set(i, w[i]);
    block.push_back(r);
  }
  const auto reduced = rref(p, 2 * d, block);
  std::vector<Vector> meet;
  for (const auto& r : reduced.rows()) {
    if (r.leading_index() < d) continue;
    Vector v(p, d);
    for (std::size_t i = 0; i < d; ++i) v.set(i, r[d + i]);
    meet.push_back(v);
  }
  return rref(p, d, meet);
}

SubspaceBasis sum_span(const SubspaceBasis& a, const SubspaceBasis& b) {
  check_same_ambient(a, b);
  std::vector<Vector> rows(a.rows());
  rows.insert(rows.end(), b.rows().begin(), b.rows().end());
  return rref(a.modulus(), a.ambient_dim(), rows);
}

SubspaceBasis sum_span(std::span<const SubspaceBasis> parts, unsigned p, std::size_t dim) {
  std::vector<Vector> rows;
  for (const auto& s : parts) {
    if (s.modulus() != p || s.ambient_dim() != dim) throw StructuralError("sum_span: ambient mismatch");
    rows.insert(rows.end(), s.rows().begin(), s.rows().end());
  }
  return rref(p, dim, rows);
}

bool contains(const SubspaceBasis& a, const Vector& v) {
  if (v.size() != a.ambient_dim() || v.modulus() != a.modulus()) {
    throw StructuralError("contains: vector outside the ambient space");
  }
  const unsigned p = a.modulus();
  Vector rest = v;
  for (const auto& row : a.rows()) {
    const std::size_t col = row.leading_index();
    if (rest[col] != 0) rest = rest.axpy(gf::neg(rest[col], p), row);
  }
  return rest.is_zero();
}

bool is_subspace_of(const SubspaceBasis& a, const SubspaceBasis& b) {
  check_same_ambient(a, b);
  if (a.rank() > b.rank()) return false;
  return std::all_of(a.rows().begin(), a.rows().end(), [&](const Vector& r) { return contains(b, r); });
}

SubspaceBasis annihilator(unsigned p, std::size_t dim, std::span<const Vector> functionals) {
  const auto reduced = rref(p, dim, functionals);
  const auto pivots = reduced.pivots();
  std::vector<bool> is_pivot(dim, false);
  for (auto c : pivots) is_pivot[c] = true;

  // Free column j gives the kernel vector x_j = 1, x_pivot(r) = -reduced[r][j].
  std::vector<Vector> kernel;
  for (std::size_t j = 0; j < dim; ++j) {
    if (is_pivot[j]) continue;
    Vector v(p, dim);
    v.set(j, 1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v.set(pivots[r], gf::neg(reduced.rows()[r][j], p));
    kernel.push_back(v);
  }
  return rref(p, dim, kernel);
}

std::vector<Vector> points_of(const SubspaceBasis& s) {
  // RREF rows: a combination whose first nonzero coefficient is 1 is already
  // normalized, since that row's pivot is the first nonzero coordinate.
  const unsigned p = s.modulus();
  const std::size_t r = s.rank();
  std::vector<Vector> out;
  for (std::size_t lead = 0; lead < r; ++lead) {
    const std::size_t tail = r - lead - 1;
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < tail; ++i) combos *= p;
    for (std::uint64_t c = 0; c < combos; ++c) {
      Vector v = s.rows()[lead];
      std::uint64_t rest = c;
      for (std::size_t i = 0; i < tail; ++i) {
        const auto coeff = static_cast<std::uint8_t>(rest % p);
        rest /= p;
        if (coeff) v = v.axpy(coeff, s.rows()[lead + 1 + i]);
      }
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace dualpolar
