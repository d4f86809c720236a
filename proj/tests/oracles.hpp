#pragma once

// Brute-force reference computations shared by the tests. Nothing here calls
// into the row-reduction code: spans are enumerated coefficient by
// coefficient and the form is evaluated directly on integer coordinates.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "dualpolar/field_linear.hpp"

namespace oracle {

using Coords = std::vector<int>;

inline std::uint64_t code(const Coords& v, unsigned p) {
  std::uint64_t c = 0;
  for (int x : v) c = c * p + static_cast<unsigned>(x);
  return c;
}

inline std::vector<Coords> all_vectors(unsigned p, std::size_t dim) {
  std::vector<Coords> out{Coords(dim, 0)};
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<Coords> next;
    for (const auto& v : out) {
      for (unsigned a = 0; a < p; ++a) {
        auto w = v;
        w[i] = static_cast<int>(a);
        next.push_back(w);
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Every linear combination of the rows, as codes.
inline std::set<std::uint64_t> span_codes(unsigned p, std::size_t dim, const std::vector<Coords>& rows) {
  std::set<std::uint64_t> out;
  for (const auto& coeffs : all_vectors(p, rows.size())) {
    Coords v(dim, 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t j = 0; j < dim; ++j) v[j] = (v[j] + coeffs[r] * rows[r][j]) % static_cast<int>(p);
    }
    out.insert(code(v, p));
  }
  return out;
}

inline Coords random_coords(std::mt19937_64& rng, unsigned p, std::size_t dim) {
  Coords v(dim);
  for (auto& x : v) x = static_cast<int>(rng() % p);
  return v;
}

inline int symplectic(const Coords& u, const Coords& v, unsigned p) {
  int s = 0;
  for (std::size_t i = 0; i + 1 < u.size(); i += 2) s += u[i] * v[i + 1] - u[i + 1] * v[i];
  const int q = static_cast<int>(p);
  return ((s % q) + q) % q;
}

/// Nonzero vectors whose first nonzero entry is 1.
inline std::vector<Coords> projective_points(unsigned p, std::size_t dim) {
  std::vector<Coords> out;
  for (const auto& v : all_vectors(p, dim)) {
    auto it = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
    if (it != v.end() && *it == 1) out.push_back(v);
  }
  return out;
}

/// Frames by scanning all 2n-subsets of points: each member has exactly one
/// non-orthogonal partner inside the subset.
inline std::size_t frame_count_by_scan(unsigned p, int n) {
  const auto pts = projective_points(p, static_cast<std::size_t>(2 * n));
  const std::size_t k = static_cast<std::size_t>(2 * n);
  std::size_t count = 0;
  std::vector<std::size_t> idx(k);
  auto check = [&] {
    for (std::size_t i = 0; i < k; ++i) {
      int partners = 0;
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j && symplectic(pts[idx[i]], pts[idx[j]], p) != 0) ++partners;
      }
      if (partners != 1) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t depth, std::size_t from) -> void {
    if (depth == k) {
      if (check()) ++count;
      return;
    }
    for (std::size_t i = from; i < pts.size(); ++i) {
      idx[depth] = i;
      // Prune: the new point may be non-orthogonal to at most one earlier one.
      int bad = 0;
      for (std::size_t j = 0; j < depth; ++j) bad += symplectic(pts[idx[j]], pts[i], p) != 0;
      if (bad > 1) continue;
      self(self, depth + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return count;
}

inline int hamming(std::uint32_t a, std::uint32_t b) { return __builtin_popcount(a ^ b); }

inline Coords to_coords(const dualpolar::Vector& v) { return v.to_ints(); }

}  // namespace oracle
