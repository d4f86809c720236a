#include <gtest/gtest.h>

#include <set>

#include "dualpolar/errors.hpp"
#include "dualpolar/polar_space.hpp"
#include "oracles.hpp"

using namespace dualpolar;

namespace {

std::uint64_t pow_u(unsigned p, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= p;
  return r;
}

/// Orthogonal ordered pairs of distinct points, by direct evaluation.
std::uint64_t orthogonal_pairs(unsigned p, int n) {
  const auto pts = oracle::projective_points(p, static_cast<std::size_t>(2 * n));
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) count += i != j && oracle::symplectic(pts[i], pts[j], p) == 0;
  }
  return count;
}

}  // namespace

TEST(PolarSpace, PointCountsMatchClosedForm) {
  for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}, {3, 3}, {2, 4}}) {
    PolarSpace s(p, n);
    EXPECT_EQ(s.point_count(), (pow_u(p, 2 * n) - 1) / (p - 1)) << p << "," << n;
    EXPECT_EQ(s.point_count(), oracle::projective_points(p, s.ambient_dim()).size());
    for (std::size_t i = 0; i < s.point_count(); ++i) EXPECT_EQ(s.point_index(s.points()[i]), i);
  }
}

TEST(PolarSpace, MaximalSubspaceCounts) {
  for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}, {3, 3}}) {
    PolarSpace s(p, n);
    std::uint64_t closed = 1;
    for (int i = 1; i <= n; ++i) closed *= pow_u(p, i) + 1;
    EXPECT_EQ(maximal_subspace_count(p, n), closed);
    EXPECT_EQ(enumerate_singular(s, n - 1).size(), closed);
  }
}

TEST(PolarSpace, IsotropicLinesCountedFromOrthogonalPairs) {
  // A totally isotropic line holds (p+1) points and (p+1)p ordered pairs.
  for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {2, 3}, {3, 2}}) {
    PolarSpace s(p, n);
    EXPECT_EQ(enumerate_singular(s, 1).size() * (p + 1) * p, orthogonal_pairs(p, n));
  }
}

TEST(PolarSpace, Sp62SingularCountsByDimension) {
  PolarSpace s(2, 3);
  EXPECT_EQ(enumerate_singular(s, 0).size(), 63u);
  EXPECT_EQ(enumerate_singular(s, 1).size(), 315u);
  EXPECT_EQ(enumerate_singular(s, 2).size(), 135u);
  const auto pt = SingularSubspace(s, s.points()[0].as_subspace());
  EXPECT_EQ(star(s, pt, 2).size(), 15u);  // residue of a point is Sp(4,2)
  EXPECT_EQ(star(s, pt, 1).size(), 15u);
}

TEST(PolarSpace, CollinearityWithinSp42) {
  PolarSpace s(2, 2);
  for (std::size_t i = 0; i < s.point_count(); ++i) {
    EXPECT_EQ(s.collinear_with(i).count(), 6u);
    EXPECT_EQ(s.point_count() - 1 - s.collinear_with(i).count(), 8u);
    for (std::size_t j = 0; j < s.point_count(); ++j) {
      if (i == j) continue;
      const bool expected = oracle::symplectic(s.points()[i].rep().to_ints(), s.points()[j].rep().to_ints(), 2) == 0;
      EXPECT_EQ(is_collinear(s, s.points()[i], s.points()[j]), expected);
    }
  }
  EXPECT_THROW(is_collinear(s, s.points()[0], s.points()[0]), ContractViolation);
}

TEST(PolarSpace, RejectsBadInput) {
  EXPECT_THROW(PolarSpace(4, 2), ContractViolation);
  EXPECT_THROW(ProjectivePoint(Vector(2, 4)), ContractViolation);
  PolarSpace s(3, 2);
  const auto hyperbolic = rref(3, 4, std::vector<Vector>{Vector(3, {1, 0, 0, 0}), Vector(3, {0, 1, 0, 0})});
  EXPECT_THROW(SingularSubspace(s, hyperbolic), ContractViolation);
  EXPECT_THROW(star(s, zero_subspace(s), 2), ContractViolation);
}

TEST(PolarSpace, PerpAndResidue) {
  PolarSpace s(3, 3);
  const auto pt = SingularSubspace(s, s.points()[5].as_subspace());
  EXPECT_EQ(perp_subspace(s, pt).rank(), 5u);
  EXPECT_TRUE(is_subspace_of(pt.basis(), perp_subspace(s, pt)));
  const auto lines = star(s, pt, 1);
  // Two lines through the point are residue-collinear iff they span a plane.
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = i + 1; j < 10; ++j) {
      const auto span = sum_span(lines[i].basis(), lines[j].basis());
      EXPECT_EQ(residue_collinear(s, pt, lines[i], lines[j]), s.is_totally_isotropic(span));
    }
  }
}

TEST(Frames, EnumerationMatchesQuadrupleScan) {
  for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {3, 2}}) {
    PolarSpace s(p, n);
    const auto frames = enumerate_frames(s, 10'000'000);
    ASSERT_TRUE(frames.complete);
    EXPECT_EQ(frames.frames.size(), oracle::frame_count_by_scan(p, n));
    std::set<std::vector<ProjectivePoint>> distinct;
    for (const auto& f : frames.frames) {
      distinct.insert(f.points);
      EXPECT_TRUE(is_frame(s, f.points).has_value());
    }
    EXPECT_EQ(distinct.size(), frames.frames.size());
  }
  EXPECT_EQ(enumerate_frames(PolarSpace(2, 2), 10'000'000).frames.size(), 90u);
  EXPECT_EQ(enumerate_frames(PolarSpace(2, 3), 10'000'000).frames.size(), 30240u);
}

TEST(Frames, BudgetCutsEnumerationShort) {
  const auto partial = enumerate_frames(PolarSpace(2, 3), 50);
  EXPECT_FALSE(partial.complete);
  EXPECT_LT(partial.frames.size(), 30240u);
}

TEST(Frames, StandardFrameAndApartment) {
  PolarSpace s(3, 3);
  const auto f = standard_frame(s);
  ASSERT_EQ(f.points.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto j = static_cast<std::size_t>(f.sigma[i]);
    EXPECT_NE(i, j);
    EXPECT_EQ(static_cast<std::size_t>(f.sigma[j]), i);
    EXPECT_FALSE(is_collinear(s, f.points[i], f.points[j]));
  }
  EXPECT_EQ(frame_pairs(f).size(), 3u);
  const auto apt = apartment_of_frame(s, f);
  ASSERT_EQ(apt.size(), 8u);
  std::set<SingularSubspace> distinct(apt.begin(), apt.end());
  EXPECT_EQ(distinct.size(), 8u);
  for (std::size_t a = 0; a < 8; ++a) {
    EXPECT_EQ(apt[a].projdim(), 2);
    for (std::size_t b = 0; b < 8; ++b) {
      // dim(S ∩ U) + 1 equals the number of agreeing pair choices.
      EXPECT_EQ(intersect(apt[a].basis(), apt[b].basis()).rank(),
                static_cast<std::size_t>(3 - oracle::hamming(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b))));
    }
  }
}

TEST(Frames, NonFramesRejected) {
  PolarSpace s(2, 2);
  // Four points on two isotropic lines through e1: everything collinear with e1.
  std::vector<ProjectivePoint> pts;
  for (std::size_t i = 0; pts.size() < 4 && i < s.point_count(); ++i) {
    if (i == 0 || s.collinear_with(0).test(i)) pts.push_back(s.points()[i]);
  }
  EXPECT_FALSE(is_frame(s, pts).has_value());
  EXPECT_THROW(is_frame(s, std::vector<ProjectivePoint>(pts.begin(), pts.begin() + 3)), ContractViolation);
}

TEST(Frames, RandomFramesAreSeeded) {
  PolarSpace s(5, 2);
  std::mt19937_64 a(9), b(9);
  for (int i = 0; i < 20; ++i) {
    const auto fa = random_frame(s, a);
    EXPECT_EQ(fa, random_frame(s, b));
    EXPECT_TRUE(is_frame(s, fa.points).has_value());
  }
}

TEST(Axioms, HoldForSymplecticSpaces) {
  for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {3, 2}, {2, 3}}) {
    const auto report = check_polar_axioms(PolarSpace(p, n));
    EXPECT_TRUE(report.all_passed());
    EXPECT_EQ(report.min_line_size, p + 1);
    EXPECT_EQ(report.max_line_size, p + 1);
  }
  PolarSpace s(2, 3);
  const auto residue = residue_geometry(s, SingularSubspace(s, s.points()[0].as_subspace()));
  EXPECT_EQ(residue.point_count, 15u);
  EXPECT_TRUE(check_polar_axioms(residue).all_passed());
}

TEST(Axioms, DegenerateFormFails) {
  // Drop the second hyperbolic pair: e2 and f2 become radical points.
  auto gram = standard_gram(2, 2);
  gram[2][3] = gram[3][2] = 0;
  const auto degenerate = PolarSpace::with_gram_unchecked(2, 2, gram);
  const auto report = check_polar_axioms(degenerate);
  EXPECT_FALSE(report.all_passed());
  bool radical_failed = false;
  for (const auto& c : report.checks) radical_failed |= c.name == "no point collinear with all points" && !c.passed;
  EXPECT_TRUE(radical_failed);
}

TEST(Axioms, AbstractGeometryViolations) {
  IncidenceGeometry g;
  g.point_count = 4;
  g.lines = {{0, 1}, {0, 1, 2}};
  const auto report = check_polar_axioms(g);
  EXPECT_FALSE(report.all_passed());
}
