#include "dualpolar/polar_space.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "dualpolar/errors.hpp"

namespace dualpolar {

ProjectivePoint::ProjectivePoint(const Vector& v) : rep_(v.normalized()) {
  if (v.is_zero()) throw ContractViolation("the zero vector is not a projective point");
}

SubspaceBasis ProjectivePoint::as_subspace() const {
  const Vector rows[] = {rep_};
  return rref(rows);
}

SingularSubspace::SingularSubspace(const PolarSpace& space, SubspaceBasis basis) : basis_(std::move(basis)) {
  if (basis_.ambient_dim() != space.ambient_dim() || basis_.modulus() != space.p()) {
    throw StructuralError("singular subspace outside the ambient space");
  }
  if (!space.is_totally_isotropic(basis_)) {
    throw ContractViolation("subspace " + basis_.to_string() + " is not totally isotropic");
  }
}

GramMatrix standard_gram(unsigned p, int rank) {
  const auto d = static_cast<std::size_t>(2 * rank);
  GramMatrix g(d, std::vector<std::uint8_t>(d, 0));
  for (int i = 0; i < rank; ++i) {
    const auto e = static_cast<std::size_t>(2 * i);
    g[e][e + 1] = 1;
    g[e + 1][e] = gf::neg(1, p);
  }
  return g;
}

PolarSpace::PolarSpace(unsigned p, int rank) : PolarSpace(p, rank, standard_gram(p, rank), true) {}

PolarSpace PolarSpace::with_gram_unchecked(unsigned p, int rank, GramMatrix gram) {
  return PolarSpace(p, rank, std::move(gram), false);
}

PolarSpace::PolarSpace(unsigned p, int rank, GramMatrix gram, bool validate)
    : p_(p), rank_(rank), gram_(std::move(gram)) {
  if (!is_prime(p)) throw ContractViolation("field order must be prime, got " + std::to_string(p));
  if (rank < 1 || 2 * static_cast<std::size_t>(rank) > kMaxAmbientDim) {
    throw ContractViolation("unsupported polar rank " + std::to_string(rank));
  }
  const std::size_t d = ambient_dim();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= p;
  if (total > (std::uint64_t{1} << 22)) {
    throw ContractViolation("ambient space GF(" + std::to_string(p) + ")^" + std::to_string(d) + " too large");
  }
  if (gram_.size() != d) throw StructuralError("gram matrix has wrong size");
  for (auto& row : gram_) {
    if (row.size() != d) throw StructuralError("gram matrix has wrong size");
    for (auto& x : row) x = static_cast<std::uint8_t>(x % p);
  }
  if (validate) {
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < d; ++i) {
      Vector r(p, d);
      for (std::size_t j = 0; j < d; ++j) {
        if (gram_[i][j] != gf::neg(gram_[j][i], p)) throw InvariantViolation("gram matrix is not antisymmetric");
        r.set(j, gram_[i][j]);
      }
      if (gram_[i][i] != 0) throw InvariantViolation("gram matrix has nonzero diagonal");
      rows.push_back(r);
    }
    if (rref(p, d, rows).rank() != d) throw InvariantViolation("gram matrix is degenerate");
  }

  // Normalized vectors in lexicographic order: codes ascend with lex order, so
  // walking all codes in order and keeping normalized ones sorts for free.
  for (std::uint64_t code = 1; code < total; ++code) {
    Vector v(p, d);
    std::uint64_t rest = code;
    for (std::size_t i = d; i-- > 0;) {
      v.set(i, static_cast<std::uint8_t>(rest % p));
      rest /= p;
    }
    if (v[v.leading_index()] != 1) continue;
    index_.emplace(code, points_.size());
    points_.emplace_back(v);
  }

  const std::size_t n_pts = points_.size();
  collinear_.assign(n_pts, boost::dynamic_bitset<>(n_pts));
  for (std::size_t a = 0; a < n_pts; ++a) {
    for (std::size_t b = a + 1; b < n_pts; ++b) {
      if (form_value(points_[a].rep(), points_[b].rep()).value == 0) {
        collinear_[a].set(b);
        collinear_[b].set(a);
      }
    }
  }

  if (validate) {
    // Maximal totally isotropic subspaces must have rank n: grow one greedily.
    std::vector<Vector> rows;
    SubspaceBasis cur = SubspaceBasis::zero(p, d);
    while (true) {
      const auto perp = perp_subspace(*this, cur);
      std::optional<Vector> extra;
      for (const auto& v : points_of(perp)) {
        if (!contains(cur, v)) {
          extra = v;
          break;
        }
      }
      if (!extra) break;
      rows.push_back(*extra);
      cur = rref(p, d, rows);
    }
    if (cur.rank() != static_cast<std::size_t>(rank)) throw InvariantViolation("maximal isotropic rank differs from n");
  }
}

FieldScalar PolarSpace::form_value(const Vector& u, const Vector& v) const {
  const std::size_t d = ambient_dim();
  if (u.size() != d || v.size() != d) throw StructuralError("form_value: vector length mismatch");
  unsigned acc = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) acc += unsigned{u[i]} * gram_[i][j] * v[j];
  }
  return FieldScalar{static_cast<std::uint8_t>(acc % p_), static_cast<std::uint8_t>(p_)};
}

bool PolarSpace::is_totally_isotropic(const SubspaceBasis& s) const {
  const auto& rows = s.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i; j < rows.size(); ++j) {
      if (form_value(rows[i], rows[j]).value != 0) return false;
    }
  }
  return true;
}

std::size_t PolarSpace::point_index(const Vector& v) const {
  if (v.size() != ambient_dim() || v.modulus() != p_) throw StructuralError("point outside the ambient space");
  if (v.is_zero()) throw ContractViolation("the zero vector is not a point");
  return index_.at(v.normalized().code());
}

std::vector<std::size_t> PolarSpace::point_ids(const SubspaceBasis& s) const {
  std::vector<std::size_t> ids;
  for (const auto& v : points_of(s)) ids.push_back(point_index(v));
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool is_collinear(const PolarSpace& space, const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a == b) throw ContractViolation("collinearity is defined for distinct points");
  return space.form_value(a.rep(), b.rep()).value == 0;
}

std::vector<ProjectivePoint> enumerate_points(const PolarSpace& space) { return space.points(); }

std::uint64_t maximal_subspace_count(unsigned p, int rank) {
  std::uint64_t count = 1;
  std::uint64_t pi = 1;
  for (int i = 1; i <= rank; ++i) {
    pi *= p;
    count *= pi + 1;
  }
  return count;
}

SubspaceBasis perp_subspace(const PolarSpace& space, const SubspaceBasis& x) {
  const unsigned p = space.p();
  const std::size_t d = space.ambient_dim();
  // form(v, x) = sum_i v_i (G x^T)_i, so each row x contributes the functional G x^T.
  std::vector<Vector> functionals;
  for (const auto& row : x.rows()) {
    Vector f(p, d);
    for (std::size_t i = 0; i < d; ++i) {
      unsigned acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += unsigned{space.gram()[i][j]} * row[j];
      f.set(i, static_cast<std::uint8_t>(acc % p));
    }
    functionals.push_back(f);
  }
  return annihilator(p, d, functionals);
}

SingularSubspace zero_subspace(const PolarSpace& space) {
  return SingularSubspace(space, SubspaceBasis::zero(space.p(), space.ambient_dim()));
}

SingularSubspace span_points(const PolarSpace& space, std::span<const ProjectivePoint> pts) {
  std::vector<Vector> rows;
  for (const auto& pt : pts) rows.push_back(pt.rep());
  return SingularSubspace(space, rref(space.p(), space.ambient_dim(), rows));
}

std::vector<SingularSubspace> star(const PolarSpace& space, const SingularSubspace& m, int k) {
  if (k <= m.projdim() || k > space.rank() - 1) {
    throw ContractViolation("star: need projdim(M) < k <= n-1, got projdim(M)=" + std::to_string(m.projdim()) +
                            " k=" + std::to_string(k));
  }
  if (space.ambient_dim() != m.basis().ambient_dim()) throw StructuralError("star: M outside the space");
  const unsigned p = space.p();
  const std::size_t d = space.ambient_dim();

  std::set<SubspaceBasis> layer{m.basis()};
  for (int dim = m.projdim(); dim < k; ++dim) {
    std::set<SubspaceBasis> next;
    for (const auto& s : layer) {
      const auto perp = perp_subspace(space, s);
      std::vector<Vector> rows = s.rows();
      rows.emplace_back();
      for (const auto& v : points_of(perp)) {
        if (contains(s, v)) continue;
        rows.back() = v;
        next.insert(rref(p, d, rows));
      }
    }
    layer = std::move(next);
  }

  std::vector<SingularSubspace> out;
  out.reserve(layer.size());
  for (const auto& b : layer) out.emplace_back(space, b);
  return out;
}

std::vector<SingularSubspace> enumerate_singular(const PolarSpace& space, int k) {
  if (k < 0 || k > space.rank() - 1) {
    throw ContractViolation("enumerate_singular: k must lie in [0, n-1], got " + std::to_string(k));
  }
  return star(space, zero_subspace(space), k);
}

bool residue_collinear(const PolarSpace& space, const SingularSubspace& m, const SingularSubspace& a,
                       const SingularSubspace& b) {
  const int level = m.projdim() + 1;
  if (a == b) throw ContractViolation("residue_collinear: A and B must differ");
  if (a.projdim() != level || b.projdim() != level) {
    throw ContractViolation("residue_collinear: A and B must have projective dimension projdim(M)+1");
  }
  if (!is_subspace_of(m.basis(), a.basis()) || !is_subspace_of(m.basis(), b.basis())) {
    throw ContractViolation("residue_collinear: A and B must contain M");
  }
  const auto joined = sum_span(a.basis(), b.basis());
  return projective_dim(joined) == level + 1 && space.is_totally_isotropic(joined);
}

// --- Frames ---

std::optional<Frame> is_frame(const PolarSpace& space, std::span<const ProjectivePoint> points) {
  const std::size_t count = space.ambient_dim();
  if (points.size() != count) {
    throw ContractViolation("is_frame: expected " + std::to_string(count) + " points, got " +
                            std::to_string(points.size()));
  }
  std::vector<ProjectivePoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ContractViolation("is_frame: points must be distinct");
  }
  Frame frame;
  frame.sigma.assign(count, -1);
  for (std::size_t i = 0; i < count; ++i) {
    int partner = -1;
    for (std::size_t j = 0; j < count; ++j) {
      if (i == j || is_collinear(space, sorted[i], sorted[j])) continue;
      if (partner != -1) return std::nullopt;
      partner = static_cast<int>(j);
    }
    if (partner == -1) return std::nullopt;
    frame.sigma[i] = partner;
  }
  frame.points = std::move(sorted);
  return frame;
}

Frame standard_frame(const PolarSpace& space) {
  std::vector<ProjectivePoint> pts;
  for (std::size_t i = 0; i < space.ambient_dim(); ++i) {
    pts.emplace_back(Vector::unit(space.p(), space.ambient_dim(), i));
  }
  auto frame = is_frame(space, pts);
  if (!frame) throw InvariantViolation("standard basis is not a frame");
  return *frame;
}

std::vector<std::pair<int, int>> frame_pairs(const Frame& frame) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < static_cast<int>(frame.sigma.size()); ++i) {
    if (i < frame.sigma[static_cast<std::size_t>(i)]) pairs.emplace_back(i, frame.sigma[static_cast<std::size_t>(i)]);
  }
  return pairs;
}

std::vector<SingularSubspace> apartment_of_frame(const PolarSpace& space, const Frame& frame) {
  const auto pairs = frame_pairs(frame);
  const std::size_t n = pairs.size();
  std::vector<SingularSubspace> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<Vector> rows;
    for (std::size_t j = 0; j < n; ++j) {
      const int pick = (mask >> j) & 1u ? pairs[j].first : pairs[j].second;
      rows.push_back(frame.points[static_cast<std::size_t>(pick)].rep());
    }
    auto basis = rref(space.p(), space.ambient_dim(), rows);
    if (basis.rank() != n || !space.is_totally_isotropic(basis)) {
      throw InvariantViolation("frame transversal does not span a maximal singular subspace");
    }
    out.emplace_back(space, std::move(basis));
  }
  return out;
}

namespace {

Frame frame_from_ids(const PolarSpace& space, const std::vector<std::size_t>& ids) {
  std::vector<ProjectivePoint> pts;
  for (auto id : ids) pts.push_back(space.points()[id]);
  auto frame = is_frame(space, pts);
  if (!frame) throw InvariantViolation("frame search produced a non-frame");
  return *frame;
}

struct FrameSearch {
  const PolarSpace& space;
  std::uint64_t budget;
  FrameEnumeration result;
  std::vector<std::size_t> chosen;
  bool stop = false;

  void run(const boost::dynamic_bitset<>& avail, int level) {
    const int n = space.rank();
    if (level == n) {
      auto ids = chosen;
      std::sort(ids.begin(), ids.end());
      result.frames.push_back(frame_from_ids(space, ids));
      return;
    }
    if (avail.count() < static_cast<std::size_t>(2 * (n - level))) return;
    for (auto a = avail.find_first(); a != boost::dynamic_bitset<>::npos; a = avail.find_next(a)) {
      auto partners = avail - space.collinear_with(a);
      for (auto b = partners.find_next(a); b != boost::dynamic_bitset<>::npos; b = partners.find_next(b)) {
        if (++result.nodes > budget) {
          result.complete = false;
          stop = true;
          return;
        }
        auto next = avail & space.collinear_with(a) & space.collinear_with(b);
        for (auto c = next.find_first(); c != boost::dynamic_bitset<>::npos && c <= a; c = next.find_next(c)) {
          next.reset(c);
        }
        chosen.push_back(a);
        chosen.push_back(b);
        run(next, level + 1);
        chosen.resize(chosen.size() - 2);
        if (stop) return;
      }
    }
  }
};

}  // namespace

FrameEnumeration enumerate_frames(const PolarSpace& space, std::uint64_t budget) {
  if (budget == 0) throw ContractViolation("enumerate_frames: budget must be positive");
  // Pairs are generated with increasing minimal elements and every later point
  // larger than the current pair's minimum, so each frame appears once.
  FrameSearch search{space, budget, {}, {}, false};
  boost::dynamic_bitset<> all(space.point_count());
  all.set();
  search.run(all, 0);
  std::sort(search.result.frames.begin(), search.result.frames.end(),
            [](const Frame& a, const Frame& b) { return a.points < b.points; });
  return std::move(search.result);
}

Frame random_frame(const PolarSpace& space, std::mt19937_64& rng) {
  auto pick = [&](const boost::dynamic_bitset<>& set) {
    std::vector<std::size_t> ids;
    for (auto i = set.find_first(); i != boost::dynamic_bitset<>::npos; i = set.find_next(i)) ids.push_back(i);
    if (ids.empty()) throw InvariantViolation("random_frame: ran out of candidates (degenerate form?)");
    return ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
  };
  boost::dynamic_bitset<> avail(space.point_count());
  avail.set();
  std::vector<std::size_t> ids;
  for (int level = 0; level < space.rank(); ++level) {
    const auto a = pick(avail);
    auto partners = avail - space.collinear_with(a);
    partners.reset(a);
    const auto b = pick(partners);
    ids.push_back(a);
    ids.push_back(b);
    avail &= space.collinear_with(a) & space.collinear_with(b);
  }
  std::sort(ids.begin(), ids.end());
  return frame_from_ids(space, ids);
}

// --- Axioms ---

bool AxiomReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

IncidenceGeometry point_line_geometry(const PolarSpace& space) {
  IncidenceGeometry g;
  g.point_count = space.point_count();
  if (space.rank() < 2) return g;
  for (const auto& line : enumerate_singular(space, 1)) g.lines.push_back(space.point_ids(line.basis()));
  return g;
}

IncidenceGeometry residue_geometry(const PolarSpace& space, const SingularSubspace& m) {
  const int level = m.projdim() + 1;
  IncidenceGeometry g;
  const auto pts = star(space, m, level);
  g.point_count = pts.size();
  if (level + 1 > space.rank() - 1) return g;
  for (const auto& n : star(space, m, level + 1)) {
    std::vector<std::size_t> line;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (is_subspace_of(pts[i].basis(), n.basis())) line.push_back(i);
    }
    g.lines.push_back(std::move(line));
  }
  return g;
}

AxiomReport check_polar_axioms(const IncidenceGeometry& geometry) {
  const std::size_t np = geometry.point_count;
  AxiomReport report;
  report.point_count = np;
  report.line_count = geometry.lines.size();
  report.min_line_size = geometry.lines.empty() ? 0 : SIZE_MAX;

  std::vector<boost::dynamic_bitset<>> collinear(np, boost::dynamic_bitset<>(np));
  std::vector<std::uint8_t> shared(np * np, 0);
  std::vector<bool> on_line(np, false);

  AxiomCheck linear{"partial linear space", true, ""};
  for (std::size_t li = 0; li < geometry.lines.size(); ++li) {
    const auto& line = geometry.lines[li];
    report.min_line_size = std::min(report.min_line_size, line.size());
    report.max_line_size = std::max(report.max_line_size, line.size());
    if (line.size() < 2 && linear.passed) {
      linear = {linear.name, false, "line " + std::to_string(li) + " has fewer than two points"};
    }
    for (std::size_t x = 0; x < line.size(); ++x) {
      on_line[line[x]] = true;
      for (std::size_t y = x + 1; y < line.size(); ++y) {
        const auto a = line[x], b = line[y];
        collinear[a].set(b);
        collinear[b].set(a);
        auto& c = shared[std::min(a, b) * np + std::max(a, b)];
        if (++c > 1 && linear.passed) {
          linear = {linear.name, false,
                    "points " + std::to_string(a) + "," + std::to_string(b) + " lie on two lines"};
        }
      }
    }
  }
  for (std::size_t pnt = 0; pnt < np && linear.passed; ++pnt) {
    if (!on_line[pnt]) linear = {linear.name, false, "point " + std::to_string(pnt) + " is on no line"};
  }
  report.checks.push_back(linear);

  AxiomCheck thick{"each line contains at least three points", true, ""};
  for (std::size_t li = 0; li < geometry.lines.size(); ++li) {
    if (geometry.lines[li].size() < 3) {
      thick = {thick.name, false, "line " + std::to_string(li) + " has " + std::to_string(geometry.lines[li].size()) +
                                      " points"};
      break;
    }
  }
  report.checks.push_back(thick);

  AxiomCheck radical{"no point collinear with all points", true, ""};
  for (std::size_t pnt = 0; pnt < np; ++pnt) {
    if (collinear[pnt].count() == np - 1) {
      radical = {radical.name, false, "point " + std::to_string(pnt) + " is collinear with all points"};
      break;
    }
  }
  report.checks.push_back(radical);

  AxiomCheck one_or_all{"point collinear with one or all points of a line", true, ""};
  for (std::size_t pnt = 0; pnt < np && one_or_all.passed; ++pnt) {
    for (std::size_t li = 0; li < geometry.lines.size(); ++li) {
      const auto& line = geometry.lines[li];
      const auto hits = std::count_if(line.begin(), line.end(),
                                      [&](std::size_t q) { return q == pnt || collinear[pnt].test(q); });
      if (hits != 1 && hits != static_cast<long>(line.size())) {
        one_or_all = {one_or_all.name, false,
                      "point " + std::to_string(pnt) + " sees " + std::to_string(hits) + " of " +
                          std::to_string(line.size()) + " points on line " + std::to_string(li)};
        break;
      }
    }
  }
  report.checks.push_back(one_or_all);

  // Finitely many points, so every chain of singular subspaces is finite.
  report.checks.push_back({"flags of singular subspaces are finite", np > 0, np > 0 ? "" : "no points"});
  return report;
}

AxiomReport check_polar_axioms(const PolarSpace& space) { return check_polar_axioms(point_line_geometry(space)); }

}  // namespace dualpolar
