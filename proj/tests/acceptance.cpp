// Acceptance suite: one PASS/FAIL line per criterion. Limits are wall-clock
// seconds on the build machine; seeds and budgets are fixed below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "dualpolar/apartments.hpp"
#include "dualpolar/morphisms.hpp"

using namespace dualpolar;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr std::uint64_t kNodeBudget = 10'000'000;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    } else if (!cond) {
      detail += "; " + what;
    }
  }
};

std::shared_ptr<const DenseGraph> dual(unsigned p, int n) {
  return std::make_shared<const DenseGraph>(dual_polar_graph(std::make_shared<const PolarSpace>(p, n)));
}

std::uint64_t ipow(unsigned p, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= p;
  return r;
}

std::string counts_string(const VerificationReport& r) {
  std::string s;
  for (const auto& [k, v] : r.counts) s += (s.empty() ? "" : " ") + k + "=" + std::to_string(v);
  return s;
}

void require_clean(Outcome& o, const VerificationReport& r, const std::string& label) {
  o.require(r.violation_count == 0, label + ": " + std::to_string(r.violation_count) + " violations" +
                                        (r.violations.empty() ? "" : " (" + r.violations.front() + ")"));
  o.require(r.complete, label + ": incomplete");
}

nlohmann::json cli_report(std::vector<std::string> args, int* code) {
  std::ostringstream out, err;
  *code = cli::run_cli(args, out, err);
  auto j = nlohmann::json::parse(out.str());
  j.erase("timestamp");
  j.erase("elapsed");
  j["config"].erase("workers");
  return j;
}

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_seconds) o.require(false, "time limit exceeded");
  if (!o.ok) ++failures;
  std::printf("%s %2d  %-44s %8.2f s (limit %5.0f s)  %s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), secs,
              limit_seconds, o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  criterion(1, "model sanity", 5, [] {
    Outcome o;
    for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {2, 3}, {3, 2}}) {
      PolarSpace s(p, n);
      std::uint64_t maximal = 1;
      for (int i = 1; i <= n; ++i) maximal *= ipow(p, i) + 1;
      const auto pts = (ipow(p, 2 * n) - 1) / (p - 1);
      const auto found = enumerate_singular(s, n - 1).size();
      const std::string tag = "Sp(" + std::to_string(2 * n) + "," + std::to_string(p) + ")";
      o.require(s.point_count() == pts, tag + " points " + std::to_string(s.point_count()));
      o.require(found == maximal, tag + " maximal " + std::to_string(found));
      o.detail += (o.detail.empty() ? "" : ", ") + tag + ": " + std::to_string(s.point_count()) + "/" + std::to_string(found);
    }
    return o;
  });

  criterion(2, "distance formula", 30, [] {
    Outcome o;
    for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {2, 3}, {3, 2}}) {
      const auto r = verify_distance_formula(*dual(p, n));
      require_clean(o, r, "p=" + std::to_string(p) + " n=" + std::to_string(n));
      if (o.ok) o.detail += (o.detail.empty() ? "pairs " : "+") + std::to_string(r.counts.at("pairs"));
    }
    return o;
  });

  criterion(3, "polar axioms", 60, [] {
    Outcome o;
    require_clean(o, verify_axioms(PolarSpace(2, 2), false), "Sp(4,2)");
    require_clean(o, verify_axioms(PolarSpace(3, 2), false), "Sp(4,3)");
    const auto r = verify_axioms(PolarSpace(2, 3), true);
    require_clean(o, r, "Sp(6,2) with point residue");
    o.require(r.counts.count("residue_points") && r.counts.at("residue_points") == 15, "point residue not checked");
    return o;
  });

  criterion(4, "geodesic endpoints' intersection", 60, [] {
    Outcome o;
    const auto ex = verify_lemma1(*dual(2, 2), SearchMode::Exhaustive, kNodeBudget, kSeed);
    require_clean(o, ex, "Sp(4,2) exhaustive");
    const auto sm = verify_lemma1(*dual(2, 3), SearchMode::Sample, 10'000, kSeed);
    require_clean(o, sm, "Sp(6,2) sampled");
    o.require(sm.counts.at("geodesics") >= 10'000, "fewer than 10^4 sampled geodesics");
    if (o.ok) o.detail = "exhaustive " + std::to_string(ex.counts.at("geodesics")) + ", sampled " +
                         std::to_string(sm.counts.at("geodesics"));
    return o;
  });

  criterion(5, "hypercube opposites and geodesics", 60, [] {
    Outcome o;
    for (int m = 1; m <= 8; ++m) require_clean(o, verify_lemma2(m, 6), "H_" + std::to_string(m));
    return o;
  });

  criterion(6, "H_2 in Sp(4,2), exhaustive", 120, [] {
    Outcome o;
    auto g = dual(2, 2);
    const auto r = verify_theorem2(g, 2, SearchOptions{});
    require_clean(o, r, "theorem2");
    const auto frames = enumerate_frames(*g->space(), kNodeBudget);
    o.require(frames.complete, "frame enumeration incomplete");
    o.require(r.counts.at("distinct_images") == static_cast<std::int64_t>(frames.frames.size()),
              "distinct images != frames");
    o.require(r.counts.at("apartments") == r.counts.at("distinct_images"), "some image is not an apartment");
    o.require(r.counts.at("embeddings") % 8 == 0, "embedding count not divisible by 8");
    o.detail += counts_string(r);
    return o;
  });

  criterion(7, "H_2 in Sp(6,2)", 300, [] {
    Outcome o;
    auto g = dual(2, 3);
    SearchOptions opts;
    opts.node_budget = kNodeBudget;
    opts.seed = kSeed;
    auto r = verify_theorem2(g, 2, opts);
    if (!r.complete) {
      opts.mode = SearchMode::Sample;
      opts.sample_target = 1000;
      r = verify_theorem2(g, 2, opts);
      o.require(r.counts.at("distinct_images") >= 1000, "fewer than 1000 sampled images");
    }
    require_clean(o, r, "theorem2 (" + r.mode + ")");
    o.require(r.counts.at("apartments") == r.counts.at("distinct_images"), "some image is not an apartment");
    o.detail += r.mode + " " + counts_string(r);
    return o;
  });

  criterion(8, "H_3 in Sp(6,2), sampled", 600, [] {
    Outcome o;
    SearchOptions opts;
    opts.mode = SearchMode::Sample;
    opts.sample_target = 1000;
    opts.seed = kSeed;
    const auto r = verify_theorem2(dual(2, 3), 3, opts);
    require_clean(o, r, "theorem2");
    o.require(r.counts.at("distinct_images") >= 1000, "fewer than 1000 distinct images");
    o.require(r.counts.at("apartments") == r.counts.at("distinct_images"), "some image is not an apartment");
    o.detail += counts_string(r);
    return o;
  });

  criterion(9, "no H_3 in Sp(4,2)", 60, [] {
    Outcome o;
    SearchOptions opts;
    opts.root = 7;
    const auto r = search_embeddings(std::make_shared<const DenseGraph>(hypercube(3)), dual(2, 2), opts);
    o.require(r.stats.complete, "search incomplete");
    o.require(r.embeddings.empty(), std::to_string(r.embeddings.size()) + " embeddings found");
    o.detail = "nodes=" + std::to_string(r.stats.nodes);
    return o;
  });

  criterion(10, "frame recovery round trip", 60, [] {
    Outcome o;
    auto check = [&o](const std::shared_ptr<const DenseGraph>& g, const std::vector<Frame>& frames) {
      for (std::size_t k = 0; k < frames.size(); ++k) {
        const auto w = is_apartment(g, apartment_of_frame(*g->space(), frames[k]));
        if (!w || w->base.projdim() != -1) {
          o.require(false, "frame #" + std::to_string(k) + " apartment not recognized");
          continue;
        }
        std::vector<ProjectivePoint> pts;
        for (const auto& q : w->residue_frame) pts.emplace_back(q.basis().rows().front());
        std::sort(pts.begin(), pts.end());
        o.require(pts == frames[k].points, "frame #" + std::to_string(k) + " not recovered");
      }
    };
    const auto g2 = dual(2, 2);
    const auto all = enumerate_frames(*g2->space(), kNodeBudget);
    o.require(all.complete, "Sp(4,2) frames incomplete");
    check(g2, all.frames);
    const auto g3 = dual(2, 3);
    std::mt19937_64 rng(kSeed);
    std::vector<Frame> sample;
    for (int i = 0; i < 100; ++i) sample.push_back(random_frame(*g3->space(), rng));
    check(g3, sample);
    o.detail += std::to_string(all.frames.size()) + " + " + std::to_string(sample.size()) + " frames";
    return o;
  });

  criterion(11, "Sp(4,2) -> Sp(6,2) lift and search", 300, [] {
    Outcome o;
    const auto src = dual(2, 2);
    const auto dst = dual(2, 3);
    const auto fixture = shifted_point_map(*src->space(), *dst->space());
    const auto lifted = lift_frame_preserving_map(src, dst, fixture.base, fixture.images);
    o.require(lifted.ok() && lifted.value->is_isometric(), "lift is not an isometric embedding");
    if (lifted.ok()) {
      const auto m = verify_lemma5(*lifted.value);
      o.require(m.ok() && *m.value == fixture.base, "defining point not extracted");
      const auto g = induced_point_map(*lifted.value);
      o.require(g.ok() && g.value->base == fixture.base && g.value->images == fixture.images, "(M, g) not recovered");
      const auto frames = enumerate_frames(*src->space(), kNodeBudget);
      if (g.ok()) {
        const auto fp = check_frames_preserving(*src->space(), *dst->space(), *g.value, frames.frames);
        o.require(fp.ok() && fp.frames_checked == 90, "frames not preserved");
      }
    }
    SearchOptions opts;
    opts.mode = SearchMode::Sample;
    opts.node_budget = kNodeBudget;
    opts.sample_target = 300;
    opts.seed = kSeed;
    const auto r = verify_morphisms("theorem3", src, dst, opts);
    require_clean(o, r, "sampled search");
    o.require(r.counts.at("embeddings") > 0, "no embeddings found");
    o.detail += counts_string(r);
    return o;
  });

  criterion(12, "Sp(4,2) automorphisms, exhaustive", 120, [] {
    Outcome o;
    const auto g = dual(2, 2);
    const auto r = verify_morphisms("chow", g, g, SearchOptions{});
    require_clean(o, r, "chow");
    o.require(r.counts.at("embeddings") > 0, "no embeddings found");
    o.detail += counts_string(r);
    return o;
  });

  criterion(13, "reports independent of worker count", 900, [] {
    Outcome o;
    const std::string seed = std::to_string(kSeed);
    const std::vector<std::vector<std::string>> runs{
        {"verify", "theorem2", "--p", "2", "--n", "3", "--m", "2", "--seed", seed},
        {"verify", "theorem2", "--p", "2", "--n", "3", "--m", "3", "--mode", "sample", "--target", "1000", "--seed",
         seed},
        {"verify", "theorem3", "--p", "2", "--n", "2", "--n-prime", "3", "--mode", "sample", "--target", "300",
         "--seed", seed},
    };
    for (const auto& base : runs) {
      nlohmann::json first;
      for (const char* workers : {"1", "2", "4"}) {
        auto args = base;
        args.insert(args.end(), {"--workers", workers});
        int code = 0;
        const auto j = cli_report(args, &code);
        o.require(code == 0, base[1] + " exit code " + std::to_string(code));
        if (first.is_null()) {
          first = j;
        } else {
          o.require(j == first, base[1] + " differs with --workers " + workers);
        }
      }
    }
    o.detail = "3 runs x workers {1,2,4}";
    return o;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
