#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>

#include <CLI11.hpp>

#include "dualpolar/apartments.hpp"
#include "dualpolar/errors.hpp"
#include "dualpolar/export.hpp"
#include "dualpolar/morphisms.hpp"
#include "dualpolar/parallel.hpp"

namespace dualpolar::cli {

namespace {

constexpr std::uint64_t kMaxGraphVertices = 5000;
constexpr std::uint64_t kMaxPoints = 20000;
constexpr int kMaxCubeDim = 12;

const std::set<std::string> kStatements = {"lemma1", "lemma2", "theorem2", "lemma5",
                                           "theorem3", "chow", "axioms", "distance"};
const std::set<std::string> kCountables = {"points", "singular", "frames", "apartments", "embeddings"};

std::uint64_t point_count_formula(unsigned p, int n) {
  std::uint64_t q = 1;
  for (int i = 0; i < 2 * n; ++i) q *= p;
  return (q - 1) / (p - 1);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("DUALPOLAR_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
}

SearchOptions search_options(const RunConfig& c) {
  SearchOptions o;
  o.mode = c.mode == "sample" ? SearchMode::Sample : SearchMode::Exhaustive;
  o.node_budget = c.budget;
  o.seed = c.seed;
  o.sample_target = static_cast<std::size_t>(c.target_count);
  o.workers = c.workers;
  return o;
}

std::shared_ptr<const PolarSpace> make_space(unsigned p, int n) { return std::make_shared<const PolarSpace>(p, n); }

std::shared_ptr<const DenseGraph> make_graph(unsigned p, int n) {
  return std::make_shared<const DenseGraph>(dual_polar_graph(make_space(p, n)));
}

VerificationReport base_report(const RunConfig& c, const std::string& statement) {
  VerificationReport r;
  r.statement = statement;
  r.p = c.p;
  r.n = c.n;
  r.m = c.m.value_or(0);
  r.n_prime = c.n_prime;
  r.mode = c.mode;
  r.budget = c.budget;
  r.seed = c.seed;
  return r;
}

VerificationReport run_verify(const RunConfig& c) {
  const auto& s = c.target;
  if (s == "lemma2") return verify_lemma2(*c.m);
  if (s == "axioms") {
    auto r = verify_axioms(*make_space(c.p, c.n), c.n >= 3);
    r.n = c.n;
    r.p = c.p;
    return r;
  }
  if (s == "lemma5" || s == "theorem3" || s == "chow") {
    const int n2 = c.n_prime.value_or(c.n);
    auto src = make_graph(c.p, c.n);
    auto dst = n2 == c.n ? src : make_graph(c.p, n2);
    return verify_morphisms(s, src, dst, search_options(c));
  }
  auto graph = make_graph(c.p, c.n);
  if (s == "distance") return verify_distance_formula(*graph);
  if (s == "lemma1") {
    const auto mode = c.mode == "sample" ? SearchMode::Sample : SearchMode::Exhaustive;
    return verify_lemma1(*graph, mode, mode == SearchMode::Sample ? c.target_count : c.budget, c.seed);
  }
  return verify_theorem2(graph, c.m.value_or(c.n), search_options(c));
}

VerificationReport run_count(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  auto r = base_report(c, "count_" + c.target);
  const auto& what = c.target;
  auto space = make_space(c.p, c.n);
  if (what == "points") {
    r.counts["points"] = static_cast<std::int64_t>(space->point_count());
    r.counts["points_closed_form"] = static_cast<std::int64_t>(point_count_formula(c.p, c.n));
    if (space->point_count() != point_count_formula(c.p, c.n)) r.add_violation("point count differs from closed form");
  } else if (what == "singular") {
    const int lo = c.k.value_or(0);
    const int hi = c.k.value_or(c.n - 1);
    for (int k = lo; k <= hi; ++k) {
      r.counts["projdim_" + std::to_string(k)] = static_cast<std::int64_t>(enumerate_singular(*space, k).size());
    }
    if (hi == c.n - 1) {
      const auto closed = maximal_subspace_count(c.p, c.n);
      r.counts["maximal_closed_form"] = static_cast<std::int64_t>(closed);
      if (r.counts["projdim_" + std::to_string(hi)] != static_cast<std::int64_t>(closed)) {
        r.add_violation("maximal subspace count differs from closed form");
      }
    }
  } else if (what == "frames" || what == "apartments") {
    const auto frames = enumerate_frames(*space, c.budget);
    r.counts["frames"] = static_cast<std::int64_t>(frames.frames.size());
    r.counts["nodes"] = static_cast<std::int64_t>(frames.nodes);
    r.complete = frames.complete;
    if (what == "apartments") {
      auto graph = std::make_shared<const DenseGraph>(dual_polar_graph(space));
      const auto& fs = frames.frames;
      std::vector<std::vector<SingularSubspace>> apartments(fs.size());
      std::vector<std::string> problems(fs.size());
      detail::parallel_for(fs.size(), c.workers, [&](std::size_t i) {
        auto members = apartment_of_frame(*space, fs[i]);
        const auto w = is_apartment(graph, members);
        if (!w || w->base.projdim() != -1) {
          problems[i] = "apartment of frame #" + std::to_string(i) + " not recognized";
        } else {
          std::vector<ProjectivePoint> pts;
          for (const auto& q : w->residue_frame) pts.emplace_back(q.basis().rows().front());
          std::sort(pts.begin(), pts.end());
          if (pts != fs[i].points) problems[i] = "frame #" + std::to_string(i) + " not recovered from its apartment";
        }
        std::sort(members.begin(), members.end());
        apartments[i] = std::move(members);
      });
      for (const auto& pr : problems) {
        if (!pr.empty()) r.add_violation(pr);
      }
      std::sort(apartments.begin(), apartments.end());
      const auto distinct = std::unique(apartments.begin(), apartments.end()) - apartments.begin();
      r.counts["apartments"] = static_cast<std::int64_t>(distinct);
      if (static_cast<std::size_t>(distinct) != fs.size()) r.add_violation("two frames share an apartment");
    }
  } else {
    const int m = c.m.value_or(c.n);
    auto graph = std::make_shared<const DenseGraph>(dual_polar_graph(space));
    const auto found = search_hypercube_embeddings(m, graph, search_options(c));
    std::set<std::vector<std::size_t>> images;
    for (const auto& e : found.embeddings) images.insert(e.image());
    std::int64_t apartments = 0;
    for (const auto& img : images) {
      std::vector<SingularSubspace> members;
      for (auto v : img) members.push_back(graph->subspace(v));
      if (is_apartment(graph, members)) ++apartments;
    }
    r.counts["embeddings"] = static_cast<std::int64_t>(found.embeddings.size());
    r.counts["distinct_images"] = static_cast<std::int64_t>(images.size());
    r.counts["apartments"] = apartments;
    r.counts["nodes"] = static_cast<std::int64_t>(found.stats.nodes);
    if (c.mode == "sample") r.counts["restarts"] = static_cast<std::int64_t>(found.stats.restarts);
    r.complete = found.stats.complete;
  }
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int run_build(const RunConfig& c, std::ostream& out) {
  auto space = make_space(c.p, c.n);
  const DenseGraph graph = dual_polar_graph(space);
  const auto dir = c.output.empty() ? default_output_dir() : std::filesystem::path(c.output);
  const std::string stem = "p" + std::to_string(c.p) + "_n" + std::to_string(c.n);
  const auto space_file = dir / ("space_" + stem + ".json");
  const auto graph_file = dir / ("graph_" + stem + "." + c.format);
  write_file(space_file, space_to_json(*space).dump(2) + "\n");
  if (c.format == "dot") {
    write_file(graph_file, graph_to_dot(graph, "dual_polar_" + stem));
  } else {
    write_file(graph_file, graph_to_json(graph, c.include_distances).dump(2) + "\n");
  }
  nlohmann::json summary;
  summary["config"] = config_to_json(c);
  summary["files"] = {space_file.string(), graph_file.string()};
  summary["points"] = space->point_count();
  summary["vertices"] = graph.size();
  summary["edges"] = graph.edge_count();
  summary["timestamp"] = timestamp_utc();
  out << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Symplectic dual polar graphs: construction, embedding search and verification", "dualpolar"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--p", c.p, "Field order (2, 3 or 5)");
    sub->add_option("--n", c.n, "Rank of the polar space");
    sub->add_option("--n-prime,--n_prime", c.n_prime, "Target rank for dual polar embeddings");
    sub->add_option("--m", c.m, "Hypercube dimension");
    sub->add_option("--mode", c.mode, "exhaustive or sample")->check(CLI::IsMember({"exhaustive", "sample"}));
    sub->add_option("--budget", c.budget, "Node-expansion budget");
    sub->add_option("--seed", c.seed, "64-bit seed");
    sub->add_option("--workers", c.workers, "Worker threads");
    sub->add_option("--target", c.target_count, "Sample mode: distinct results to collect");
    sub->add_option("--output,-o", c.output, "Output path");
  };

  auto* build = app.add_subcommand("build", "Write space and graph exports");
  add_common(build);
  build->add_option("--format", c.format, "Graph format")->check(CLI::IsMember({"json", "dot"}));
  build->add_flag("--include-dist", c.include_distances, "Add the distance matrix to JSON graph exports");

  auto* verify = app.add_subcommand("verify", "Run a verifier");
  verify->add_option("statement", c.target, "Statement to verify")->required()->check(CLI::IsMember(kStatements));
  add_common(verify);

  auto* count = app.add_subcommand("count", "Count objects");
  count->add_option("what", c.target, "Object kind")->required()->check(CLI::IsMember(kCountables));
  add_common(count);
  count->add_option("--k", c.k, "Projective dimension for singular counts");

  std::vector<std::string> argv_store{"dualpolar"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* sub : {build, verify, count}) {
    if (sub->parsed()) c.command = sub->get_name();
  }
  return c;
}

void validate(RunConfig& c) {
  if (c.p != 2 && c.p != 3 && c.p != 5) throw UsageError("--p must be 2, 3 or 5");
  if (c.budget == 0) throw UsageError("--budget must be positive");
  if (c.workers < 1) throw UsageError("--workers must be positive");
  if (c.mode == "sample" && c.target_count == 0) throw UsageError("--target must be positive");
  if (c.command == "verify" && c.target == "lemma2") {
    if (!c.m) throw UsageError("lemma2 needs --m");
    if (*c.m < 1 || *c.m > kMaxCubeDim) throw UsageError("--m must lie in 1.." + std::to_string(kMaxCubeDim));
    return;
  }
  if (c.n < 2 || c.n > 4) throw UsageError("--n must lie in 2..4");
  if (c.n_prime && (*c.n_prime < c.n || *c.n_prime > 4)) throw UsageError("--n-prime must lie in n..4");
  if (c.m && (*c.m < 1 || *c.m > c.n)) throw UsageError("--m must lie in 1..n");
  if (c.k && (*c.k < 0 || *c.k > c.n - 1)) throw UsageError("--k must lie in 0..n-1");
  if (c.command == "verify" && c.target == "chow" && c.n_prime && *c.n_prime != c.n) {
    throw UsageError("chow needs n' = n");
  }
  if (point_count_formula(c.p, c.n) > kMaxPoints) throw UsageError("polar space too large for this tool");
  const bool needs_graph = c.command == "build" || (c.command == "verify" && c.target != "axioms") ||
                           (c.command == "count" && (c.target == "apartments" || c.target == "embeddings"));
  const int top = std::max(c.n, c.n_prime.value_or(c.n));
  if (needs_graph && maximal_subspace_count(c.p, top) > kMaxGraphVertices) {
    throw UsageError("dual polar graph has more than " + std::to_string(kMaxGraphVertices) + " vertices");
  }
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["target"] = c.target;
  j["p"] = c.p;
  j["n"] = c.n;
  j["n_prime"] = c.n_prime ? nlohmann::json(*c.n_prime) : nlohmann::json(nullptr);
  j["m"] = c.m ? nlohmann::json(*c.m) : nlohmann::json(nullptr);
  j["mode"] = c.mode;
  j["budget"] = c.budget;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["target_count"] = c.target_count;
  j["output"] = c.output;
  j["format"] = c.format;
  if (c.k) j["k"] = *c.k;
  return j;
}

int execute(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (c.command == "build") return run_build(c, out);
  const auto report = c.command == "verify" ? run_verify(c) : run_count(c);
  auto j = to_json(report);
  j["config"] = config_to_json(c);
  j["timestamp"] = timestamp_utc();
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!c.output.empty()) {
    write_file(c.output, text);
  } else if (std::getenv("DUALPOLAR_OUTPUT_DIR")) {
    write_file(default_output_dir() / (c.command + "_" + c.target + ".json"), text);
  }
  return exit_code(report.status());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    auto config = parse_args(args, out);
    if (!config) return 0;
    validate(*config);
    return execute(*config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ContractViolation& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const StructuralError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dualpolar::cli
