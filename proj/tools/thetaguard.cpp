// Command-line surface: compute regions for any theta in (0, 2pi], query
// points, rasterize f, generate lower-bound instances, verify, and benchmark.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "thetaguard/io.hpp"

namespace tg = thetaguard;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegeneracy = 3;
constexpr int kExitVerification = 4;

struct CommonOpts {
  std::string input;
  std::string theta_str = "1.0";
  std::string output;
  std::string svg;
  std::string dump_arcs;
  bool naive_tangent = false;
  bool oracle_classify = false;
  int threads = 1;
  int resolution = 200;
  int branching = 8;
  double eps = 1e-9;
  std::uint64_t seed = 1;
};

tg::PipelineOptions pipeline_opts(const CommonOpts& c) {
  tg::PipelineOptions o;
  o.tangent = c.naive_tangent ? tg::TangentBackend::Naive : tg::TangentBackend::PartitionTree;
  o.classify = c.oracle_classify ? tg::ClassifyBackend::Oracle : tg::ClassifyBackend::Batch;
  o.branching = c.branching;
  return o;
}

// splitmix64, matching the test suites
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

tg::GuardSet random_guards(int n, std::uint64_t seed) {
  Rng rng{seed};
  std::vector<tg::Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(), rng.uniform()});
  return tg::GuardSet(std::move(pts));
}

int cmd_region(const CommonOpts& c) {
  tg::GuardSet G = tg::read_guards(c.input);
  if (G.empty()) {
    std::cerr << "error: empty guard set\n";
    return kExitInput;
  }
  double theta = tg::parse_theta(c.theta_str);
  if (!(theta > 0 && theta <= tg::kTau)) {
    std::cerr << "error: theta must be in (0, 2pi]\n";
    return kExitInput;
  }
  if (!c.dump_arcs.empty() && theta < tg::kPi) {
    tg::CandidateArcSet cset = tg::generate_candidate_arcs(
        G, theta,
        c.naive_tangent ? tg::TangentBackend::Naive : tg::TangentBackend::PartitionTree,
        c.branching);
    tg::write_file(c.dump_arcs, tg::arcs_to_json(cset).dump(2) + "\n");
  }
  tg::Region region = tg::compute_region(G, theta, pipeline_opts(c));
  nlohmann::json j = tg::region_to_json(region, theta, tg::regime_name(theta));
  j["guards"] = G.size();
  std::string text = j.dump(2) + "\n";
  if (c.output.empty())
    std::cout << text;
  else
    tg::write_file(c.output, text);
  if (!c.svg.empty()) tg::write_file(c.svg, tg::region_to_svg(region, G));
  return kExitOk;
}

int cmd_query(const CommonOpts& c, const std::vector<std::string>& point_strs) {
  tg::GuardSet G = tg::read_guards(c.input);
  double theta = tg::parse_theta(c.theta_str);
  if (!(theta > 0 && theta <= tg::kTau)) {
    std::cerr << "error: theta must be in (0, 2pi]\n";
    return kExitInput;
  }
  if (G.empty()) std::cerr << "warning: empty guard set, nothing is ever guarded\n";
  for (const std::string& ps : point_strs) {
    auto comma = ps.find(',');
    if (comma == std::string::npos) {
      std::cerr << "error: point must be x,y\n";
      return kExitInput;
    }
    tg::Point p{std::stod(ps.substr(0, comma)), std::stod(ps.substr(comma + 1))};
    tg::MaxGap mg = tg::max_empty_cone_angle(p, G);
    bool guarded = tg::is_theta_guarded(p, G, theta);
    nlohmann::json j;
    j["point"] = tg::point_json(p);
    j["guarded"] = guarded;
    j["f"] = mg.extent;
    if (!guarded && mg.cone) {
      j["witness"] = {{"start", mg.cone->start},
                      {"extent", mg.cone->extent},
                      {"g_max", tg::point_json(mg.cone->g_max)},
                      {"g_min", tg::point_json(mg.cone->g_min)}};
    }
    std::cout << j.dump() << "\n";
  }
  return kExitOk;
}

int cmd_rasterize(const CommonOpts& c, bool mask) {
  tg::GuardSet G = tg::read_guards(c.input);
  double theta = tg::parse_theta(c.theta_str);
  tg::BBox box = G.bbox();
  box.pad(0.1 * std::max(box.diameter(), 1.0));
  tg::Raster r = tg::rasterize(G, theta, box, c.resolution, c.resolution, c.threads);
  std::string out = c.output.empty() ? std::string("raster.pgm") : c.output;
  if (out.size() > 4 && out.substr(out.size() - 4) == ".svg")
    tg::write_file(out, tg::raster_to_svg(r));
  else
    tg::write_file(out, tg::raster_to_pgm(r, mask));
  std::cout << "wrote " << out << " (" << c.resolution << "x" << c.resolution << ")\n";
  return kExitOk;
}

int cmd_lowerbound(int i, const std::string& out, const std::string& verify, int threads) {
  tg::LowerBoundInstance inst = tg::lowerbound_generate(i);
  nlohmann::json j = tg::instance_to_json(inst);
  if (!verify.empty()) {
    tg::VerifyMethod m =
        verify == "arrangement" ? tg::VerifyMethod::Arrangement : tg::VerifyMethod::Raster;
    int count = tg::verify_fragmentation(inst, m, threads);
    j["verified_components"] = count;
    j["verify_method"] = verify;
    std::cout << "components inside B_i: " << count << " (expected "
              << inst.expected_components << ")\n";
    if (count != inst.expected_components) {
      std::cerr << "error: fragmentation mismatch\n";
      if (!out.empty()) tg::write_file(out, j.dump(2) + "\n");
      return kExitVerification;
    }
  }
  if (!out.empty())
    tg::write_file(out, j.dump(2) + "\n");
  else
    std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const CommonOpts& c) {
  tg::GuardSet G = tg::read_guards(c.input);
  double theta = tg::parse_theta(c.theta_str);
  if (!(theta > 0 && theta < tg::kPi)) {
    std::cerr << "error: verify needs theta in (0, pi)\n";
    return kExitInput;
  }
  tg::PipelineOptions opts = pipeline_opts(c);
  opts.euler_check = true;
  tg::PipelineResult res = tg::run_pipeline(G, theta, opts);
  std::cout << "candidate arcs: " << res.candidate_arcs << ", mu: " << res.mu
            << ", psi: " << res.psi << ", components: " << res.region.components.size()
            << "\n";
  // oracle agreement on random probes off the tolerance band
  Rng rng{c.seed};
  tg::BBox box = G.bbox();
  box.pad(0.05 * std::max(box.diameter(), 1.0));
  const double band = 2e-9 * std::max(box.diameter(), 1.0);
  int tested = 0, mismatches = 0;
  for (int k = 0; k < 10000; ++k) {
    tg::Point p{box.lo.x + rng.uniform() * box.width(),
                box.lo.y + rng.uniform() * box.height()};
    if (res.region.boundary_distance(p) <= band) continue;
    ++tested;
    if (res.region.contains(p) != tg::is_theta_guarded(p, G, theta)) ++mismatches;
  }
  // components must be single closed chains
  bool chains_ok = res.region.components.size() == res.face_components;
  std::cout << "probes tested: " << tested << ", mismatches: " << mismatches
            << ", closed-chain check: " << (chains_ok ? "ok" : "FAILED") << "\n";
  if (mismatches > 0 || !chains_ok) {
    std::cerr << "verification failed\n";
    return kExitVerification;
  }
  std::cout << "verify: pass\n";
  return kExitOk;
}

int cmd_bench(const std::string& sizes_str, const CommonOpts& c) {
  double theta = tg::parse_theta(c.theta_str);
  std::vector<int> sizes;
  std::stringstream ss(sizes_str);
  std::string tok;
  while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
  std::cout << "n\t|C'|\t|C'|*theta/n\tmu\tpsi\tarcs_ms\tarr_ms\n";
  for (int n : sizes) {
    tg::GuardSet G = random_guards(n, c.seed);
    auto t0 = std::chrono::steady_clock::now();
    tg::CandidateArcSet arcs = tg::generate_candidate_arcs(
        G, theta,
        c.naive_tangent ? tg::TangentBackend::Naive : tg::TangentBackend::PartitionTree);
    auto t1 = std::chrono::steady_clock::now();
    std::size_t mu = 0, psi = 0;
    if (!arcs.arcs.empty()) {
      tg::Arrangement arr = tg::build_arrangement(arcs);
      tg::classify_faces(arr, G, theta,
                         c.oracle_classify ? tg::ClassifyBackend::Oracle
                                           : tg::ClassifyBackend::Batch);
      mu = arr.mu();
      psi = arr.psi();
    }
    auto t2 = std::chrono::steady_clock::now();
    auto ms = [](auto a, auto b) {
      return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
    };
    std::cout << n << "\t" << arcs.arcs.size() << "\t"
              << arcs.arcs.size() * theta / std::max(1, n) << "\t" << mu << "\t" << psi << "\t"
              << ms(t0, t1) << "\t" << ms(t1, t2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"theta-guarded region toolkit"};
  app.require_subcommand(1);

  CommonOpts c;
  std::vector<std::string> query_points;
  std::string lb_out, lb_verify, bench_sizes = "100,200,400";
  int lb_i = 1;
  bool raster_mask = false;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input,-i", c.input, "guard set file (csv or json)");
    if (needs_input) in->required();
    sub->add_option("--theta,-t", c.theta_str, "angle (radians; suffix deg or pi accepted)");
    sub->add_option("--output,-o", c.output, "output path");
    sub->add_option("--threads", c.threads, "worker threads");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--branching", c.branching, "partition tree fan-out");
    sub->add_option("--eps", c.eps, "relative tolerance (default 1e-9)");
    sub->add_flag("--naive", c.naive_tangent, "naive tangent-guard backend");
    sub->add_flag("--oracle-classify", c.oracle_classify, "per-point classification backend");
  };

  CLI::App* region = app.add_subcommand("region", "compute the theta-region");
  add_common(region, true);
  region->add_option("--svg", c.svg, "also write an SVG rendering");
  region->add_option("--dump-arcs", c.dump_arcs, "write the candidate arc set as JSON");

  CLI::App* query = app.add_subcommand("query", "query points for guardedness");
  add_common(query, true);
  query->add_option("--point,-p", query_points, "query point x,y (repeatable)")->required();

  CLI::App* rasterize = app.add_subcommand("rasterize", "raster of f / guarded mask");
  add_common(rasterize, true);
  rasterize->add_option("--resolution,-r", c.resolution, "cells per side");
  rasterize->add_flag("--mask", raster_mask, "write the guarded mask instead of f");

  CLI::App* lowerbound = app.add_subcommand("lowerbound", "generate a quadratic-complexity instance");
  lowerbound->add_option("--i", lb_i, "instance index (n = 96i-4)")->required();
  lowerbound->add_option("--out", lb_out, "instance JSON path");
  lowerbound->add_option("--verify", lb_verify, "verify fragmentation: raster | arrangement");
  lowerbound->add_option("--threads", c.threads, "worker threads");

  CLI::App* verify = app.add_subcommand("verify", "oracle-agreement suite on an instance");
  add_common(verify, true);

  CLI::App* bench = app.add_subcommand("bench", "arc-count and timing table");
  add_common(bench, false);
  bench->add_option("--sizes", bench_sizes, "comma-separated instance sizes");

  CLI11_PARSE(app, argc, argv);

  if (c.eps > 0 && c.eps < 1e-2) tg::kEps = c.eps;

  try {
    if (region->parsed()) return cmd_region(c);
    if (query->parsed()) return cmd_query(c, query_points);
    if (rasterize->parsed()) return cmd_rasterize(c, raster_mask);
    if (lowerbound->parsed()) return cmd_lowerbound(lb_i, lb_out, lb_verify, c.threads);
    if (verify->parsed()) return cmd_verify(c);
    if (bench->parsed()) return cmd_bench(bench_sizes, c);
  } catch (const tg::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const tg::degeneracy_error& e) {
    std::cerr << "degeneracy: " << e.what() << "\n";
    return kExitDegeneracy;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegeneracy;
  }
  return kExitOk;
}
