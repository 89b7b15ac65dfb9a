// Acceptance suite: one test case per criterion, each printing a
// PASS/FAIL line with the measured values.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "classtab/builtin.hpp"
#include "classtab/reproduce.hpp"
#include "classtab/train.hpp"
#include "oracles.hpp"

using namespace classtab;

namespace {

constexpr std::uint64_t kSeed = 42;

void criterion(int number, const std::string& text, bool pass) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", number,
              text.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(pass, "criterion ", number, ": ", text);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec v1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

StabilityEstimate interior_mc(const char* name, std::uint64_t seed,
                              std::int64_t samples = 1000000) {
  StabilityOptions opts;
  opts.seed = seed;
  opts.mc_samples = samples;
  return class_stability(extend(builtin_field(name)), NormP(1.0),
                         DistanceMode::pointwise, BoundaryMode::interior,
                         Integrator::monte_carlo, opts);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing ", path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("criterion 1: stability of the plain step is 1") {
  const auto t0 = std::chrono::steady_clock::now();
  const StabilityEstimate est = interior_mc("f1", kSeed);
  const double dt = seconds_since(t0);
  std::ostringstream text;
  text << "S1(f1) interior = " << est.value << " +- " << est.std_error
       << " (target 1.000 +- 0.01, " << dt << "s)";
  criterion(1, text.str(), std::abs(est.value - 1.0) <= 0.01 && dt < 5.0);
}

TEST_CASE("criterion 2: stability of the shifted step is 5/4") {
  const auto t0 = std::chrono::steady_clock::now();
  const StabilityEstimate est = interior_mc("f4", kSeed + 1);
  const double dt = seconds_since(t0);
  std::ostringstream text;
  text << "S1(f4) interior = " << est.value << " (target 1.250 +- 0.01, " << dt
       << "s)";
  criterion(2, text.str(), std::abs(est.value - 1.25) <= 0.01 && dt < 5.0);
}

TEST_CASE("criterion 3: f2 matches the piecewise-integration oracle") {
  const StabilityEstimate est = interior_mc("f2", kSeed + 2);
  const double oracle = oracles::f2_stability_closed_form();
  std::ostringstream text;
  text << "S1(f2) interior = " << est.value << " vs oracle " << oracle
       << " (stated 0.5 recorded as documented deviation)";
  criterion(3, text.str(), std::abs(est.value - oracle) <= 0.005);
}

TEST_CASE("criterion 4: the parity field is pointwise unstable, measure stable") {
  const StabilityEstimate pw = interior_mc("f3", kSeed + 3, 100000);

  const LabelField raster(rasterize(builtin_field("f3"), {16384}), "f3-grid");
  StabilityOptions opts;
  opts.seed = kSeed + 4;
  opts.grid_cells = {2000};
  opts.dist.samples_per_radius = 2048;
  opts.dist.bisection_depth = 24;
  opts.dist.seed = kSeed + 5;
  const StabilityEstimate ms =
      class_stability(extend(raster), NormP(1.0), DistanceMode::measure,
                      BoundaryMode::interior, Integrator::grid, opts);
  std::ostringstream text;
  text << "S1(f3) pointwise = " << pw.value << " (< 1e-3), measure = " << ms.value
       << " (target 1.00 +- 0.02)";
  criterion(4, text.str(), pw.value < 1e-3 && std::abs(ms.value - 1.0) <= 0.02);
}

TEST_CASE("criterion 5: Monte Carlo matches the cube closed form") {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;
  for (int n = 1; n <= 5; ++n) {
    for (const double a : {0.5, 1.0}) {
      std::ostringstream spec;
      spec << "cube:n=" << n << ",a=" << a;
      StabilityOptions opts;
      opts.seed = kSeed + 10 * static_cast<std::uint64_t>(n) + (a < 1 ? 1 : 0);
      opts.mc_samples = n <= 3 ? 1000000 : 200000;
      const StabilityEstimate est = class_stability(
          extend(builtin_field(spec.str())), NormP(2.0), DistanceMode::pointwise,
          BoundaryMode::extension, Integrator::monte_carlo, opts);
      const double closed = cube_stability_closed_form(n, a);
      const bool consistent = std::abs(est.value - closed) <= 3.0 * est.std_error;
      const bool precise = 3.0 * est.std_error <= 0.01 * closed;
      if (!(consistent && precise)) {
        ok = false;
        detail << " [n=" << n << ",a=" << a << ": " << est.value << " vs " << closed
               << "]";
      }
    }
  }
  const double dt = seconds_since(t0);
  std::ostringstream text;
  text << "cube MC vs 2^n a^(n+1)/(n+1), n=1..5, a in {0.5,1}, rel err <= 1% at 3 "
          "sigma ("
       << dt << "s)" << detail.str();
  criterion(5, text.str(), ok && dt < 30.0);
}

TEST_CASE("criterion 6: Monte Carlo matches the ball closed form") {
  bool ok = true;
  std::ostringstream detail;
  for (int n = 1; n <= 5; ++n) {
    std::ostringstream spec;
    spec << "ball:n=" << n << ",R=1";
    StabilityOptions opts;
    opts.seed = kSeed + 20 + static_cast<std::uint64_t>(n);
    opts.mc_samples = n <= 3 ? 1000000 : 200000;
    const StabilityEstimate est = class_stability(
        extend(builtin_field(spec.str())), NormP(2.0), DistanceMode::pointwise,
        BoundaryMode::extension, Integrator::monte_carlo, opts);
    const double closed = ball_stability_closed_form(n, 1.0);
    const bool consistent = std::abs(est.value - closed) <= 3.0 * est.std_error;
    const bool precise = 3.0 * est.std_error <= 0.02 * closed;
    if (!(consistent && precise)) {
      ok = false;
      detail << " [n=" << n << ": " << est.value << " vs " << closed << "]";
    }
  }
  const bool consistency_1d =
      std::abs(ball_stability_closed_form(1, 1.0) - 1.0) < 1e-12 &&
      std::abs(cube_stability_closed_form(1, 1.0) - 1.0) < 1e-12;
  std::ostringstream text;
  text << "ball MC vs closed form (p=2), n=1..5, rel err <= 2% at 3 sigma; "
          "ball(1,1) = cube(1,1) = 1"
       << detail.str();
  criterion(6, text.str(), ok && consistency_1d);
}

TEST_CASE("criterion 7: volume-matched ratio to 1e-9 and strictly increasing") {
  bool ok = true;
  double prev = 0.0;
  double worst = 0.0;
  for (int n = 1; n <= 64; ++n) {
    const double ref =
        2.0 * std::exp(oracles::lgamma_half_integer(0.5 * n + 1.0) / n) /
        std::sqrt(M_PI);
    const double got = volume_matched_ratio(n);
    worst = std::max(worst, std::abs(got - ref) / ref);
    if (std::abs(got - ref) > 1e-9 * ref || got <= prev) ok = false;
    prev = got;
  }
  std::ostringstream text;
  text << "ratio vs half-integer recurrence, n=1..64 (worst rel err " << worst
       << "), strictly increasing";
  criterion(7, text.str(), ok);
}

TEST_CASE("criterion 8: argmax recovery and the Lipschitz-1 property of H") {
  bool argmax_ok = true;
  Rng rng(kSeed);
  for (const char* name : {"f1", "f2", "f4", "fl", "cube:n=2,a=1", "disk"}) {
    const ExtendedField field = extend(builtin_field(name));
    const BoundaryMode bmode = field.base().label_set().size() == 1
                                   ? BoundaryMode::extension
                                   : BoundaryMode::interior;
    const HField H(field, NormP(2.0), bmode);
    std::int64_t checked = 0, good = 0;
    for (int i = 0; i < 100000; ++i) {
      const Vec x = field.domain().sample(rng);
      const DistanceEstimate est = H.h(x);
      if (!(std::isfinite(est.value) && est.value > 10.0 * est.error_bound &&
            est.value > 0.0))
        continue;
      ++checked;
      if (class_prediction(H(x)) == H.slot_of(field.evaluate(x))) ++good;
    }
    if (checked == 0 || good != checked) argmax_ok = false;
  }

  bool lipschitz_ok = true;
  double worst = 0.0;
  const struct {
    const char* name;
    BoundaryMode bmode;
    double p;
  } rows[] = {{"f1", BoundaryMode::interior, 1.0},
              {"f4", BoundaryMode::interior, 1.0},
              {"cube:n=2,a=1", BoundaryMode::extension, 2.0},
              {"disk", BoundaryMode::interior, 2.0}};
  for (const auto& row : rows) {
    const ExtendedField field = extend(builtin_field(row.name));
    const LipschitzWitness w =
        lipschitz_check_H(field, NormP(row.p), 100000, kSeed + 8, row.bmode);
    worst = std::max(worst, w.max_ratio);
    if (w.max_ratio > 1.0 + 1e-9) lipschitz_ok = false;
  }
  std::ostringstream text;
  text << "argmax recovery 100% at h > 10*bound on 1e5 points per field; "
          "max Lipschitz ratio of H = "
       << worst << " <= 1 + 1e-9";
  criterion(8, text.str(), argmax_ok && lipschitz_ok);
}

TEST_CASE("criterion 9: interpolation nets for the disk task and f1") {
  const auto t0 = std::chrono::steady_clock::now();
  const ExtendedField disk = extend(builtin_field("disk"));
  TrainOptions opts;
  opts.width = 256;
  opts.budget = 2600;
  opts.max_restarts = 2;
  opts.train_spacing = 0.02;
  opts.meps_spacing = 0.01;
  opts.seed = kSeed;
  const Domain K = default_training_box(disk, 0.1);
  const auto [net, rep] = train_shallow(disk, K, NormP(2.0), 0.1, opts);
  const double dt_disk = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const ExtendedField f1 = extend(builtin_field("f1"));
  TrainOptions nd;
  nd.budget = 24000;
  nd.max_restarts = 4;
  nd.depth_budget = 2;
  nd.seed = kSeed + 9;
  const Domain K1 = default_training_box(f1, 0.2);
  const auto [dnet, drep] = train_narrow_deep(f1, K1, NormP(1.0), 0.2, nd);
  const double dt_f1 = seconds_since(t1);

  std::ostringstream text;
  text << "disk eps=0.1: sup " << rep.sup_error << " < 0.05, interpolation "
       << rep.interpolation_fraction << " on " << rep.stable_points << " pts ("
       << dt_disk << "s); f1 narrow-deep width " << dnet.width() << ": sup "
       << drep.sup_error << " < 0.1, interpolation " << drep.interpolation_fraction
       << " (" << dt_f1 << "s)";
  criterion(9, text.str(),
            rep.reached_target && rep.interpolation_fraction == 1.0 &&
                rep.stable_points > 0 && dt_disk < 60.0 && drep.reached_target &&
                drep.interpolation_fraction == 1.0 && dnet.width() == 6 &&
                dt_f1 < 60.0);
}

TEST_CASE("criterion 10: the desk-scale stability chain") {
  const ChainResult chain = default_disk_chain(kSeed);
  std::ostringstream text;
  text << "deficit " << chain.deficit << " <= 0.05 (3 sigma), mismatch "
       << chain.mismatch_measure << " <= 0.05, anchors " << chain.anchors_matched
       << "/" << chain.anchors_total;
  criterion(10, text.str(),
            chain.pass_deficit && chain.pass_mismatch && chain.pass_anchors);
}

TEST_CASE("criterion 11: invariance suite") {
  // relabel invariance, exact under the grid integrator
  const LabelField raster(rasterize(builtin_field("f1"), {512}), "f1-grid");
  StabilityOptions gopts;
  gopts.grid_cells = {400};
  const auto grid_s = [&](const LabelField& f) {
    return class_stability(extend(f), NormP(1.0), DistanceMode::pointwise,
                           BoundaryMode::interior, Integrator::grid, gopts)
        .value;
  };
  const bool relabel_exact =
      grid_s(raster) == grid_s(relabel(raster, {{1, 6}, {2, 3}}));

  // scaling covariance S(f_c) = c^(d+1) S(f) within 3 sigma
  bool scaling_ok = true;
  const StabilityEstimate base = interior_mc("f1", kSeed + 30);
  for (const double c : {1.0 / 1000.0, 0.5, 2.0}) {
    StabilityOptions opts;
    opts.seed = kSeed + 31;
    opts.mc_samples = 1000000;
    const StabilityEstimate est = class_stability(
        extend(rescale_domain(builtin_field("f1"), c)), NormP(1.0),
        DistanceMode::pointwise, BoundaryMode::interior, Integrator::monte_carlo,
        opts);
    const double expected = c * c * base.value;
    if (std::abs(est.value - expected) >
        3.0 * (c * c * base.std_error + est.std_error))
      scaling_ok = false;
  }

  // stable-set nesting
  const ExtendedField f4 = extend(builtin_field("f4"));
  const StableSet inner = stable_set(f4, 0.3, NormP(1.0), BoundaryMode::interior, {700});
  const StableSet outer = stable_set(f4, 0.1, NormP(1.0), BoundaryMode::interior, {700});
  std::set<double> outer_xs;
  for (Eigen::Index i = 0; i < outer.members.rows(); ++i)
    outer_xs.insert(outer.members(i, 0));
  bool nesting_ok = inner.members.rows() < outer.members.rows();
  for (Eigen::Index i = 0; i < inner.members.rows(); ++i)
    if (outer_xs.count(inner.members(i, 0)) == 0) nesting_ok = false;

  // extension <= interior distance ordering
  bool ordering_ok = true;
  Rng rng(kSeed + 32);
  for (const char* name : {"f1", "f4", "disk"}) {
    const ExtendedField field = extend(builtin_field(name));
    for (int i = 0; i < 200; ++i) {
      const Vec x = field.domain().sample(rng);
      if (pointwise_distance(field, x, NormP(2.0), BoundaryMode::extension).value >
          pointwise_distance(field, x, NormP(2.0), BoundaryMode::interior).value +
              1e-12)
        ordering_ok = false;
    }
  }

  // measure mode dominates pointwise mode on grid fields
  bool mode_ok = true;
  const LabelField f2grid(rasterize(builtin_field("f2"), {4000}), "f2-grid");
  const ExtendedField f2g = extend(f2grid);
  for (int i = 0; i < 15; ++i) {
    const Vec x = v1(-0.9 + 0.12 * i);
    const DistanceEstimate pw =
        pointwise_distance(f2g, x, NormP(1.0), BoundaryMode::interior);
    DistanceOptions d;
    d.seed = kSeed + 33 + static_cast<std::uint64_t>(i);
    const DistanceEstimate ms =
        measure_distance(f2g, x, NormP(1.0), d, BoundaryMode::interior);
    if (ms.value < pw.value - pw.error_bound - ms.error_bound - 0.02) mode_ok = false;
  }

  std::ostringstream text;
  text << "relabel exact=" << relabel_exact << ", scaling 3sigma=" << scaling_ok
       << ", nesting=" << nesting_ok << ", extension<=interior=" << ordering_ok
       << ", measure>=pointwise=" << mode_ok;
  criterion(11, text.str(),
            relabel_exact && scaling_ok && nesting_ok && ordering_ok && mode_ok);
}

TEST_CASE("criterion 12: the reproduction run is deterministic") {
  const char* bin = std::getenv("CLASSTAB_BIN");
  const std::string cli = bin ? bin : "../classtab";

  const auto run = [&](const std::string& base) {
    const std::string cmd =
        cli + " reproduce --seed 42 --out " + base + " > " + base + ".log 2>&1";
    return std::system(cmd.c_str());
  };
  const int rc1 = run("acc_rep_a");
  const int rc2 = run("acc_rep_b");

  auto stripped = [](const std::string& path) {
    auto j = nlohmann::json::parse(slurp(path));
    j.erase("runtime_seconds");
    return j;
  };
  const auto ja = stripped("acc_rep_a.json");
  const auto jb = stripped("acc_rep_b.json");
  const bool json_match = ja == jb;
  const bool csv_match = slurp("acc_rep_a.csv") == slurp("acc_rep_b.csv");

  // the stated f2 value survives only as a documented deviation
  bool f2_deviation = false;
  bool any_fail = false;
  for (const auto& c : ja.at("cases")) {
    if (c.at("name") == "S1_f2_interior" && c.at("status") == "documented deviation")
      f2_deviation = true;
    if (c.at("status") == "fail") any_fail = true;
  }

  std::ostringstream text;
  text << "reproduce --seed 42 twice: exit codes " << rc1 << "/" << rc2
       << ", JSON identical modulo runtime = " << json_match
       << ", CSV identical = " << csv_match << ", f2 deviation documented = "
       << f2_deviation;
  criterion(12, text.str(),
            rc1 == 0 && rc2 == 0 && json_match && csv_match && f2_deviation &&
                !any_fail);
}
