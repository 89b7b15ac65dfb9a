#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "classtab/builtin.hpp"
#include "classtab/special.hpp"
#include "classtab/stability.hpp"
#include "oracles.hpp"

using namespace classtab;

namespace {

Vec v1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

StabilityEstimate mc_stability(const char* name, BoundaryMode bmode,
                               double p = 1.0, std::int64_t samples = 1000000,
                               std::uint64_t seed = 1) {
  StabilityOptions opts;
  opts.seed = seed;
  opts.mc_samples = samples;
  return class_stability(extend(builtin_field(name)), NormP(p),
                         DistanceMode::pointwise, bmode, Integrator::monte_carlo,
                         opts);
}

}  // namespace

TEST_CASE("closed forms for cube, ball and their ratio") {
  CHECK(cube_stability_closed_form(1, 1.0) == doctest::Approx(1.0));
  // n=1 cube equals the quadrature of 1-|x| over [-1,1]
  CHECK(oracles::simpson([](double x) { return 1.0 - std::abs(x); }, -1.0, 1.0,
                         4000) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cube_stability_closed_form(2, 1.0) == doctest::Approx(4.0 / 3.0));
  CHECK(cube_stability_closed_form(3, 0.5) == doctest::Approx(0.125));

  CHECK(ball_stability_closed_form(1, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ball_stability_closed_form(2, 1.0) == doctest::Approx(M_PI / 3.0).epsilon(1e-12));
  // n=3, R=2 from the formula evaluated with the half-integer recurrence
  const double expect3 =
      2.0 * std::pow(M_PI, 1.5) / std::exp(oracles::lgamma_half_integer(1.5)) *
      std::pow(2.0, 4) / 12.0;
  CHECK(ball_stability_closed_form(3, 2.0) == doctest::Approx(expect3).epsilon(1e-12));

  // 1D consistency: ball and cube coincide
  CHECK(ball_stability_closed_form(1, 1.0) ==
        doctest::Approx(cube_stability_closed_form(1, 1.0)).epsilon(1e-12));

  CHECK(volume_matched_ratio(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(volume_matched_ratio(2) ==
        doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(volume_matched_radius(1, 0.7) == doctest::Approx(0.7).epsilon(1e-12));

  CHECK_THROWS_AS(cube_stability_closed_form(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ball_stability_closed_form(2, -1.0), std::invalid_argument);
}

TEST_CASE("ratio matches the independent half-integer evaluation to 1e-9") {
  double prev = 0.0;
  for (int n = 1; n <= 64; ++n) {
    const double ref =
        2.0 * std::exp(oracles::lgamma_half_integer(0.5 * n + 1.0) / n) /
        std::sqrt(M_PI);
    const double got = volume_matched_ratio(n);
    CHECK(std::abs(got - ref) <= 1e-9 * ref);
    CHECK(got > prev);  // strict growth
    prev = got;
  }
}

TEST_CASE("interior-mode stabilities of the step fields") {
  const StabilityEstimate s1 = mc_stability("f1", BoundaryMode::interior);
  CHECK(std::abs(s1.value - 1.0) <= std::max(0.01, 3.0 * s1.std_error));

  const StabilityEstimate s4 = mc_stability("f4", BoundaryMode::interior);
  CHECK(std::abs(s4.value - 1.25) <= std::max(0.01, 3.0 * s4.std_error));

  // the uneven step is preferred by about 1/4
  CHECK(s4.value - s1.value == doctest::Approx(0.25).epsilon(0.05));

  // literal evaluation of the distance definition on f2
  const StabilityEstimate s2 = mc_stability("f2", BoundaryMode::interior);
  CHECK(std::abs(s2.value - oracles::f2_stability_closed_form()) <=
        std::max(0.005, 3.0 * s2.std_error));
  CHECK(oracles::f2_stability_closed_form() == doctest::Approx(0.375));
}

TEST_CASE("extension mode folds in the domain edge") {
  const StabilityEstimate s = mc_stability("f1", BoundaryMode::extension);
  const double oracle = oracles::simpson(
      [](double x) { return std::min(std::abs(x), 1.0 - std::abs(x)); }, -1.0, 1.0,
      4000);
  CHECK(oracle == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(s.value - oracle) <= std::max(0.01, 3.0 * s.std_error));
}

TEST_CASE("grid integrator brackets the step stability") {
  const LabelField raster(rasterize(builtin_field("f1"), {4096}), "f1-grid");
  const ExtendedField f = extend(raster);
  StabilityOptions opts;
  opts.grid_cells = {2048};
  const StabilityEstimate est =
      class_stability(f, NormP(1.0), DistanceMode::pointwise, BoundaryMode::interior,
                      Integrator::grid, opts);
  CHECK(est.integrator == Integrator::grid);
  CHECK(std::abs(est.value - 1.0) <= est.std_error + 1e-6);
}

TEST_CASE("relabel invariance is exact under the grid integrator") {
  const LabelField raster(rasterize(builtin_field("f1"), {512}), "f1-grid");
  const LabelField renamed = relabel(raster, {{1, 11}, {2, 5}});
  StabilityOptions opts;
  opts.grid_cells = {333};
  const auto run = [&](const LabelField& f) {
    return class_stability(extend(f), NormP(1.0), DistanceMode::pointwise,
                           BoundaryMode::interior, Integrator::grid, opts);
  };
  CHECK(run(raster).value == run(renamed).value);  // bitwise
}

TEST_CASE("relabel invariance holds for Monte Carlo with a shared seed") {
  const StabilityEstimate a = mc_stability("f1", BoundaryMode::interior, 1.0, 200000, 9);
  const LabelField renamed = relabel(builtin_field("f1"), {{1, 3}, {2, 8}});
  StabilityOptions opts;
  opts.seed = 9;
  opts.mc_samples = 200000;
  const StabilityEstimate b =
      class_stability(extend(renamed), NormP(1.0), DistanceMode::pointwise,
                      BoundaryMode::interior, Integrator::monte_carlo, opts);
  CHECK(a.value == b.value);  // same samples, same level sets
}

TEST_CASE("stability scales like c^(d+1) under input rescaling") {
  const StabilityEstimate base = mc_stability("f1", BoundaryMode::interior);
  for (const double c : {1.0 / 1000.0, 0.5, 2.0}) {
    const LabelField scaled = rescale_domain(builtin_field("f1"), c);
    StabilityOptions opts;
    opts.seed = 5;
    opts.mc_samples = 1000000;
    const StabilityEstimate est =
        class_stability(extend(scaled), NormP(1.0), DistanceMode::pointwise,
                        BoundaryMode::interior, Integrator::monte_carlo, opts);
    const double expected = c * c * base.value;  // d = 1
    const double tol = 3.0 * (c * c * base.std_error + est.std_error);
    CHECK(std::abs(est.value - expected) <= tol);
  }
}

TEST_CASE("Monte Carlo matches the cube and ball closed forms") {
  {
    StabilityOptions opts;
    opts.seed = 31;
    opts.mc_samples = 400000;
    const StabilityEstimate est = class_stability(
        extend(builtin_field("cube:n=2,a=1")), NormP(2.0), DistanceMode::pointwise,
        BoundaryMode::extension, Integrator::monte_carlo, opts);
    CHECK(std::abs(est.value - cube_stability_closed_form(2, 1.0)) <=
          3.0 * est.std_error);
  }
  {
    StabilityOptions opts;
    opts.seed = 32;
    opts.mc_samples = 400000;
    const StabilityEstimate est = class_stability(
        extend(builtin_field("ball:n=2,R=1")), NormP(2.0), DistanceMode::pointwise,
        BoundaryMode::extension, Integrator::monte_carlo, opts);
    CHECK(std::abs(est.value - ball_stability_closed_form(2, 1.0)) <=
          3.0 * est.std_error);
  }
}

TEST_CASE("finite point sets integrate under counting measure") {
  const ExtendedField f1 = extend(builtin_field("f1"));
  const Domain atoms = Domain::finite_set({v1(-0.5), v1(0.25), v1(0.75)});
  const StabilityEstimate est =
      class_stability(f1, atoms, NormP(1.0), DistanceMode::pointwise,
                      BoundaryMode::interior, Integrator::grid);
  CHECK(est.value == doctest::Approx(0.5 + 0.25 + 0.75));
  CHECK(est.std_error == 0.0);
  CHECK(est.samples == 3);
}

TEST_CASE("class_stability input validation") {
  const ExtendedField h1 = extend(builtin_field("H1"));
  CHECK_THROWS_AS(class_stability(h1, NormP(1.0), DistanceMode::measure,
                                  BoundaryMode::interior, Integrator::monte_carlo),
                  std::invalid_argument);

  const ExtendedField f1 = extend(builtin_field("f1"));
  StabilityOptions tiny;
  tiny.mc_samples = 50;
  CHECK_THROWS_AS(class_stability(f1, NormP(1.0), DistanceMode::pointwise,
                                  BoundaryMode::interior, Integrator::monte_carlo,
                                  tiny),
                  std::invalid_argument);

  const Domain outside = Domain::box(v1(0.0), v1(3.0));
  CHECK_THROWS_AS(class_stability(f1, outside, NormP(1.0), DistanceMode::pointwise,
                                  BoundaryMode::interior, Integrator::monte_carlo),
                  std::invalid_argument);

  const ExtendedField cube5 = extend(builtin_field("cube:n=5,a=1"));
  CHECK_THROWS_AS(class_stability(cube5, NormP(2.0), DistanceMode::pointwise,
                                  BoundaryMode::extension, Integrator::grid),
                  std::invalid_argument);
}

TEST_CASE("Monte Carlo estimates are independent of the worker count") {
  const ExtendedField f1 = extend(builtin_field("f1"));
  StabilityOptions one;
  one.seed = 4;
  one.mc_samples = 300000;
  one.workers = 1;
  StabilityOptions four = one;
  four.workers = 4;
  const StabilityEstimate a =
      class_stability(f1, NormP(1.0), DistanceMode::pointwise,
                      BoundaryMode::interior, Integrator::monte_carlo, one);
  const StabilityEstimate b =
      class_stability(f1, NormP(1.0), DistanceMode::pointwise,
                      BoundaryMode::interior, Integrator::monte_carlo, four);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("accuracy measure is the unnormalized agreement volume") {
  const ExtendedField f1 = extend(builtin_field("f1"));
  const AccuracyEstimate same = accuracy_measure(f1, f1, f1.domain(), 50000, 3);
  CHECK(same.measure == doctest::Approx(2.0));
  CHECK(same.fraction == doctest::Approx(1.0));

  const AccuracyEstimate half = accuracy_measure(
      [](const VecCRef&) { return Label(2); }, f1, f1.domain(), 200000, 3);
  CHECK(half.measure == doctest::Approx(1.0).epsilon(0.02));

  CHECK_THROWS_AS(accuracy_measure(f1, f1, f1.domain(), 0, 3), std::invalid_argument);
}
