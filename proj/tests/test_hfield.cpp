#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "classtab/builtin.hpp"
#include "classtab/hfield.hpp"
#include "classtab/rng.hpp"
#include "classtab/train.hpp"

using namespace classtab;

namespace {

Vec v1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

Vec vq(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("class_prediction returns the first maximal index") {
  CHECK(class_prediction(vq({0.1, 0.9, 0.3})) == 2);
  CHECK(class_prediction(vq({0.5, 0.5})) == 1);
  CHECK(class_prediction(vq({-1.0, -1.0, -1.0})) == 1);
  CHECK_THROWS_AS(class_prediction(Vec()), std::invalid_argument);
}

TEST_CASE("H places h at the slot of the label, -1 in slot 1") {
  const ExtendedField f1 = extend(builtin_field("f1"));
  const HField H(f1, NormP(1.0), BoundaryMode::interior);
  CHECK(H.q() == 3);
  CHECK(H.slot_labels() == std::vector<Label>{-1, 1, 2});
  CHECK(H.slot_of(-1) == 1);
  CHECK(H.slot_of(2) == 3);
  CHECK(H.label_of(3) == 2);
  CHECK_THROWS_AS(H.slot_of(42), std::invalid_argument);

  const Vec at_half = H(v1(0.5));
  CHECK(at_half[0] == 0.0);
  CHECK(at_half[1] == 0.0);
  CHECK(at_half[2] == doctest::Approx(0.5));

  // exactly on the step: h = 0, the zero vector
  const Vec at_zero = H(v1(0.0));
  CHECK(at_zero.maxCoeff() == 0.0);
  CHECK(at_zero.minCoeff() == 0.0);

  // constant cube field: q = 2, extension puts 1.0 at the slot of label 1
  const ExtendedField cube = extend(builtin_field("cube:n=1,a=1"));
  const HField Hc(cube, NormP(1.0), BoundaryMode::extension);
  CHECK(Hc.q() == 2);
  const Vec at_center = Hc(v1(0.0));
  CHECK(at_center[0] == 0.0);
  CHECK(at_center[1] == doctest::Approx(1.0));
  CHECK(class_prediction(at_center) == 2);
  CHECK(Hc.label_of(2) == 1);
}

TEST_CASE("argmax of H recovers the label wherever h is positive") {
  Rng rng(3);
  for (const char* name : {"f1", "f2", "f4", "disk"}) {
    const ExtendedField field = extend(builtin_field(name));
    const HField H(field, NormP(2.0), BoundaryMode::interior);
    for (int i = 0; i < 2000; ++i) {
      const Vec x = field.domain().sample(rng);
      const DistanceEstimate est = H.h(x);
      if (!(est.value > 10.0 * est.error_bound && est.value > 0.0)) continue;
      CHECK(class_prediction(H(x)) == H.slot_of(field.evaluate(x)));
    }
  }
}

TEST_CASE("prediction recovers the same partition after relabelling") {
  const LabelField f1 = builtin_field("f1");
  const std::map<Label, Label> m{{1, 9}, {2, 4}};
  const LabelField renamed = relabel(f1, m);
  const HField H(extend(f1), NormP(1.0), BoundaryMode::interior);
  const HField Hr(extend(renamed), NormP(1.0), BoundaryMode::interior);
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const Vec x = v1(rng.uniform(-1.0, 1.0));
    if (H.h(x).value <= 0.0) continue;
    const Label a = H.label_of(class_prediction(H(x)));
    const Label b = Hr.label_of(class_prediction(Hr(x)));
    CHECK(m.at(a) == b);
  }
}

TEST_CASE("H is empirically 1-Lipschitz on the catalog fields") {
  const ExtendedField f1 = extend(builtin_field("f1"));
  const LipschitzWitness w =
      lipschitz_check_H(f1, NormP(1.0), 100000, 5, BoundaryMode::interior);
  CHECK(w.max_ratio <= 1.0 + 1e-9);
  CHECK(w.pairs_used > 90000);

  // a same-label pair attains the constant exactly in 1D
  const HField H(f1, NormP(1.0), BoundaryMode::interior);
  const double ratio = NormP(1.0).norm(H(v1(0.2)) - H(v1(0.4))) /
                       NormP(1.0).distance(v1(0.2), v1(0.4));
  CHECK(ratio == doctest::Approx(1.0));
}

TEST_CASE("stable sets collect the points farther than eps from the boundary") {
  const ExtendedField f1 = extend(builtin_field("f1"));
  const StableSet set =
      stable_set(f1, 0.1, NormP(1.0), BoundaryMode::interior, {1000});
  CHECK_FALSE(set.empty_warning);
  CHECK(set.members.rows() > 0);
  for (Eigen::Index i = 0; i < set.members.rows(); ++i)
    CHECK(std::abs(set.members(i, 0)) > 0.1);
  // roughly the right coverage: |x| in (0.1, 1] has length 1.8 of 2
  CHECK(static_cast<double>(set.members.rows()) / 1000.0 ==
        doctest::Approx(0.9).epsilon(0.02));

  // the two-interval example: members fall in [0, 0.75) u (1.25, 2]
  const ExtendedField fl = extend(builtin_field("fl"));
  const StableSet mid =
      stable_set(fl, 0.25, NormP(1.0), BoundaryMode::interior, {1000});
  CHECK(mid.members.rows() > 0);
  for (Eigen::Index i = 0; i < mid.members.rows(); ++i) {
    const double x = mid.members(i, 0);
    CHECK((x < 0.75 || x > 1.25));
  }

  // eps above the largest distance: empty with a warning
  const StableSet none =
      stable_set(f1, 3.0, NormP(1.0), BoundaryMode::interior, {100});
  CHECK(none.empty_warning);
  CHECK(none.members.rows() == 0);

  CHECK_THROWS_AS(stable_set(f1, -1.0, NormP(1.0), BoundaryMode::interior, {10}),
                  std::invalid_argument);
}

TEST_CASE("stable sets nest as eps grows") {
  const ExtendedField f4 = extend(builtin_field("f4"));
  const StableSet small = stable_set(f4, 0.05, NormP(1.0), BoundaryMode::interior, {800});
  const StableSet big = stable_set(f4, 0.2, NormP(1.0), BoundaryMode::interior, {800});
  CHECK(big.members.rows() < small.members.rows());
  // every member of the larger-eps set appears in the smaller-eps set
  std::set<double> small_xs;
  for (Eigen::Index i = 0; i < small.members.rows(); ++i)
    small_xs.insert(small.members(i, 0));
  for (Eigen::Index i = 0; i < big.members.rows(); ++i)
    CHECK(small_xs.count(big.members(i, 0)) == 1);
}

TEST_CASE("hat functions and the rounding composition") {
  CHECK(omega(3, 3.0) == doctest::Approx(1.0));
  CHECK(omega(3, 2.5) == doctest::Approx(0.5));
  CHECK(omega(3, 4.2) == 0.0);
  CHECK(omega(3, 1.9) == 0.0);
  CHECK(omega(1, 0.0) == 0.0);
  CHECK(omega(2, 1.0) == 0.0);
  CHECK(omega(2, 3.0) == 0.0);

  const auto const_field = [](double v) {
    return [v](const VecCRef&) { return v; };
  };
  const Vec g2 = compose_G(const_field(2.0), 3, v1(0.0));
  CHECK(g2[0] == 0.0);
  CHECK(g2[1] == doctest::Approx(1.0));
  CHECK(g2[2] == 0.0);
  CHECK(class_prediction(g2) == 2);

  const Vec g25 = compose_G(const_field(2.5), 3, v1(0.0));
  CHECK(g25[0] == 0.0);
  CHECK(g25[1] == doctest::Approx(0.5));
  CHECK(g25[2] == doctest::Approx(0.5));
  CHECK(class_prediction(g25) == 2);  // first maximum wins the tie

  const Vec g0 = compose_G(const_field(0.0), 3, v1(0.0));
  CHECK(g0.maxCoeff() == 0.0);

  // integer inputs always round back to themselves
  for (int q = 1; q <= 5; ++q)
    for (int k = 1; k <= q; ++k)
      CHECK(class_prediction(compose_G(const_field(k), q, v1(0.0))) == k);
}

TEST_CASE("empirical Lipschitz lower bounds separate the relabelled fields") {
  const double L1 =
      empirical_lipschitz(extend(builtin_field("H1")), 20000, NormP(1.0), 2);
  const double L2 =
      empirical_lipschitz(extend(builtin_field("H2")), 20000, NormP(1.0), 2);
  const double L3 =
      empirical_lipschitz(extend(builtin_field("H3")), 20000, NormP(1.0), 2);
  // the gap of width 0.02 at 0 carries the whole label difference
  CHECK(L1 == doctest::Approx(50.0));
  CHECK(L2 == doctest::Approx(50000.0));
  CHECK(L3 == doctest::Approx(50000.0));

  const double Lc =
      empirical_lipschitz(extend(builtin_field("cube:n=1,a=1")), 5000, NormP(1.0), 2);
  CHECK(Lc == 0.0);

  CHECK_THROWS_AS(empirical_lipschitz(extend(builtin_field("f1")), 0, NormP(1.0), 2),
                  std::invalid_argument);
}

TEST_CASE("label surrogate equals the slot index on stable points") {
  const ExtendedField f1 = extend(builtin_field("f1"));
  const LabelSurrogate g(f1, 0.1, NormP(1.0), 0.01);
  CHECK(g.q() == 3);
  // deep in each class the surrogate sits exactly on the slot value
  CHECK(g(v1(0.5)) == doctest::Approx(3.0));
  CHECK(g(v1(-0.5)) == doctest::Approx(2.0));
  // near the step it blends towards the midpoint
  CHECK(g(v1(0.0)) == doctest::Approx(2.5).epsilon(0.05));
  // continuity along the collar
  double prev = g(v1(-0.2));
  for (double x = -0.2 + 1e-3; x <= 0.2; x += 1e-3) {
    const double cur = g(v1(x));
    CHECK(std::abs(cur - prev) < 0.05);
    prev = cur;
  }
}
