#include <doctest.h>

#include <cmath>
#include <limits>

#include "matpg/metrics.hpp"
#include "matpg/rng.hpp"

using namespace matpg;

TEST_CASE("auc_difficulty closed forms") {
  CHECK(auc_difficulty({{10, 10, 10, 10, 10}, {0, 0, 0, 0, 0}}) == 5.0);
  CHECK(auc_difficulty({{1, 2, 3}, {0.5, 0.5, 0.5}}) == doctest::Approx(1.5));
  // sigma == mu cancels every term
  CHECK(auc_difficulty({{2, 4, 8}, {2, 4, 8}}) == 0.0);
  CHECK_THROWS_AS(auc_difficulty({{1, 0}, {0, 0}}), MetricError);
  CHECK_THROWS_AS(auc_difficulty({{}, {}}), MetricError);
}

TEST_CASE("auc_difficulty is homogeneous of degree zero") {
  const TrainingCurve curve{{3, 5, 9, 12}, {1, 0.5, 2, 1}};
  const double base = auc_difficulty(curve);
  for (double k : {2.0, 0.25, 16.0}) {
    TrainingCurve scaled = curve;
    for (double& v : scaled.mean) {
      v *= k;
    }
    for (double& v : scaled.stddev) {
      v *= k;
    }
    CHECK(auc_difficulty(scaled) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("normalize_difficulty reproduces the reference coefficients") {
  const std::vector<double> aucs = {29.7, 26.0, 20.6, 16.3, 10.4};
  const std::vector<double> coefficients = normalize_difficulty(aucs);
  const std::vector<double> expected = {1.00, 0.88, 0.69, 0.55, 0.35};
  REQUIRE(coefficients.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(coefficients[i] == doctest::Approx(expected[i]).epsilon(0.01));
  }
  CHECK(normalize_difficulty(std::vector<double>{7.0}) == std::vector<double>{1.0});
  CHECK(normalize_difficulty(std::vector<double>{3.0, 3.0, 3.0}) ==
        std::vector<double>{1.0, 1.0, 1.0});
  CHECK_THROWS_AS(normalize_difficulty(std::vector<double>{-1.0, -2.0}), MetricError);
}

TEST_CASE("welch_t known values") {
  SUBCASE("identical samples: t = 0, p = 1") {
    const std::vector<double> a = {1, 2, 3, 4};
    const WelchResult r = welch_t(a, a);
    CHECK(r.t == 0.0);
    CHECK(r.p == 1.0);
  }
  SUBCASE("shifted unit-variance samples match the frozen oracle") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {2, 3, 4, 5, 6};
    const WelchResult r = welch_t(a, b);
    CHECK(r.t == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.df == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.p == doctest::Approx(0.34659350708733416).epsilon(1e-10));
    CHECK(std::abs(r.p - 0.3466) < 1e-3);
  }
  SUBCASE("widely separated samples") {
    const std::vector<double> a = {0, 0.1};
    const std::vector<double> b = {100, 100.1};
    CHECK(welch_t(a, b).p < 1e-6);
  }
  SUBCASE("unequal sizes match the frozen oracle") {
    const std::vector<double> a = {1.2, 3.4, 2.2, 5.1, 0.3, 2.9};
    const std::vector<double> b = {2.0, 4.5, 3.3, 6.1};
    const WelchResult r = welch_t(a, b);
    CHECK(r.t == doctest::Approx(-1.3093213890210837).epsilon(1e-12));
    CHECK(r.p == doctest::Approx(0.23528381272939847).epsilon(1e-9));
  }
  SUBCASE("degenerate zero variance") {
    const std::vector<double> equal_a = {2, 2};
    const std::vector<double> equal_b = {2, 2};
    CHECK(welch_t(equal_a, equal_b).p == 1.0);
    const std::vector<double> other = {3, 3};
    CHECK(welch_t(equal_a, other).p == 0.0);
  }
  CHECK_THROWS_AS(welch_t(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                  MetricError);
}

TEST_CASE("welch_t antisymmetry") {
  RngStream rng(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> a(3 + rng.index(10));
    std::vector<double> b(3 + rng.index(10));
    for (double& v : a) {
      v = rng.uniform(-5.0, 5.0);
    }
    for (double& v : b) {
      v = rng.uniform(-5.0, 5.0);
    }
    const WelchResult ab = welch_t(a, b);
    const WelchResult ba = welch_t(b, a);
    CHECK(ab.t == -ba.t);
    CHECK(ab.p == ba.p);
    CHECK(ab.df == ba.df);
    CHECK(ab.p >= 0.0);
    CHECK(ab.p <= 1.0);
  }
}

TEST_CASE("cohens_d known values and properties") {
  SUBCASE("identical samples give zero") {
    const std::vector<double> a = {1, 2, 3};
    CHECK(cohens_d(a, a) == 0.0);
  }
  SUBCASE("a shift of exactly one pooled standard deviation gives |d| = 1") {
    const std::vector<double> a = {0, 1, 2};  // sd = 1
    const std::vector<double> b = {1, 2, 3};
    CHECK(cohens_d(a, b) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(cohens_d(b, a) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero pooled deviation with distinct means explodes") {
    const std::vector<double> a = {2, 2};
    const std::vector<double> b = {3, 3};
    CHECK(cohens_d(a, b) == -std::numeric_limits<double>::infinity());
    CHECK(cohens_d(b, a) == std::numeric_limits<double>::infinity());
  }
  SUBCASE("tiny jitter grows |d| without bound") {
    double previous = 0.0;
    for (double eps : {1e-1, 1e-3, 1e-6}) {
      const std::vector<double> a = {0.0, eps};
      const std::vector<double> b = {1.0, 1.0 + eps};
      const double d = std::abs(cohens_d(a, b));
      CHECK(d > previous);
      previous = d;
    }
  }
}

TEST_CASE("cohens_d antisymmetry and scale invariance") {
  RngStream rng(9);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> a(4 + rng.index(8));
    std::vector<double> b(4 + rng.index(8));
    for (double& v : a) {
      v = rng.uniform(-3.0, 3.0);
    }
    for (double& v : b) {
      v = rng.uniform(-3.0, 3.0);
    }
    const double d = cohens_d(a, b);
    CHECK(cohens_d(b, a) == -d);
    // exact for power-of-two scalings
    std::vector<double> ka = a;
    std::vector<double> kb = b;
    for (double& v : ka) {
      v *= 4.0;
    }
    for (double& v : kb) {
      v *= 4.0;
    }
    CHECK(cohens_d(ka, kb) == d);
    // approximate for arbitrary positive scalings
    const double k = rng.uniform(0.1, 10.0);
    ka = a;
    kb = b;
    for (double& v : ka) {
      v *= k;
    }
    for (double& v : kb) {
      v *= k;
    }
    CHECK(cohens_d(ka, kb) == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("bonferroni") {
  CHECK(bonferroni(0.05, 10) == 0.005);
  CHECK(bonferroni(0.05, 1) == 0.05);
  CHECK(bonferroni(0.01, 4) == 0.0025);
  CHECK_THROWS_AS(bonferroni(0.05, 0), MetricError);
}

TEST_CASE("student_t_cdf matches frozen reference points") {
  CHECK(student_t_cdf(-1.0, 8.0) == doctest::Approx(0.17329675354366708).epsilon(1e-10));
  CHECK(student_t_cdf(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(student_t_cdf(2.0, 10.0) + student_t_cdf(-2.0, 10.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  // I_x(a, b) = 1 - I_{1-x}(b, a)
  const double x = 0.3;
  CHECK(regularized_incomplete_beta(2.5, 1.5, x) ==
        doctest::Approx(1.0 - regularized_incomplete_beta(1.5, 2.5, 1.0 - x))
            .epsilon(1e-12));
}

TEST_CASE("cross_task_matrix normalizes by the evaluated task's baseline") {
  const std::vector<std::vector<double>> raw = {{10.0, 1.0}, {2.0, 20.0}};
  const std::vector<double> baselines = {10.0, 20.0};
  const CrossTaskMatrix m = cross_task_matrix(raw, baselines);
  CHECK(m.normalized_at(0, 0) == 1.0);
  CHECK(m.normalized_at(0, 1) == doctest::Approx(0.05));
  CHECK(m.normalized_at(1, 0) == doctest::Approx(0.2));
  CHECK(m.normalized_at(1, 1) == 1.0);
  CHECK(m.raw_at(1, 0) == 2.0);

  SUBCASE("zero off-diagonal raw scores normalize to zero") {
    const CrossTaskMatrix z =
        cross_task_matrix({{5.0, 0.0}, {0.0, 4.0}}, std::vector<double>{5.0, 4.0});
    CHECK(z.normalized_at(0, 1) == 0.0);
    CHECK(z.normalized_at(1, 0) == 0.0);
  }
  SUBCASE("zero baselines mark cells undefined") {
    const CrossTaskMatrix z =
        cross_task_matrix({{5.0, 1.0}, {1.0, 0.0}}, std::vector<double>{5.0, 0.0});
    CHECK(std::isnan(z.normalized_at(0, 1)));
    CHECK(std::isnan(z.normalized_at(1, 1)));
    CHECK(!std::isnan(z.normalized_at(0, 0)));
  }
  CHECK_THROWS_AS(cross_task_matrix({{1.0}}, std::vector<double>{1.0, 2.0}),
                  MetricError);
}

TEST_CASE("p-values stay in [0, 1] across random inputs") {
  RngStream rng(123);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> a(2 + rng.index(20));
    std::vector<double> b(2 + rng.index(20));
    for (double& v : a) {
      v = rng.uniform(-100.0, 100.0);
    }
    for (double& v : b) {
      v = rng.uniform(-100.0, 100.0);
    }
    const WelchResult r = welch_t(a, b);
    REQUIRE(r.p >= 0.0);
    REQUIRE(r.p <= 1.0);
  }
}
