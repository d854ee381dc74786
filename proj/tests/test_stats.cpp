#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"

#include "blendnet/error.hpp"
#include "blendnet/stats/binomial.hpp"
#include "blendnet/stats/metrics.hpp"

using namespace blendnet;
using namespace blendnet::stats;

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

// Reference upper tail computed in 50-digit arithmetic: the first term via
// an exact product for the binomial coefficient, later terms by the ratio
// recurrence T(i+1) = T(i) * (n-i)/(i+1) * theta/(1-theta).
double exact_tail(std::int64_t n, std::int64_t x0, double theta) {
  const BigFloat t(theta);
  const BigFloat q = BigFloat(1) - t;
  BigFloat term = pow(t, static_cast<unsigned>(x0)) * pow(q, static_cast<unsigned>(n - x0));
  for (std::int64_t k = 1; k <= x0; ++k) {
    term *= BigFloat(n - x0 + k) / BigFloat(k);
  }
  BigFloat sum = term;
  for (std::int64_t i = x0; i < n; ++i) {
    term *= BigFloat(n - i) / BigFloat(i + 1) * t / q;
    sum += term;
  }
  return sum.convert_to<double>();
}

ConfusionMatrix cm_of(std::int64_t tp, std::int64_t fp, std::int64_t tn, std::int64_t fn) {
  ConfusionMatrix cm;
  cm.tp = tp;
  cm.fp = fp;
  cm.tn = tn;
  cm.fn = fn;
  return cm;
}

}  // namespace

TEST_CASE("the metrics fixture comes out exactly") {
  const MetricsReport r = metrics(cm_of(3, 1, 5, 1), 2.5);
  CHECK(r.mse == 2.5);
  REQUIRE(r.accuracy.has_value());
  REQUIRE(r.precision.has_value());
  REQUIRE(r.recall.has_value());
  REQUIRE(r.specificity.has_value());
  REQUIRE(r.f1.has_value());
  CHECK(*r.accuracy == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(*r.precision == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(*r.recall == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(*r.specificity == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(*r.f1 == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.undefined().empty());
}

TEST_CASE("metric identities hold over random confusion matrices") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<std::int64_t> count(0, 50);

  for (int trial = 0; trial < 10000; ++trial) {
    ConfusionMatrix cm = cm_of(count(rng), count(rng), count(rng), count(rng));
    if (cm.total() == 0) cm.tp = 1;
    const MetricsReport r = metrics(cm);

    REQUIRE(r.accuracy.has_value());
    const double total = static_cast<double>(cm.total());
    CHECK(*r.accuracy == doctest::Approx((cm.tp + cm.tn) / total).epsilon(1e-12));

    // accuracy decomposes into the class-conditional rates
    if (r.recall && r.specificity) {
      const double pos = static_cast<double>(cm.tp + cm.fn);
      const double neg = static_cast<double>(cm.tn + cm.fp);
      CHECK(*r.accuracy ==
            doctest::Approx((*r.recall * pos + *r.specificity * neg) / total).epsilon(1e-12));
    }

    // f1 is the harmonic mean of precision and recall
    if (r.f1) {
      REQUIRE(r.precision.has_value());
      REQUIRE(r.recall.has_value());
      CHECK(*r.f1 == doctest::Approx(2.0 * *r.precision * *r.recall /
                                     (*r.precision + *r.recall)).epsilon(1e-12));
      CHECK(*r.f1 >= 0.0);
      CHECK(*r.f1 <= 1.0);
    }

    // an unset metric means its denominator was zero, never the reverse
    CHECK(r.precision.has_value() == (cm.tp + cm.fp > 0));
    CHECK(r.recall.has_value() == (cm.tp + cm.fn > 0));
    CHECK(r.specificity.has_value() == (cm.tn + cm.fp > 0));
    CHECK(r.f1.has_value() ==
          (r.precision && r.recall && *r.precision + *r.recall > 0.0));
  }
}

TEST_CASE("zero denominators stay unset without poisoning the rest") {
  // no predicted positives: precision undefined, the rest fine
  const MetricsReport no_pred_pos = metrics(cm_of(0, 0, 6, 2));
  CHECK(!no_pred_pos.precision.has_value());
  CHECK(no_pred_pos.recall.has_value());
  CHECK(no_pred_pos.specificity.has_value());
  CHECK(!no_pred_pos.f1.has_value());
  CHECK(no_pred_pos.undefined() == std::vector<std::string>{"precision", "f1"});

  // no actual positives: recall undefined
  const MetricsReport no_pos = metrics(cm_of(0, 3, 5, 0));
  CHECK(!no_pos.recall.has_value());
  CHECK(no_pos.precision.has_value());

  // no actual or predicted negatives: specificity undefined
  const MetricsReport no_neg = metrics(cm_of(4, 0, 0, 2));
  CHECK(!no_neg.specificity.has_value());

  // precision and recall both zero: harmonic mean has nothing to average
  const MetricsReport all_wrong = metrics(cm_of(0, 3, 0, 2));
  REQUIRE(all_wrong.precision.has_value());
  REQUIRE(all_wrong.recall.has_value());
  CHECK(*all_wrong.precision == 0.0);
  CHECK(*all_wrong.recall == 0.0);
  CHECK(!all_wrong.f1.has_value());
}

TEST_CASE("confusion counting maps label pairs to the four cells") {
  using data::Label;
  const std::vector<Label> pred = {Label::Incompatible, Label::Incompatible, Label::Compatible,
                                   Label::Compatible};
  const std::vector<Label> truth = {Label::Incompatible, Label::Compatible, Label::Incompatible,
                                    Label::Compatible};
  const ConfusionMatrix cm = confusion(pred, truth);
  CHECK(cm.tp == 1);
  CHECK(cm.fp == 1);
  CHECK(cm.fn == 1);
  CHECK(cm.tn == 1);

  try {
    confusion(pred, {Label::Compatible});
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LengthMismatch);
  }
  try {
    confusion({}, {});
    FAIL("expected Empty");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Empty);
  }
}

TEST_CASE("binomial tail matches 50-digit arithmetic on small cases") {
  for (const std::int64_t n : {1, 2, 3, 5, 10, 17, 20}) {
    for (std::int64_t x0 = 1; x0 <= n; ++x0) {
      for (const double theta : {0.01, 0.1, 0.3, 0.5, 0.7307, 0.9, 0.99}) {
        const double got = binom_pvalue(n, x0, theta);
        const double want = exact_tail(n, x0, theta);
        CHECK(std::abs(got - want) <= 1e-12);
      }
    }
  }
}

TEST_CASE("binomial tail matches 50-digit arithmetic at full test-set scale") {
  const double p1 = binom_pvalue(1530, 1159, 0.7307);
  const double p2 = binom_pvalue(1530, 1159, 0.7387);
  const double e1 = exact_tail(1530, 1159, 0.7307);
  const double e2 = exact_tail(1530, 1159, 0.7387);
  CHECK(std::abs(p1 - e1) / e1 <= 1e-9);
  CHECK(std::abs(p2 - e2) / e2 <= 1e-9);

  // the published operating points: about 0.01 and 0.05
  CHECK(p1 > 0.007);
  CHECK(p1 < 0.013);
  CHECK(p2 > 0.042);
  CHECK(p2 < 0.058);
}

TEST_CASE("binomial tail edge cases and monotonicity") {
  CHECK(binom_pvalue(100, 0, 0.5) == 1.0);
  CHECK(binom_pvalue(1, 1, 0.25) == doctest::Approx(0.25).epsilon(1e-12));

  // the tail grows as the hypothesized rate grows
  double previous = 0.0;
  for (double theta = 0.05; theta < 1.0; theta += 0.05) {
    const double p = binom_pvalue(40, 25, theta);
    CHECK(p > previous);
    previous = p;
  }

  CHECK_THROWS_AS(binom_pvalue(0, 0, 0.5), Error);
  CHECK_THROWS_AS(binom_pvalue(10, -1, 0.5), Error);
  CHECK_THROWS_AS(binom_pvalue(10, 11, 0.5), Error);
  CHECK_THROWS_AS(binom_pvalue(10, 5, 0.0), Error);
  CHECK_THROWS_AS(binom_pvalue(10, 5, 1.0), Error);
}

TEST_CASE("significance inversion round-trips through the p-value") {
  for (const double alpha : {0.01, 0.05, 0.2, 0.5}) {
    const double theta = theta_at_significance(1530, 1159, alpha);
    CHECK(binom_pvalue(1530, 1159, theta) == doctest::Approx(alpha).epsilon(1e-6));
    CHECK(std::abs(binom_pvalue(1530, 1159, theta) - alpha) < 1e-8);
  }

  // small-sample round trip
  const double theta = theta_at_significance(20, 15, 0.1);
  CHECK(std::abs(binom_pvalue(20, 15, theta) - 0.1) < 1e-8);

  try {
    theta_at_significance(20, 15, 0.0);
    FAIL("expected NoRoot");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoRoot);
  }
  try {
    theta_at_significance(20, 15, 1.0);
    FAIL("expected NoRoot");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoRoot);
  }
  CHECK_THROWS_AS(theta_at_significance(20, 0, 0.05), Error);
  CHECK_THROWS_AS(theta_at_significance(0, 0, 0.05), Error);
}
