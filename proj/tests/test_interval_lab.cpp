#include "plrslab/interval.hpp"

#include "plrslab/rng.hpp"
#include "plrslab/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace plrs;
using namespace plrs::interval;

namespace {

// Quadrature oracle for the normal CDF: composite Simpson over the density,
// independent of the erfc-based implementation.
double normal_cdf_by_quadrature(double x) {
  const double lo = -10.0;
  const int steps = 20000;  // even
  const double h = (x - lo) / steps;
  auto density = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double acc = density(lo) + density(x);
  for (int i = 1; i < steps; ++i) acc += density(lo + h * i) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

std::map<long long, BigInt> histogram_by_enumeration(SequenceCache& cache, int k) {
  std::map<long long, BigInt> hist;
  hist[0] = 1;  // zero has the empty decomposition
  enumerate_legal(cache, k - 1, [&](const LegalView& v) {
    long long s = 0;
    for (int a : v.dense) s += a;
    ++hist[s];
  });
  return hist;
}

}  // namespace

TEST_CASE("default_alpha halves n") {
  CHECK(default_alpha(40) == 20);
  CHECK(default_alpha(45) == 22);
  CHECK(default_alpha(100) == 50);
  CHECK_THROWS_WITH_AS(default_alpha(3), doctest::Contains("TooSmall"), error);
}

TEST_CASE("default_q follows the even cube-root rule") {
  CHECK(default_q(40, 20) == 4);
  CHECK(default_q(200, 100) == 6);
  CHECK_THROWS_WITH_AS(default_q(10, 8), doctest::Contains("Infeasible"), error);
}

TEST_CASE("block_split slices by index ranges") {
  SequenceCache fib(validate_plrs({1, 1}));
  const Decomposition m = Decomposition::from_entries({{3, 1}, {15, 1}, {30, 1}}, fib);
  const IntervalParams params = IntervalParams::validated(30, 14, 4);
  const BlockSplit split = block_split(m, params);
  CHECK(split.c1 == std::vector<Entry>{{3, 1}});
  CHECK(split.c2 == std::vector<Entry>{{15, 1}});
  CHECK(split.c3 == std::vector<Entry>{{30, 1}});
  CHECK(split.s1 == 1);
  CHECK(split.s2 == 1);
  CHECK(split.s3 == 1);

  const BlockSplit empty = block_split(Decomposition(), params);
  CHECK(empty.s1 + empty.s2 + empty.s3 == 0);

  CHECK_THROWS_WITH_AS(
      block_split(Decomposition::from_entries({{31, 1}}, fib), params),
      doctest::Contains("IndexOutOfRange"), error);
}

TEST_CASE("block partition preserves the summand count") {
  SequenceCache s321(validate_plrs({3, 2, 1}));
  const IntervalParams params = IntervalParams::validated(12, 5, 4);
  enumerate_legal(s321, 12, [&](const LegalView& v) {
    const Decomposition d = Decomposition::from_entries(v.entries(), s321);
    const BlockSplit split = block_split(d, params);
    CHECK(split.s1 + split.s2 + split.s3 == d.summand_count());
  });
}

TEST_CASE("has_zero_run inspects the dense window") {
  SequenceCache fib(validate_plrs({1, 1}));
  const IntervalParams params = IntervalParams::validated(40, 10, 8);
  // C2 spans indices 11..18; a single summand at 17 leaves a 6-run at 11..16.
  const Decomposition a = Decomposition::from_entries({{17, 1}, {20, 1}}, fib);
  CHECK(has_zero_run(block_split(a, params), 6));

  // 11..16 occupied at 11 and 14: runs of length 2 only.
  const IntervalParams params6 = IntervalParams::validated(40, 10, 6);
  const Decomposition b = Decomposition::from_entries({{11, 1}, {14, 1}}, fib);
  CHECK_FALSE(has_zero_run(block_split(b, params6), 3));

  const IntervalParams params4 = IntervalParams::validated(40, 10, 4);
  CHECK_THROWS_WITH_AS(has_zero_run(block_split(b, params4), 6),
                       doctest::Contains("RunExceedsWindow"), error);
}

TEST_CASE("truncate_m0 keeps indices below alpha") {
  SequenceCache fib(validate_plrs({1, 1}));
  const Decomposition m = Decomposition::from_entries({{3, 1}, {15, 1}, {30, 1}}, fib);
  CHECK(truncate_m0(m, 14, fib) == 3);
  CHECK(truncate_m0(Decomposition::from_entries({{20, 1}}, fib), 14, fib) == 0);
  const Decomposition small = Decomposition::from_entries({{2, 1}, {5, 1}}, fib);
  CHECK(truncate_m0(small, 6, fib) == small.value());
}

TEST_CASE("t_map evaluates both branches at the wrap boundary") {
  SequenceCache fib(validate_plrs({1, 1}));
  // alpha = 15, G_15 = 987; m = G_20 + G_3 has truncation m0 = 3.
  const BigInt m = fib.term(20) + 3;
  CHECK(t_map(m, 983, fib, 15) == 986);
  CHECK(t_map(m, 984, fib, 15) == 0);
  CHECK(t_map(fib.term(20), 5, fib, 15) == 5);  // m0 = 0 keeps h fixed
  CHECK_THROWS_WITH_AS(t_map(m, 987, fib, 15), doctest::Contains("HOutOfRange"), error);
}

TEST_CASE("t_map is a bijection onto [0, G_alpha)") {
  SequenceCache fib(validate_plrs({1, 1}));
  const BigInt m = fib.term(30) + 40;  // m0 = 40
  std::set<long long> image;
  for (long long h = 0; h < 89; ++h) {
    image.insert(t_map(m, h, fib, 10).convert_to<long long>());
  }
  CHECK(image.size() == 89);
  CHECK(*image.begin() == 0);
  CHECK(*image.rbegin() == 88);
}

TEST_CASE("normal_cdf matches symmetry, the quantile fixture, and quadrature") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  for (double x : {0.3, 0.9, 1.7, 2.4}) {
    CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(std::fabs(normal_cdf(1.959964) - 0.975) < 1e-6);
  for (double x : {-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0}) {
    CHECK(std::fabs(normal_cdf(x) - normal_cdf_by_quadrature(x)) < 1e-7);
  }
}

TEST_CASE("histogram over [0, G_5) matches the hand enumeration") {
  SequenceCache fib(validate_plrs({1, 1}));
  const DistributionSummary summary = histogram_over_interval(fib, 0, 8, WalkSpec{});
  REQUIRE(summary.histogram.size() == 3);
  CHECK(summary.histogram.at(0) == 1);
  CHECK(summary.histogram.at(1) == 4);
  CHECK(summary.histogram.at(2) == 3);
  CHECK(summary.total == 8);
}

TEST_CASE("singleton interval is degenerate but harmless") {
  SequenceCache fib(validate_plrs({1, 1}));
  const DistributionSummary one = histogram_over_interval(fib, 100, 1, WalkSpec{});
  CHECK(one.degenerate);
  CHECK(one.ks_to_normal == 1.0);
  CHECK(one.variance == 0.0);
}

TEST_CASE("exhaustive walk budget is enforced") {
  SequenceCache fib(validate_plrs({1, 1}));
  WalkSpec tight;
  tight.budget = 1000;
  CHECK_THROWS_WITH_AS(histogram_over_interval(fib, 0, 2000, tight),
                       doctest::Contains("BudgetExceeded"), error);
}

TEST_CASE("exact_count_distribution matches enumeration on every test system") {
  for (const auto& sig :
       std::vector<std::vector<long long>>{{1, 1}, {2, 3, 1}, {3, 2, 1}, {1, 1, 1}, {1, 0, 1}}) {
    SequenceCache cache(validate_plrs(sig));
    int k = 1;
    while (cache.term(k + 1) <= 200000 && k < 18) ++k;
    for (int i = 2; i <= k; i += 3) {
      const DistributionSummary dp = exact_count_distribution(cache, i);
      CHECK(dp.total == cache.term(i));
      CHECK(dp.histogram == histogram_by_enumeration(cache, i));
    }
    const DistributionSummary full = exact_count_distribution(cache, k);
    CHECK(full.histogram == histogram_by_enumeration(cache, k));
  }
}

TEST_CASE("exact distribution of [0, G_5) is the frozen histogram") {
  SequenceCache fib(validate_plrs({1, 1}));
  const DistributionSummary d = exact_count_distribution(fib, 5);
  CHECK(d.total == 8);
  CHECK(d.histogram.at(0) == 1);
  CHECK(d.histogram.at(1) == 4);
  CHECK(d.histogram.at(2) == 3);
}

TEST_CASE("exact distribution agrees with the exhaustive walk") {
  SequenceCache s231(validate_plrs({2, 3, 1}));
  const DistributionSummary walk = histogram_over_interval(s231, 0, s231.term(9), WalkSpec{});
  const DistributionSummary dp = exact_count_distribution(s231, 9);
  CHECK(walk.histogram == dp.histogram);
}

TEST_CASE("KS to the normal shrinks from k=100 to k=400") {
  for (const auto& sig : std::vector<std::vector<long long>>{{1, 1}, {3, 2, 1}}) {
    SequenceCache cache(validate_plrs(sig));
    const double ks100 = exact_count_distribution(cache, 100).ks_to_normal;
    const double ks400 = exact_count_distribution(cache, 400).ks_to_normal;
    CHECK(ks400 < ks100);
    MESSAGE("ks(100) = ", ks100, ", ks(400) = ", ks400);
  }
}

TEST_CASE("interval distribution mean tracks n/(phi^2+1)") {
  SequenceCache fib(validate_plrs({1, 1}));
  const DistributionSummary d = exact_interval_distribution(fib, 25);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(std::fabs(d.mean - 25.0 / (phi * phi + 1.0)) <= 2.0);
  CHECK(d.total == fib.term(26) - fib.term(25));
}

TEST_CASE("interval distribution equals the brute-force interval walk") {
  SequenceCache fib(validate_plrs({1, 1}));
  const DistributionSummary brute =
      histogram_over_interval(fib, fib.term(12), fib.term(13) - fib.term(12), WalkSpec{});
  const DistributionSummary dp = exact_interval_distribution(fib, 12);
  CHECK(brute.histogram == dp.histogram);
}

TEST_CASE("subinterval experiment at m = G_40 verifies every lemma gate") {
  SequenceCache fib(validate_plrs({1, 1}));
  const IntervalParams params = IntervalParams::validated(40, 20, 8);
  const SubintervalReport report = subinterval_experiment(fib.term(40), params, fib, WalkSpec{});
  CHECK_FALSE(report.outside_theorem_hypothesis);
  CHECK_FALSE(report.window_too_small);
  CHECK(report.zero_run_found);
  CHECK(report.c3_constant);
  CHECK(report.bijection_verified);
  CHECK(report.exhaustive);
  CHECK(report.points_walked == 10946);  // G_20
  CHECK(report.shift_error_min >= 0);
  CHECK(report.shift_error_max < 8);  // K q = 8
  CHECK(report.shift_violations == 0);
  CHECK(report.distribution.total == 10946);
}

TEST_CASE("subinterval experiment gates on the zero run") {
  SequenceCache fib(validate_plrs({1, 1}));
  const IntervalParams params = IntervalParams::validated(40, 20, 8);
  // C2 spans 21..28; occupying 22, 25, 28 caps every zero run at 2.
  const BigInt m = fib.term(40) + fib.term(28) + fib.term(25) + fib.term(22);
  const SubintervalReport report = subinterval_experiment(m, params, fib, WalkSpec{});
  CHECK_FALSE(report.zero_run_found);
  CHECK_FALSE(report.c3_constant);
  CHECK(report.points_walked == 0);

  const IntervalParams narrow = IntervalParams::validated(40, 20, 4);
  const SubintervalReport blocked = subinterval_experiment(m, narrow, fib, WalkSpec{});
  CHECK(blocked.window_too_small);
  CHECK_FALSE(blocked.zero_run_found);

  CHECK_THROWS_WITH_AS(subinterval_experiment(5, params, fib, WalkSpec{}),
                       doctest::Contains("IndexOutOfRange"), error);
}

TEST_CASE("passing walks agree with t on the low prefix and with m on the high block") {
  SequenceCache fib(validate_plrs({1, 1}));
  const int alpha = 14, q = 6, n = 30;
  const BigInt m = fib.term(30) + fib.term(13);  // C2 (15..20) all zero
  const IntervalParams params = IntervalParams::validated(n, alpha, q);
  const SubintervalReport report = subinterval_experiment(m, params, fib, WalkSpec{});
  REQUIRE(report.zero_run_found);
  REQUIRE(report.c3_constant);

  const BigInt g_alpha = fib.term(alpha);
  for (BigInt h = 0; h < g_alpha; ++h) {
    const BigInt x = m + h;
    const Decomposition dx = decompose(fib, x);
    const Decomposition dt = decompose(fib, t_map(m, h, fib, alpha));
    std::vector<Entry> low_x, low_t, high_x;
    for (const Entry& e : dx.entries()) {
      if (e.index < alpha) low_x.push_back(e);
      if (e.index > alpha + q) high_x.push_back(e);
    }
    for (const Entry& e : dt.entries()) {
      if (e.index < alpha) low_t.push_back(e);
    }
    CHECK(low_x == low_t);
    CHECK(high_x == std::vector<Entry>{{30, 1}});
  }
}

TEST_CASE("gap probability warns when the window cannot hold the run") {
  SequenceCache fib(validate_plrs({1, 1}));
  const IntervalParams params = IntervalParams::validated(40, 20, 4);
  const GapProbability gp = gap_probability_estimate(fib, params, 50, 1);
  CHECK(gp.window_too_small);
  CHECK(gp.estimate == 0.0);
}

TEST_CASE("gap probability is reproducible and grows with the window") {
  SequenceCache fib(validate_plrs({1, 1}));
  const IntervalParams wide = IntervalParams::validated(200, 100, 30);
  const IntervalParams narrow = IntervalParams::validated(60, 30, 10);
  const GapProbability a = gap_probability_estimate(fib, wide, 300, 7);
  const GapProbability b = gap_probability_estimate(fib, wide, 300, 7);
  CHECK(a.hits == b.hits);
  const GapProbability c = gap_probability_estimate(fib, wide, 300, 7, 4);
  CHECK(a.hits == c.hits);  // thread count cannot change the draw
  const GapProbability d = gap_probability_estimate(fib, narrow, 300, 7);
  CHECK(a.estimate >= d.estimate - 0.05);
  MESSAGE("gap probability q=30: ", a.estimate, ", q=10: ", d.estimate);
}

TEST_CASE("sampled histograms are reproducible and thread-independent") {
  SequenceCache fib(validate_plrs({1, 1}));
  WalkSpec spec;
  spec.exhaustive = false;
  spec.samples = 500;
  spec.seed = 42;
  const DistributionSummary a = histogram_over_interval(fib, fib.term(50), fib.term(30), spec);
  const DistributionSummary b = histogram_over_interval(fib, fib.term(50), fib.term(30), spec);
  CHECK(a.histogram == b.histogram);
  spec.threads = 4;
  const DistributionSummary c = histogram_over_interval(fib, fib.term(50), fib.term(30), spec);
  CHECK(a.histogram == c.histogram);
}

TEST_CASE("counterexample interval splits the histogram into two bands") {
  SequenceCache fib(validate_plrs({1, 1}));
  const CounterexampleInterval ce = counterexample_interval(fib, 16);
  CHECK(ce.lo == fib.term(32) + 2583);
  CHECK(ce.length == 3);
  const DistributionSummary hist = histogram_over_interval(fib, ce.lo, ce.length, WalkSpec{});
  CHECK(hist.histogram.at(2) == 1);
  CHECK(hist.histogram.at(3) == 1);
  CHECK(hist.histogram.at(9) == 1);
  CHECK(is_bimodal(hist));
  CHECK(hist.ks_to_normal > 0.1);
}

TEST_CASE("uniform_below is exact and in range") {
  BitStream bits(123, 0);
  const BigInt bound = BigInt("123456789012345678901234567890");
  for (int i = 0; i < 200; ++i) {
    const BigInt draw = uniform_below(bits, bound);
    CHECK(draw >= 0);
    CHECK(draw < bound);
  }
  BitStream one_a(9, 4), one_b(9, 4);
  CHECK(uniform_below(one_a, bound) == uniform_below(one_b, bound));
}
