#pragma once

#include "plrslab/plrs.hpp"
#include "plrslab/stats.hpp"

#include <cstdint>
#include <optional>

namespace plrs::interval {

/// Parameters of a subinterval experiment: ambient scale n (m is drawn from
/// [G_n, G_{n+1})), subinterval scale alpha (the window [m, m+G_alpha)), and
/// the even buffer width q separating the low block from the high block.
struct IntervalParams {
  int n = 0;
  int alpha = 0;
  int q = 0;

  /// Enforces alpha >= 1, q >= 2 and even, and alpha + q < n.
  static IntervalParams validated(int n, int alpha, int q);
};

/// Default subinterval scale floor(n/2); requires n >= 4.
int default_alpha(int n);

/// Default buffer width: 2*floor((cbrt(alpha)+2)/2), reduced to the largest
/// even value below n-alpha when necessary. Errors when no even q with
/// 2 <= q < n-alpha exists.
int default_q(int n, int alpha);

/// The three index slices of a decomposition: low block C1 over [1, alpha],
/// buffer C2 over [alpha+1, alpha+q], high block C3 over [alpha+q+1, n],
/// with their coefficient sums s1+s2+s3 = summand count.
struct BlockSplit {
  int n = 0;
  int alpha = 0;
  int q = 0;
  std::vector<Entry> c1, c2, c3;
  long long s1 = 0, s2 = 0, s3 = 0;
};

BlockSplit block_split(const Decomposition& decomp, const IntervalParams& params);

/// True iff the buffer window contains run_length consecutive zero
/// coefficients. run_length > q is an error rather than false, so a
/// too-narrow window cannot silently pass for a vacuous experiment.
bool has_zero_run(const BlockSplit& split, int run_length);

/// Sum of the decomposition's terms at indices <= alpha-1.
BigInt truncate_m0(const Decomposition& decomp, int alpha, SequenceCache& cache);

/// The correspondence [m, m+G_alpha) -> [0, G_alpha):
/// t(m+h) = m0+h, or m0+h-G_alpha once that reaches G_alpha.
BigInt t_map(const BigInt& m, const BigInt& h, SequenceCache& cache, int alpha);

/// How a walk over an integer range is carried out. Exhaustive mode visits
/// every point and enforces the budget; sample mode draws `samples` points
/// from per-index substreams of `seed`, so results do not depend on
/// `threads`.
struct WalkSpec {
  bool exhaustive = true;
  std::uint64_t samples = 2000;
  std::uint64_t seed = 0;
  int threads = 1;
  BigInt budget = 10'000'000;
};

/// Tally of summand counts over [lo, lo+length).
DistributionSummary histogram_over_interval(SequenceCache& cache, const BigInt& lo,
                                            const BigInt& length, const WalkSpec& walk);

/// Exact distribution of summand counts over [0, G_k), via the legality
/// automaton's counting dynamic program; total == G_k.
DistributionSummary exact_count_distribution(SequenceCache& cache, int k);

/// Exact distribution over [G_n, G_{n+1}) (histogram difference of two runs
/// of the dynamic program).
DistributionSummary exact_interval_distribution(SequenceCache& cache, int n);

/// Outcome of one subinterval experiment at a fixed m.
struct SubintervalReport {
  BigInt m;
  IntervalParams params;
  bool outside_theorem_hypothesis = false;  // non-monotone signature
  bool window_too_small = false;            // q < 3L: the gate cannot fire
  bool zero_run_found = false;
  bool c3_constant = false;
  bool bijection_verified = false;
  bool exhaustive = true;
  std::uint64_t points_walked = 0;
  long long shift_error_min = 0;
  long long shift_error_max = 0;
  std::uint64_t shift_violations = 0;
  DistributionSummary distribution;
};

/// Checks the zero-run gate (a 3L run in C2); when it fires, walks
/// x in [m, m+G_alpha) verifying that C3(x) stays constant, that t is
/// injective on the visited points, and that the summand-count shift
/// s(x) - s3(m) - s(t(x)) stays in [0, K*q); tallies s(x) into the report's
/// distribution. A failed gate short-circuits with vacuous-false fields.
SubintervalReport subinterval_experiment(const BigInt& m, const IntervalParams& params,
                                         SequenceCache& cache, const WalkSpec& walk);

struct GapProbability {
  double estimate = 0.0;
  bool window_too_small = false;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

/// Monte-Carlo estimate of the probability that a uniform m in
/// [G_n, G_{n+1}) has a 3L zero-run inside C2. Deterministic given seed;
/// independent of the thread count. q < 3L yields a structured warning with
/// estimate 0.
GapProbability gap_probability_estimate(SequenceCache& cache, const IntervalParams& params,
                                        std::uint64_t samples, std::uint64_t seed,
                                        int threads = 1);

/// The classic non-Gaussian subinterval
///   [G_{2n} + G_n + G_{n-2} + ... + G_c,  G_{2n} + G_{n+1} + G_c),
/// with c the smallest index >= floor(n^{1/4}) of n's parity. All integers
/// below G_{2n} + G_{n+1} carry the long chain of summands; the rest have
/// very few, so the summand-count histogram splits into two bands.
struct CounterexampleInterval {
  BigInt lo;
  BigInt length;
  int chain_low = 0;   // lowest chain index actually used
  int chain_len = 0;   // number of chain terms
};

CounterexampleInterval counterexample_interval(SequenceCache& cache, int n);

}  // namespace plrs::interval
