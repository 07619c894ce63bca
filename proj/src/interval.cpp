#include "plrslab/interval.hpp"

#include "plrslab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace plrs::interval {

namespace {

// Longest run of unoccupied indices within [window_lo, window_hi], given
// ascending entries.
int max_zero_run_in_window(const std::vector<Entry>& entries, int window_lo, int window_hi) {
  int best = 0;
  int cursor = window_lo;  // first index not yet covered
  for (const Entry& e : entries) {
    if (e.index < window_lo) continue;
    if (e.index > window_hi) break;
    best = std::max(best, e.index - cursor);
    cursor = e.index + 1;
  }
  best = std::max(best, window_hi - cursor + 1);
  return best;
}

void run_partitioned(std::uint64_t items, int threads,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || items < 2) {
    fn(0, 0, items);
    return;
  }
  const std::uint64_t chunk = (items + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(items, w * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(items, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([=, &fn] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

// Pre-materializes everything a read-only decomposition walk may touch.
void warm_cache(SequenceCache& cache, const BigInt& max_value) {
  if (max_value < 1) {
    cache.ensure_terms(2);
    return;
  }
  const int top = cache.find_top_index(max_value);
  cache.ensure_terms(top + 2);
  if (!cache.plrs().monotone()) cache.max_tail(top + 1, 0);
}

void decompose_into(SequenceCache& cache, const BigInt& value, std::vector<Entry>& out) {
  if (cache.plrs().monotone()) {
    decompose_greedy_into(cache, value, out);
  } else {
    out.clear();
    if (value.is_zero()) return;
    decompose_general_into(cache, value, cache.find_top_index(value), out);
  }
}

long long count_of(const std::vector<Entry>& entries) {
  long long s = 0;
  for (const Entry& e : entries) s += e.coeff;
  return s;
}

std::map<long long, BigInt> raw_count_histogram(SequenceCache& cache, int k) {
  if (k < 1) fail(errc::zero_or_negative_input, "k must be >= 1");
  const Plrs& p = cache.plrs();
  const int states = p.length();
  const int positions = k - 1;
  const int max_count = positions * p.max_coeff();

  // dp[state][count] = number of top-down strings read so far; all states
  // accept, so the histogram is the column sum at the end.
  std::vector<std::vector<BigInt>> dp(static_cast<size_t>(states),
                                      std::vector<BigInt>(static_cast<size_t>(max_count) + 1));
  dp[0][0] = 1;
  for (int pos = 0; pos < positions; ++pos) {
    std::vector<std::vector<BigInt>> next(static_cast<size_t>(states),
                                          std::vector<BigInt>(static_cast<size_t>(max_count) + 1));
    const int reached = pos * p.max_coeff();
    for (int st = 0; st < states; ++st) {
      for (int cnt = 0; cnt <= reached; ++cnt) {
        const BigInt& ways = dp[static_cast<size_t>(st)][static_cast<size_t>(cnt)];
        if (ways.is_zero()) continue;
        const int hi = p.max_allowed(st);
        for (int a = 0; a <= hi; ++a) {
          next[static_cast<size_t>(p.next_state(st, a))][static_cast<size_t>(cnt + a)] += ways;
        }
      }
    }
    dp.swap(next);
  }

  std::map<long long, BigInt> hist;
  for (int st = 0; st < states; ++st) {
    for (int cnt = 0; cnt <= max_count; ++cnt) {
      const BigInt& ways = dp[static_cast<size_t>(st)][static_cast<size_t>(cnt)];
      if (!ways.is_zero()) hist[cnt] += ways;
    }
  }
  return hist;
}

}  // namespace

IntervalParams IntervalParams::validated(int n, int alpha, int q) {
  if (alpha < 1) fail(errc::infeasible, "alpha must be >= 1");
  if (q < 2 || q % 2 != 0) fail(errc::infeasible, "q must be even and >= 2");
  if (alpha + q >= n) fail(errc::infeasible, "need alpha + q < n");
  return IntervalParams{n, alpha, q};
}

int default_alpha(int n) {
  if (n < 4) fail(errc::too_small, "default_alpha needs n >= 4");
  return n / 2;
}

int default_q(int n, int alpha) {
  if (alpha < 1 || alpha >= n) fail(errc::infeasible, "need 1 <= alpha < n");
  const int q0 = 2 * static_cast<int>(std::floor((std::cbrt(static_cast<double>(alpha)) + 2.0 + 1e-9) / 2.0));
  if (q0 < n - alpha) return q0;
  int q = n - alpha - 1;
  if (q % 2 != 0) --q;
  if (q < 2) fail(errc::infeasible, "no even q with 2 <= q < n - alpha");
  return q;
}

BlockSplit block_split(const Decomposition& decomp, const IntervalParams& params) {
  if (decomp.top_index() > params.n)
    fail(errc::index_out_of_range, "decomposition top index exceeds n");
  BlockSplit out;
  out.n = params.n;
  out.alpha = params.alpha;
  out.q = params.q;
  for (const Entry& e : decomp.entries()) {
    if (e.index <= params.alpha) {
      out.c1.push_back(e);
      out.s1 += e.coeff;
    } else if (e.index <= params.alpha + params.q) {
      out.c2.push_back(e);
      out.s2 += e.coeff;
    } else {
      out.c3.push_back(e);
      out.s3 += e.coeff;
    }
  }
  return out;
}

bool has_zero_run(const BlockSplit& split, int run_length) {
  if (run_length < 1) fail(errc::zero_or_negative_input, "run_length must be >= 1");
  if (run_length > split.q)
    fail(errc::run_exceeds_window, "zero-run length exceeds the C2 window");
  return max_zero_run_in_window(split.c2, split.alpha + 1, split.alpha + split.q) >= run_length;
}

BigInt truncate_m0(const Decomposition& decomp, int alpha, SequenceCache& cache) {
  BigInt m0 = 0;
  for (const Entry& e : decomp.entries()) {
    if (e.index > alpha - 1) break;
    m0 += cache.term(e.index) * e.coeff;
  }
  return m0;
}

BigInt t_map(const BigInt& m, const BigInt& h, SequenceCache& cache, int alpha) {
  const BigInt& g_alpha = cache.term(alpha);
  if (h < 0 || h >= g_alpha) fail(errc::h_out_of_range, "need 0 <= h < G_alpha");
  BigInt t = truncate_m0(decompose(cache, m), alpha, cache) + h;
  if (t >= g_alpha) t -= g_alpha;
  return t;
}

DistributionSummary histogram_over_interval(SequenceCache& cache, const BigInt& lo,
                                            const BigInt& length, const WalkSpec& walk) {
  if (lo < 0) fail(errc::zero_or_negative_input, "interval start must be >= 0");
  if (length < 1) fail(errc::zero_or_negative_input, "interval length must be >= 1");
  warm_cache(cache, lo + length);

  const int top = cache.find_top_index(lo + length);
  const size_t count_cap = static_cast<size_t>(top + 2) * static_cast<size_t>(cache.plrs().max_coeff()) + 1;

  std::uint64_t items = 0;
  if (walk.exhaustive) {
    if (length > walk.budget)
      fail(errc::budget_exceeded, "exhaustive interval walk exceeds the budget; use sampling");
    items = length.convert_to<std::uint64_t>();
  } else {
    items = walk.samples;
    if (items == 0) fail(errc::zero_or_negative_input, "need at least one sample");
  }

  const int threads = std::max(1, walk.threads);
  std::vector<std::vector<std::uint64_t>> tallies(static_cast<size_t>(threads),
                                                  std::vector<std::uint64_t>(count_cap, 0));

  run_partitioned(items, threads, [&](int worker, std::uint64_t begin, std::uint64_t end) {
    std::vector<Entry> scratch;
    auto& tally = tallies[static_cast<size_t>(worker)];
    if (walk.exhaustive) {
      BigInt x = lo + begin;
      for (std::uint64_t i = begin; i < end; ++i, ++x) {
        decompose_into(cache, x, scratch);
        ++tally[static_cast<size_t>(count_of(scratch))];
      }
    } else {
      for (std::uint64_t i = begin; i < end; ++i) {
        BitStream bits(walk.seed, i);
        const BigInt x = lo + uniform_below(bits, length);
        decompose_into(cache, x, scratch);
        ++tally[static_cast<size_t>(count_of(scratch))];
      }
    }
  });

  std::map<long long, BigInt> hist;
  for (const auto& tally : tallies) {
    for (size_t c = 0; c < tally.size(); ++c) {
      if (tally[c]) hist[static_cast<long long>(c)] += tally[c];
    }
  }
  return summarize_histogram(std::move(hist));
}

DistributionSummary exact_count_distribution(SequenceCache& cache, int k) {
  return summarize_histogram(raw_count_histogram(cache, k));
}

DistributionSummary exact_interval_distribution(SequenceCache& cache, int n) {
  if (n < 1) fail(errc::zero_or_negative_input, "n must be >= 1");
  std::map<long long, BigInt> upper = raw_count_histogram(cache, n + 1);
  const std::map<long long, BigInt> lower = raw_count_histogram(cache, n);
  for (const auto& [cnt, freq] : lower) {
    auto it = upper.find(cnt);
    if (it == upper.end() || it->second < freq)
      fail(errc::internal_invariant, "interval histogram subtraction went negative");
    it->second -= freq;
    if (it->second.is_zero()) upper.erase(it);
  }
  return summarize_histogram(std::move(upper));
}

SubintervalReport subinterval_experiment(const BigInt& m, const IntervalParams& params,
                                         SequenceCache& cache, const WalkSpec& walk) {
  SubintervalReport report;
  report.m = m;
  report.params = params;
  report.outside_theorem_hypothesis = !cache.plrs().monotone();

  if (m < cache.term(params.n) || m >= cache.term(params.n + 1))
    fail(errc::index_out_of_range, "m must lie in [G_n, G_{n+1})");

  const Plrs& plrs = cache.plrs();
  const int run_needed = 3 * plrs.length();
  const Decomposition dm = decompose(cache, m);
  const BlockSplit split = block_split(dm, params);

  if (params.q < run_needed) {
    report.window_too_small = true;
    return report;
  }
  report.zero_run_found = has_zero_run(split, run_needed);
  if (!report.zero_run_found) return report;

  const BigInt& g_alpha = cache.term(params.alpha);
  warm_cache(cache, m + g_alpha);

  const std::uint64_t m0 = truncate_m0(dm, params.alpha, cache).convert_to<std::uint64_t>();
  const long long s3m = split.s3;
  const std::vector<Entry>& c3m = split.c3;
  const int high_cut = params.alpha + params.q;
  const long long shift_cap = static_cast<long long>(plrs.max_coeff()) * params.q;

  report.exhaustive = g_alpha <= walk.budget;

  std::map<long long, BigInt> hist;
  bool c3_ok = true;
  long long shift_min = shift_cap, shift_max = -1;
  std::uint64_t violations = 0;

  std::vector<Entry> dx, dt;
  const auto visit = [&](const BigInt& x, std::uint64_t t) {
    decompose_into(cache, x, dx);
    const long long sx = count_of(dx);

    // C3(x) must match C3(m) entry for entry.
    size_t i = dx.size();
    while (i > 0 && dx[i - 1].index > high_cut) --i;
    const size_t high_len = dx.size() - i;
    if (high_len != c3m.size() ||
        !std::equal(dx.begin() + static_cast<std::ptrdiff_t>(i), dx.end(), c3m.begin())) {
      c3_ok = false;
    }

    decompose_into(cache, BigInt(t), dt);
    const long long shift = sx - s3m - count_of(dt);
    shift_min = std::min(shift_min, shift);
    shift_max = std::max(shift_max, shift);
    if (shift < 0 || shift >= shift_cap) ++violations;
    ++hist[sx];
  };

  if (report.exhaustive) {
    const std::uint64_t count = g_alpha.convert_to<std::uint64_t>();
    std::vector<bool> seen(count, false);
    BigInt x = m;
    std::uint64_t t = m0;
    std::uint64_t marked = 0;
    for (std::uint64_t h = 0; h < count; ++h, ++x, ++t) {
      if (t >= count) t -= count;
      visit(x, t);
      if (!seen[t]) {
        seen[t] = true;
        ++marked;
      }
    }
    report.points_walked = count;
    report.bijection_verified = (marked == count);
  } else {
    std::vector<std::uint64_t> hs, ts;
    hs.reserve(walk.samples);
    ts.reserve(walk.samples);
    for (std::uint64_t i = 0; i < walk.samples; ++i) {
      BitStream bits(walk.seed, i);
      const std::uint64_t h = uniform_below(bits, g_alpha).convert_to<std::uint64_t>();
      std::uint64_t t = m0 + h;
      const std::uint64_t count = g_alpha.convert_to<std::uint64_t>();
      if (t >= count) t -= count;
      visit(m + h, t);
      hs.push_back(h);
      ts.push_back(t);
    }
    report.points_walked = walk.samples;
    std::sort(hs.begin(), hs.end());
    std::sort(ts.begin(), ts.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    report.bijection_verified = (hs.size() == ts.size());
  }

  report.c3_constant = c3_ok;
  report.shift_error_min = shift_min;
  report.shift_error_max = shift_max;
  report.shift_violations = violations;
  report.distribution = summarize_histogram(std::move(hist));
  return report;
}

GapProbability gap_probability_estimate(SequenceCache& cache, const IntervalParams& params,
                                        std::uint64_t samples, std::uint64_t seed, int threads) {
  if (samples < 1) fail(errc::zero_or_negative_input, "need at least one sample");
  GapProbability out;
  out.samples = samples;
  const int run_needed = 3 * cache.plrs().length();
  if (params.q < run_needed) {
    out.window_too_small = true;
    return out;
  }

  const BigInt& g_lo = cache.term(params.n);
  const BigInt range = cache.term(params.n + 1) - g_lo;
  warm_cache(cache, cache.term(params.n + 1));

  const int nthreads = std::max(1, threads);
  std::vector<std::uint64_t> hits(static_cast<size_t>(nthreads), 0);
  run_partitioned(samples, nthreads, [&](int worker, std::uint64_t begin, std::uint64_t end) {
    std::vector<Entry> scratch;
    std::uint64_t local = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      BitStream bits(seed, i);
      const BigInt m = g_lo + uniform_below(bits, range);
      decompose_into(cache, m, scratch);
      if (max_zero_run_in_window(scratch, params.alpha + 1, params.alpha + params.q) >= run_needed)
        ++local;
    }
    hits[static_cast<size_t>(worker)] = local;
  });

  for (std::uint64_t h : hits) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  return out;
}

CounterexampleInterval counterexample_interval(SequenceCache& cache, int n) {
  if (n < 4) fail(errc::too_small, "counterexample construction needs n >= 4");
  int c = 1;
  while ((c + 1) * (c + 1) * (c + 1) * (c + 1) <= n) ++c;  // floor(n^(1/4))
  int low = c;
  if ((n - low) % 2 != 0) ++low;

  CounterexampleInterval out;
  out.chain_low = low;
  BigInt lo = cache.term(2 * n);
  for (int j = n; j >= low; j -= 2) {
    lo += cache.term(j);
    ++out.chain_len;
  }
  const BigInt hi = cache.term(2 * n) + cache.term(n + 1) + cache.term(c);
  if (hi <= lo) fail(errc::infeasible, "degenerate counterexample interval");
  out.lo = std::move(lo);
  out.length = hi - out.lo;
  return out;
}

}  // namespace plrs::interval
