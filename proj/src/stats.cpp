#include "plrslab/stats.hpp"

#include <cmath>

namespace plrs {

double normal_cdf(double x) {
  return static_cast<double>(0.5L * erfcl(-static_cast<long double>(x) / 1.41421356237309504880L));
}

long double to_long_double(const BigInt& v) { return v.convert_to<long double>(); }

double ratio_as_double(const BigInt& num, const BigInt& den) {
  return static_cast<double>(to_long_double(num) / to_long_double(den));
}

DistributionSummary summarize_histogram(std::map<long long, BigInt> histogram) {
  DistributionSummary out;
  out.histogram = std::move(histogram);

  BigInt s0 = 0, s1 = 0, s2 = 0;
  for (const auto& [count, freq] : out.histogram) {
    s0 += freq;
    s1 += freq * count;
    s2 += freq * count * count;
  }
  out.total = s0;
  if (s0.is_zero()) return out;

  const long double n = to_long_double(s0);
  const long double mean = to_long_double(s1) / n;
  long double var = to_long_double(s2) / n - mean * mean;
  if (var < 0) var = 0;
  out.mean = static_cast<double>(mean);
  out.variance = static_cast<double>(var);
  out.stddev = static_cast<double>(sqrtl(var));

  if (out.histogram.size() < 2 || out.stddev <= 0.0) {
    out.degenerate = true;
    out.ks_to_normal = 1.0;
    return out;
  }
  out.degenerate = false;

  // Exact sup over the steps of the standardized empirical CDF: at each jump
  // compare the normal CDF with both the pre- and post-jump value.
  const long double sd = sqrtl(var);
  long double cum = 0, ks = 0;
  for (const auto& [count, freq] : out.histogram) {
    const long double before = cum / n;
    cum += to_long_double(freq);
    const long double after = cum / n;
    const long double z = (static_cast<long double>(count) - mean) / sd;
    const long double phi = 0.5L * erfcl(-z / 1.41421356237309504880L);
    ks = std::max({ks, fabsl(after - phi), fabsl(before - phi)});
  }
  out.ks_to_normal = static_cast<double>(ks);
  return out;
}

bool is_bimodal(const DistributionSummary& summary) {
  int runs = 0;
  long long prev = 0;
  bool in_run = false;
  for (const auto& [count, freq] : summary.histogram) {
    if (freq.is_zero()) continue;
    if (!in_run || count != prev + 1) ++runs;
    in_run = true;
    prev = count;
  }
  return runs >= 2;
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  LineFit fit;
  const size_t n = xs.size();
  if (n < 2 || ys.size() != n) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double d = n * sxx - sx * sx;
  if (d == 0) return fit;
  fit.slope = (n * sxy - sx * sy) / d;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace plrs
