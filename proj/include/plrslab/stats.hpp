#pragma once

#include "plrslab/plrs.hpp"

#include <map>

namespace plrs {

/// Standard normal CDF, Phi(x) = erfc(-x/sqrt(2))/2, evaluated in long
/// double. Absolute error is below 1e-15, well inside the 1e-7 contract.
double normal_cdf(double x);

/// Summand-count histogram with exact big-integer frequencies plus derived
/// moments and the Kolmogorov-Smirnov distance to the standard normal after
/// standardizing by the histogram's own mean and stddev (the exact sup over
/// the steps of the empirical CDF). Zero-variance histograms are flagged
/// degenerate and report ks = 1.
struct DistributionSummary {
  std::map<long long, BigInt> histogram;
  BigInt total = 0;
  double mean = 0.0;
  double variance = 0.0;
  double stddev = 0.0;
  double ks_to_normal = 1.0;
  bool degenerate = true;
};

/// Computes moments and the KS distance from a raw histogram.
DistributionSummary summarize_histogram(std::map<long long, BigInt> histogram);

/// Count values with nonzero frequency form >= 2 contiguous runs separated
/// by at least one empty count band.
bool is_bimodal(const DistributionSummary& summary);

/// Least-squares slope/intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

/// Lossy conversion helpers for reporting; values in this project stay far
/// below long double range.
long double to_long_double(const BigInt& v);
double ratio_as_double(const BigInt& num, const BigInt& den);

}  // namespace plrs
