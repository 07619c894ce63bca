#pragma once

#include "plrslab/plrs.hpp"
#include "plrslab/stats.hpp"

namespace plrs::census {

/// One row of the gap census: H_n counts m in [0, G_n) whose decomposition
/// has every gap between adjacent summands below Z; tilde is the difference
/// H_n - H_{n-1} (the [G_{n-1}, G_n) share).
struct CensusRow {
  int n = 0;
  BigInt h;
  BigInt g;
  double ratio = 0.0;  // H_n / G_n
  BigInt tilde;        // H_n - H_{n-1}; 0 for the first row
};

struct CensusTable {
  Plrs plrs;
  int z = 0;
  int base_rows = 0;  // leading rows obtained by brute force
  std::vector<CensusRow> rows;
};

/// Counts m in [0, G_n) with max gap < Z by enumerating legal coefficient
/// strings (gaps tracked structurally, values never materialized). Empty and
/// single-summand decompositions qualify vacuously. Requires Z > L and
/// G_n within the enumeration budget.
BigInt h_bruteforce(SequenceCache& cache, int z, int n, const BigInt& budget = 10'000'000);

/// Brute-forces the base cases H_1..H_{L+Z+1}, then extends to n_max with
/// the telescoped difference equation
///   H_{n+1} = sum_l c_l (H_{n-l+1} - H_{n-l+1-Z}) + H_{n-L+1-Z} + (sum_l c_l - 1).
/// The trailing constant restores the decompositions that end exactly at the
/// block being classified (their tail is empty, so no gap constraint
/// applies below them); the difference sequence H~ satisfies the homogeneous
/// part exactly. Requires Z > L and every c_l >= 1.
CensusTable h_recurrence(SequenceCache& cache, int z, int n_max);

struct RootReport {
  double lambda = 0.0;          // dominant root of x^L = c_1 x^{L-1} + ... + c_L
  double omega_hat = 0.0;       // dominant root of the telescoped H-recurrence
  double empirical_rate = 0.0;  // tail ratio H_{n+1}/H_n when a table is supplied
  double gap = 0.0;             // lambda - omega_hat
};

/// Monic characteristic polynomial of the G-recurrence, highest degree
/// first: {1, -c_1, ..., -c_L}.
std::vector<double> g_char_poly(const Plrs& plrs);

/// Monic characteristic polynomial (degree L+Z) of the homogeneous
/// telescoped H-recurrence:
///   x^{L+Z} = sum_l c_l (x^{L+Z-l} - x^{L-l}) + 1.
std::vector<double> h_char_poly(const Plrs& plrs, int z);

/// Unique positive root > 1 of the G polynomial via bisection on
/// [1, 1 + sum c_i]; absolute tolerance 1e-12.
double dominant_root_bisection(const Plrs& plrs);

/// Largest-modulus eigenvalue of the companion matrix of a monic polynomial
/// via power iteration with Rayleigh-quotient estimates; absolute tolerance
/// 1e-10, iteration cap 1e5 (NoConvergence beyond that).
double dominant_root_power(const std::vector<double>& monic_poly);

/// lambda and omega_hat for (plrs, Z); empirical_rate from the table tail
/// when one is given.
RootReport char_poly_roots(const Plrs& plrs, int z, const CensusTable* table = nullptr);

/// Tail diagnostics for the exponential decay of H_n/G_n.
struct DecaySummary {
  std::vector<double> ratios;     // H_n/G_n for every table row
  double slope = 0.0;             // least-squares slope of log(ratio) over the tail half
  double intercept = 0.0;
  double predicted_rate = 0.0;    // log(omega_hat / lambda)
  bool pass = false;              // slope < 0 and |slope - predicted| <= 0.05
};

/// Requires at least 10 rows beyond the brute-forced base cases.
DecaySummary decay_report(const CensusTable& table, const RootReport& roots);

}  // namespace plrs::census
