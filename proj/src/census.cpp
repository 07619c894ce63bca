#include "plrslab/census.hpp"

#include <algorithm>
#include <cmath>

namespace plrs::census {

namespace {

// Counts legal strings over `positions` indices whose internal gaps stay
// below z. Scans top-down; once the pending gap can no longer be closed,
// only the all-zero completion survives.
struct GapBoundedCounter {
  const Plrs& plrs;
  int z;
  std::uint64_t count = 0;

  void descend(int pos, int state, int prev_occupied) {
    if (pos == 0) {
      ++count;
      return;
    }
    if (prev_occupied != 0 && prev_occupied - pos - 1 >= z) {
      ++count;  // every lower summand would open a gap >= z
      return;
    }
    const int hi = plrs.max_allowed(state);
    for (int a = 0; a <= hi; ++a) {
      descend(pos - 1, plrs.next_state(state, a), a > 0 ? pos : prev_occupied);
    }
  }
};

double poly_eval(const std::vector<double>& monic, double x) {
  long double acc = 0;
  for (double c : monic) acc = acc * x + static_cast<long double>(c);
  return static_cast<double>(acc);
}

}  // namespace

BigInt h_bruteforce(SequenceCache& cache, int z, int n, const BigInt& budget) {
  const Plrs& p = cache.plrs();
  if (z <= p.length()) fail(errc::z_not_greater_than_l, "need Z > L");
  if (n < 1) fail(errc::zero_or_negative_input, "n must be >= 1");
  if (cache.term(n) > budget) fail(errc::budget_exceeded, "G_n exceeds the enumeration budget");

  GapBoundedCounter counter{p, z};
  counter.descend(n - 1, 0, 0);
  return BigInt(counter.count);
}

CensusTable h_recurrence(SequenceCache& cache, int z, int n_max) {
  const Plrs& p = cache.plrs();
  const int L = p.length();
  if (z <= L) fail(errc::z_not_greater_than_l, "need Z > L");
  if (n_max < 1) fail(errc::zero_or_negative_input, "n_max must be >= 1");
  for (int i = 1; i <= L; ++i) {
    if (p.coeff(i) < 1)
      fail(errc::infeasible, "gap census requires every recurrence coefficient >= 1");
  }

  CensusTable table;
  table.plrs = p;
  table.z = z;
  table.base_rows = std::min(n_max, L + z + 1);

  std::vector<BigInt> h(static_cast<size_t>(n_max) + 1);
  for (int n = 1; n <= table.base_rows; ++n) h[static_cast<size_t>(n)] = h_bruteforce(cache, z, n);

  long long coeff_sum = 0;
  for (int i = 1; i <= L; ++i) coeff_sum += p.coeff(i);
  for (int next = table.base_rows + 1; next <= n_max; ++next) {
    const int n = next - 1;
    BigInt value = coeff_sum - 1;
    for (int l = 1; l <= L; ++l) {
      value += p.coeff(l) * (h[static_cast<size_t>(n - l + 1)] - h[static_cast<size_t>(n - l + 1 - z)]);
    }
    value += h[static_cast<size_t>(n - L + 1 - z)];
    h[static_cast<size_t>(next)] = std::move(value);
  }

  table.rows.reserve(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    CensusRow row;
    row.n = n;
    row.h = h[static_cast<size_t>(n)];
    row.g = cache.term(n);
    row.ratio = ratio_as_double(row.h, row.g);
    row.tilde = n > 1 ? BigInt(row.h - h[static_cast<size_t>(n) - 1]) : BigInt(0);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<double> g_char_poly(const Plrs& plrs) {
  std::vector<double> poly(static_cast<size_t>(plrs.length()) + 1, 0.0);
  poly[0] = 1.0;
  for (int i = 1; i <= plrs.length(); ++i) poly[static_cast<size_t>(i)] = -plrs.coeff(i);
  return poly;
}

std::vector<double> h_char_poly(const Plrs& plrs, int z) {
  if (z <= plrs.length()) fail(errc::z_not_greater_than_l, "need Z > L");
  const int L = plrs.length();
  const int d = L + z;
  std::vector<double> poly(static_cast<size_t>(d) + 1, 0.0);
  poly[0] = 1.0;
  for (int l = 1; l <= L; ++l) {
    poly[static_cast<size_t>(l)] -= plrs.coeff(l);       // degree L+z-l
    poly[static_cast<size_t>(z + l)] += plrs.coeff(l);   // degree L-l
  }
  poly[static_cast<size_t>(d)] -= 1.0;                   // constant term
  return poly;
}

double dominant_root_bisection(const Plrs& plrs) {
  const std::vector<double> poly = g_char_poly(plrs);
  long long coeff_sum = 0;
  for (int i = 1; i <= plrs.length(); ++i) coeff_sum += plrs.coeff(i);

  double lo = 1.0, hi = 1.0 + static_cast<double>(coeff_sum);
  if (poly_eval(poly, lo) >= 0.0)
    fail(errc::no_convergence, "characteristic polynomial not negative at 1");
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (poly_eval(poly, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double dominant_root_power(const std::vector<double>& monic_poly) {
  // x = 1 is always a root of the telescoped polynomial (the difference
  // equation is satisfied by constants), and it is simple because
  // p'(1) = L+Z - Z*sum(c) < 0. Deflate it, otherwise symmetric start
  // vectors can pin the iteration to the wrong eigenvalue.
  std::vector<double> poly = monic_poly;
  if (std::fabs(poly_eval(poly, 1.0)) < 1e-9) {
    std::vector<double> quotient(poly.size() - 1);
    long double carry = 0.0L;
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
      carry += poly[i];
      quotient[i] = static_cast<double>(carry);
    }
    poly = std::move(quotient);
  }

  const size_t d = poly.size() - 1;
  if (d == 0) fail(errc::no_convergence, "empty polynomial");

  // Companion matrix: top row -a_1..-a_d, ones on the subdiagonal.
  std::vector<long double> v(d), w(d, 0.0L);
  for (size_t i = 0; i < d; ++i) v[i] = 1.0L + static_cast<long double>(i);
  long double estimate = 0.0L;
  int stable = 0;
  for (int iter = 0; iter < 100000; ++iter) {
    w[0] = 0.0L;
    for (size_t j = 0; j < d; ++j) w[0] -= static_cast<long double>(poly[j + 1]) * v[j];
    for (size_t i = 1; i < d; ++i) w[i] = v[i - 1];

    long double dot_vw = 0.0L, dot_vv = 0.0L, norm = 0.0L;
    for (size_t i = 0; i < d; ++i) {
      dot_vw += v[i] * w[i];
      dot_vv += v[i] * v[i];
      norm = std::max(norm, fabsl(w[i]));
    }
    if (norm == 0.0L) fail(errc::no_convergence, "power iteration collapsed to zero");
    const long double rayleigh = dot_vw / dot_vv;
    for (size_t i = 0; i < d; ++i) v[i] = w[i] / norm;

    if (fabsl(rayleigh - estimate) < 1e-10L) {
      if (++stable >= 4) return static_cast<double>(rayleigh);
    } else {
      stable = 0;
    }
    estimate = rayleigh;
  }
  fail(errc::no_convergence, "power iteration hit the iteration cap");
}

RootReport char_poly_roots(const Plrs& plrs, int z, const CensusTable* table) {
  RootReport report;
  report.lambda = dominant_root_bisection(plrs);
  report.omega_hat = dominant_root_power(h_char_poly(plrs, z));
  if (table != nullptr && table->rows.size() >= 2) {
    const CensusRow& last = table->rows.back();
    const CensusRow& prev = table->rows[table->rows.size() - 2];
    report.empirical_rate = ratio_as_double(last.h, prev.h);
  }
  report.gap = report.lambda - report.omega_hat;
  return report;
}

DecaySummary decay_report(const CensusTable& table, const RootReport& roots) {
  const int extra = static_cast<int>(table.rows.size()) - table.base_rows;
  if (extra < 10) fail(errc::table_too_short, "need at least 10 rows beyond the base cases");

  DecaySummary out;
  out.ratios.reserve(table.rows.size());
  for (const CensusRow& row : table.rows) out.ratios.push_back(row.ratio);

  std::vector<double> xs, ys;
  const size_t start = table.rows.size() / 2;
  for (size_t i = start; i < table.rows.size(); ++i) {
    xs.push_back(static_cast<double>(table.rows[i].n));
    ys.push_back(std::log(table.rows[i].ratio));
  }
  const LineFit fit = fit_line(xs, ys);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.predicted_rate = std::log(roots.omega_hat / roots.lambda);
  out.pass = out.slope < 0.0 && std::fabs(out.slope - out.predicted_rate) <= 0.05;
  return out;
}

}  // namespace plrs::census
