#include "plrslab/plrs.hpp"

#include <algorithm>
#include <sstream>

namespace plrs {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::empty_coefficients: return "EmptyCoefficients";
    case errc::non_positive_leading: return "NonPositiveLeading";
    case errc::non_positive_trailing: return "NonPositiveTrailing";
    case errc::negative_coefficient: return "NegativeCoefficient";
    case errc::zero_or_negative_input: return "ZeroOrNegativeInput";
    case errc::non_monotone_plrs: return "NonMonotonePlrs";
    case errc::budget_too_small: return "BudgetTooSmall";
    case errc::no_legal_decomposition: return "NoLegalDecomposition";
    case errc::multiple_legal_decompositions: return "MultipleLegalDecompositions";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::run_exceeds_window: return "RunExceedsWindow";
    case errc::h_out_of_range: return "HOutOfRange";
    case errc::too_small: return "TooSmall";
    case errc::infeasible: return "Infeasible";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::z_not_greater_than_l: return "ZNotGreaterThanL";
    case errc::window_too_small: return "WindowTooSmall";
    case errc::table_too_short: return "TableTooShort";
    case errc::no_convergence: return "NoConvergence";
    case errc::internal_invariant: return "InternalInvariant";
  }
  return "UnknownError";
}

Plrs Plrs::validate(const std::vector<long long>& coeffs) {
  if (coeffs.empty()) fail(errc::empty_coefficients, "need at least one coefficient");
  for (long long c : coeffs) {
    if (c < 0) fail(errc::negative_coefficient, "coefficients must be non-negative");
  }
  if (coeffs.front() <= 0) fail(errc::non_positive_leading, "c_1 must be positive");
  if (coeffs.back() <= 0) fail(errc::non_positive_trailing, "c_L must be positive");

  if (coeffs.size() == 1 && coeffs.front() == 1)
    fail(errc::infeasible, "G_{n+1} = G_n is constant, not strictly increasing");

  Plrs p;
  p.coeffs_.reserve(coeffs.size());
  for (long long c : coeffs) {
    if (c > 1'000'000) fail(errc::too_small, "coefficient exceeds supported range");
    p.coeffs_.push_back(static_cast<int>(c));
  }
  p.max_coeff_ = *std::max_element(p.coeffs_.begin(), p.coeffs_.end());
  p.monotone_ = std::is_sorted(p.coeffs_.rbegin(), p.coeffs_.rend()) && p.coeffs_.back() >= 1;
  return p;
}

std::string Plrs::to_string() const {
  std::ostringstream out;
  out << "plrs(";
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out << ",";
    out << coeffs_[i];
  }
  out << ")";
  return out.str();
}

SequenceCache::SequenceCache(Plrs plrs) : plrs_(std::move(plrs)) {
  terms_.push_back(1);                       // G_1
  max_tail_.push_back(std::vector<BigInt>(static_cast<size_t>(plrs_.length()), BigInt(0)));
}

void SequenceCache::ensure_terms(int n) {
  const int L = plrs_.length();
  while (static_cast<int>(terms_.size()) < n) {
    const int have = static_cast<int>(terms_.size());  // computing G_{have+1}
    BigInt next = 0;
    if (have < L) {
      // G_{n+1} = c_1 G_n + ... + c_n G_1 + 1 for n < L
      for (int i = 1; i <= have; ++i) next += BigInt(plrs_.coeff(i)) * terms_[static_cast<size_t>(have - i)];
      next += 1;
    } else {
      for (int i = 1; i <= L; ++i) next += BigInt(plrs_.coeff(i)) * terms_[static_cast<size_t>(have - i)];
    }
    terms_.push_back(std::move(next));
  }
}

const BigInt& SequenceCache::term(int n) {
  if (n < 1) fail(errc::zero_or_negative_input, "term index must be >= 1");
  ensure_terms(n);
  return terms_[static_cast<size_t>(n) - 1];
}

int SequenceCache::find_top_index(const BigInt& value) {
  if (value < 1) fail(errc::zero_or_negative_input, "find_top_index needs a positive value");
  while (terms_.back() <= value) ensure_terms(static_cast<int>(terms_.size()) + 8);
  // first term > value, then step back one
  auto it = std::upper_bound(terms_.begin(), terms_.end(), value);
  return static_cast<int>(it - terms_.begin());
}

const BigInt& SequenceCache::max_tail(int positions, int state) {
  const int L = plrs_.length();
  while (static_cast<int>(max_tail_.size()) <= positions) {
    const int j = static_cast<int>(max_tail_.size());  // filling row for j positions
    const BigInt& g = term(j);
    std::vector<BigInt> row(static_cast<size_t>(L));
    for (int st = 0; st < L; ++st) {
      const int hi = plrs_.max_allowed(st);
      BigInt best = max_tail_[static_cast<size_t>(j) - 1][0];  // a = 0 < c, or see below
      if (plrs_.coeff(st + 1) == 0) {
        // a zero coefficient continues the block match
        best = max_tail_[static_cast<size_t>(j) - 1][static_cast<size_t>(st) + 1];
      }
      for (int a = 1; a <= hi; ++a) {
        const int ns = plrs_.next_state(st, a);
        BigInt cand = g * a + max_tail_[static_cast<size_t>(j) - 1][static_cast<size_t>(ns)];
        if (cand > best) best = std::move(cand);
      }
      row[static_cast<size_t>(st)] = std::move(best);
    }
    max_tail_.push_back(std::move(row));
  }
  return max_tail_[static_cast<size_t>(positions)][static_cast<size_t>(state)];
}

Decomposition Decomposition::from_entries(std::vector<Entry> entries, SequenceCache& cache) {
  Decomposition d;
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index < 1) fail(errc::zero_or_negative_input, "entry index must be >= 1");
    if (entries[i].coeff < 1) fail(errc::zero_or_negative_input, "entry coefficient must be >= 1");
    if (i > 0 && entries[i].index == entries[i - 1].index)
      fail(errc::internal_invariant, "duplicate index in entries");
    d.value_ += cache.term(entries[i].index) * entries[i].coeff;
  }
  d.entries_ = std::move(entries);
  return d;
}

long long Decomposition::summand_count() const {
  long long s = 0;
  for (const Entry& e : entries_) s += e.coeff;
  return s;
}

std::vector<int> Decomposition::gap_lengths() const {
  std::vector<int> gaps;
  if (entries_.size() < 2) return gaps;
  gaps.reserve(entries_.size() - 1);
  for (size_t i = 1; i < entries_.size(); ++i) {
    gaps.push_back(entries_[i].index - entries_[i - 1].index - 1);
  }
  return gaps;
}

std::vector<int> Decomposition::dense() const {
  std::vector<int> out(static_cast<size_t>(top_index()), 0);
  for (const Entry& e : entries_) out[static_cast<size_t>(e.index) - 1] = e.coeff;
  return out;
}

std::vector<int> Decomposition::dense_top_down(int top) const {
  const int t = std::max(top, top_index());
  std::vector<int> out(static_cast<size_t>(t), 0);
  for (const Entry& e : entries_) out[static_cast<size_t>(t - e.index)] = e.coeff;
  return out;
}

void decompose_greedy_into(SequenceCache& cache, const BigInt& value, std::vector<Entry>& out) {
  if (value < 0) fail(errc::zero_or_negative_input, "cannot decompose a negative value");
  if (!cache.plrs().monotone())
    fail(errc::non_monotone_plrs,
         "greedy correctness requires c_1 >= ... >= c_L >= 1; use decompose_general");
  out.clear();
  if (value.is_zero()) return;

  BigInt rem = value;
  int j = cache.find_top_index(rem);
  while (!rem.is_zero()) {
    const BigInt& g = cache.term(j);
    if (g <= rem) {
      BigInt a = rem / g;
      rem -= a * g;
      out.push_back(Entry{j, static_cast<int>(a)});
    }
    --j;
  }
  std::reverse(out.begin(), out.end());
}

Decomposition decompose_greedy(SequenceCache& cache, const BigInt& value) {
  std::vector<Entry> entries;
  decompose_greedy_into(cache, value, entries);
  return Decomposition::from_entries(std::move(entries), cache);
}

namespace {

// Depth-first search over top-down coefficient strings with exact
// value-range pruning. Exactly one branch completes (uniqueness theorem);
// exhaustion signals a bug upstream.
bool search_general(SequenceCache& cache, int pos, int state, BigInt& rem,
                    std::vector<Entry>& out) {
  if (pos == 0) return rem.is_zero();
  const Plrs& p = cache.plrs();
  const BigInt& g = cache.term(pos);
  int hi = p.max_allowed(state);
  if (g <= rem) {
    BigInt cap = rem / g;
    if (cap < hi) hi = static_cast<int>(cap);
  } else {
    hi = 0;
  }
  for (int a = hi; a >= 0; --a) {
    const int ns = p.next_state(state, a);
    if (a > 0) rem -= g * a;
    if (rem <= cache.max_tail(pos - 1, ns)) {
      if (a > 0) out.push_back(Entry{pos, a});
      if (search_general(cache, pos - 1, ns, rem, out)) return true;
      if (a > 0) out.pop_back();
    }
    if (a > 0) rem += g * a;
  }
  return false;
}

}  // namespace

void decompose_general_into(SequenceCache& cache, const BigInt& value, int index_budget,
                            std::vector<Entry>& out) {
  if (value < 0) fail(errc::zero_or_negative_input, "cannot decompose a negative value");
  if (index_budget < 1) fail(errc::budget_too_small, "index budget must be >= 1");
  if (value >= cache.term(index_budget + 1))
    fail(errc::budget_too_small, "value not below G_{budget+1}");
  out.clear();
  if (value.is_zero()) return;

  BigInt rem = value;
  if (!search_general(cache, index_budget, 0, rem, out))
    fail(errc::no_legal_decomposition, "search exhausted; legality tables are inconsistent");
  std::reverse(out.begin(), out.end());
}

Decomposition decompose_general(SequenceCache& cache, const BigInt& value, int index_budget) {
  std::vector<Entry> entries;
  decompose_general_into(cache, value, index_budget, entries);
  Decomposition result = Decomposition::from_entries(std::move(entries), cache);
  if (result.value() != value)
    fail(errc::internal_invariant, "reconstructed value mismatch in decompose_general");
  return result;
}

Decomposition decompose(SequenceCache& cache, const BigInt& value) {
  if (cache.plrs().monotone()) return decompose_greedy(cache, value);
  if (value.is_zero()) return Decomposition();
  return decompose_general(cache, value, cache.find_top_index(value));
}

bool is_legal(const Plrs& plrs, std::span<const int> dense_top_down) {
  size_t i = 0;
  while (i < dense_top_down.size() && dense_top_down[i] == 0) ++i;  // leading padding
  int state = 0;
  for (; i < dense_top_down.size(); ++i) {
    const int a = dense_top_down[i];
    if (a < 0 || a > plrs.max_allowed(state)) return false;
    state = plrs.next_state(state, a);
  }
  return true;  // every state accepts: the string may end mid-prefix
}

bool is_legal(const Plrs& plrs, const Decomposition& decomp) {
  const std::vector<int> dense = decomp.dense_top_down();
  return is_legal(plrs, std::span<const int>(dense));
}

std::vector<Entry> LegalView::entries() const {
  std::vector<Entry> out;
  for (size_t j = 0; j < dense.size(); ++j) {
    if (dense[j] != 0) out.push_back(Entry{static_cast<int>(j) + 1, dense[j]});
  }
  return out;
}

std::vector<Decomposition> enumerate_legal_collect(SequenceCache& cache, int max_index) {
  std::vector<Decomposition> out;
  enumerate_legal(cache, max_index, [&](const LegalView& v) {
    out.push_back(Decomposition::from_entries(v.entries(), cache));
  });
  return out;
}

}  // namespace plrs
