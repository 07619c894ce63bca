#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plrs {

/// Arbitrary-precision integer used for all sequence terms and values.
/// Indices and coefficients stay machine integers; only values grow.
using BigInt = boost::multiprecision::cpp_int;

enum class errc {
  empty_coefficients,
  non_positive_leading,
  non_positive_trailing,
  negative_coefficient,
  zero_or_negative_input,
  non_monotone_plrs,
  budget_too_small,
  no_legal_decomposition,
  multiple_legal_decompositions,
  index_out_of_range,
  run_exceeds_window,
  h_out_of_range,
  too_small,
  infeasible,
  budget_exceeded,
  z_not_greater_than_l,
  window_too_small,
  table_too_short,
  no_convergence,
  internal_invariant,
};

const char* errc_name(errc code) noexcept;

/// Error type carrying a symbolic code. The CLI maps codes to exit codes
/// (invalid input -> 2, budget -> 3, internal invariant -> 4).
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& detail) {
  throw error(code, detail);
}

/// A positive linear recurrence signature (L, c_1..c_L) with derived
/// constants. Immutable once validated; cheap to copy.
///
/// Legality of coefficient strings is a regular language over the digit
/// alphabet. We expose it as an automaton whose state is the length of the
/// current run matching the prefix c_1, c_2, ...: reading a == c_{state+1}
/// extends the run (dead if that would complete all L coefficients, since
/// the recurrence could then replace the block), reading a < c_{state+1}
/// closes the block and resets to state 0, and a > c_{state+1} is illegal.
/// Every state is accepting: a string may end mid-prefix.
class Plrs {
 public:
  /// Inspects an arbitrary integer list and returns a validated signature.
  static Plrs validate(const std::vector<long long>& coeffs);

  int length() const { return static_cast<int>(coeffs_.size()); }  // L
  const std::vector<int>& coeffs() const { return coeffs_; }
  int coeff(int i) const { return coeffs_[static_cast<size_t>(i) - 1]; }  // c_i, 1-based
  bool monotone() const { return monotone_; }
  int max_coeff() const { return max_coeff_; }  // K

  /// Largest coefficient readable in `state` without dying.
  int max_allowed(int state) const {
    int c = coeffs_[static_cast<size_t>(state)];
    return (state + 1 == length()) ? c - 1 : c;
  }

  /// Automaton transition; caller must keep a <= max_allowed(state).
  int next_state(int state, int a) const {
    return (a == coeffs_[static_cast<size_t>(state)]) ? state + 1 : 0;
  }

  bool operator==(const Plrs&) const = default;

  std::string to_string() const;

 private:
  std::vector<int> coeffs_;
  bool monotone_ = false;
  int max_coeff_ = 0;
};

inline Plrs validate_plrs(const std::vector<long long>& coeffs) { return Plrs::validate(coeffs); }

/// One summand group of a decomposition: coeff copies of G_index.
struct Entry {
  int index;
  int coeff;
  bool operator==(const Entry&) const = default;
};

class SequenceCache;

/// Sparse coefficient vector of a decomposition, stored ascending by index
/// (entries[k].index strictly increasing, coefficients >= 1). The paper
/// convention lists coefficients from the top index down; dense_top_down()
/// is the adapter between the two.
class Decomposition {
 public:
  Decomposition() = default;  // the empty decomposition of 0

  /// Builds from ascending entries; recomputes and caches the value.
  static Decomposition from_entries(std::vector<Entry> entries, SequenceCache& cache);

  const std::vector<Entry>& entries() const { return entries_; }
  const BigInt& value() const { return value_; }
  bool empty() const { return entries_.empty(); }
  int top_index() const { return entries_.empty() ? 0 : entries_.back().index; }

  /// Number of summands: the sum of all coefficients.
  long long summand_count() const;

  /// Runs of unoccupied indices strictly between adjacent occupied indices,
  /// listed bottom-up. Indices below the lowest and above the highest
  /// occupied index contribute nothing.
  std::vector<int> gap_lengths() const;

  /// Dense coefficients a_1..a_top, ascending by index.
  std::vector<int> dense() const;

  /// Paper-convention dense string (top index first). Pads with leading
  /// zeros up to `top` when that exceeds the decomposition's own top index.
  std::vector<int> dense_top_down(int top = 0) const;

  bool operator==(const Decomposition&) const = default;

 private:
  friend class SequenceCache;
  std::vector<Entry> entries_;
  BigInt value_ = 0;
};

inline long long summand_count(const Decomposition& d) { return d.summand_count(); }
inline std::vector<int> gap_lengths(const Decomposition& d) { return d.gap_lengths(); }

/// Terms G_1, G_2, ... of a PLRS, generated on demand, plus derived legality
/// tables. Extension is not thread-safe: one writer, or call ensure_terms()
/// before sharing read-only across threads.
class SequenceCache {
 public:
  explicit SequenceCache(Plrs plrs);

  const Plrs& plrs() const { return plrs_; }

  /// G_n (1-based); extends the cache as needed.
  const BigInt& term(int n);

  /// Grows the cache so term(1..n) are materialized.
  void ensure_terms(int n);

  /// Number of currently materialized terms.
  int materialized() const { return static_cast<int>(terms_.size()); }

  /// The unique n with G_n <= value < G_{n+1}; value must be >= 1.
  int find_top_index(const BigInt& value);

  /// Largest value of a legal coefficient string over positions j..1 when
  /// the automaton enters position j in `state`. max_tail(j, 0) == G_{j+1}-1.
  const BigInt& max_tail(int positions, int state);

 private:
  Plrs plrs_;
  std::vector<BigInt> terms_;
  std::vector<std::vector<BigInt>> max_tail_;  // [positions][state]
};

inline const BigInt& term(SequenceCache& cache, int n) { return cache.term(n); }
inline int find_top_index(SequenceCache& cache, const BigInt& value) {
  return cache.find_top_index(value);
}

/// Greedy decomposition: repeatedly subtract the largest G_j <= remainder.
/// Requires a monotone signature (c_1 >= ... >= c_L >= 1), which guarantees
/// the result is the legal decomposition. N = 0 gives the empty result.
Decomposition decompose_greedy(SequenceCache& cache, const BigInt& value);

/// Legality-aware top-down search for the unique legal decomposition of any
/// PLRS. Branches on the coefficient of the highest index and prunes by the
/// exact value range reachable from each automaton state. Requires
/// value < G_{index_budget+1}.
Decomposition decompose_general(SequenceCache& cache, const BigInt& value, int index_budget);

/// decompose_greedy when monotone, decompose_general otherwise.
Decomposition decompose(SequenceCache& cache, const BigInt& value);

/// Low-allocation variants for tight loops: clear and refill the caller's
/// buffer with ascending entries.
void decompose_greedy_into(SequenceCache& cache, const BigInt& value, std::vector<Entry>& out);
void decompose_general_into(SequenceCache& cache, const BigInt& value, int index_budget,
                            std::vector<Entry>& out);

/// Legality check per the block conditions, on a top-index-first coefficient
/// string. Leading zeros are treated as padding; the empty (or all-zero)
/// string is legal by convention and represents 0. Any negative coefficient
/// is illegal.
bool is_legal(const Plrs& plrs, std::span<const int> dense_top_down);
bool is_legal(const Plrs& plrs, const Decomposition& decomp);

/// Read-only view of the enumerator's current decomposition. `dense[j-1]`
/// is the coefficient of G_j. Valid only inside the callback.
struct LegalView {
  std::span<const int> dense;  // ascending by index, length = max_index
  const BigInt& value;
  std::vector<Entry> entries() const;
};

namespace detail {
template <typename F>
class LegalEnumerator {
 public:
  LegalEnumerator(SequenceCache& cache, int max_index, F& emit)
      : cache_(cache), plrs_(cache.plrs()), emit_(emit), dense_(static_cast<size_t>(max_index), 0) {
    cache_.ensure_terms(max_index);
  }

  void run(int max_index) {
    if (max_index < 1) fail(errc::zero_or_negative_input, "max_index must be >= 1");
    descend(max_index, 0);
  }

 private:
  void descend(int pos, int state) {
    if (pos == 0) {
      if (!value_.is_zero()) {
        emit_(LegalView{std::span<const int>(dense_), value_});
      }
      return;
    }
    const BigInt& g = cache_.term(pos);
    const int hi = plrs_.max_allowed(state);
    int a = 0;
    for (;;) {
      dense_[static_cast<size_t>(pos) - 1] = a;
      descend(pos - 1, plrs_.next_state(state, a));
      if (a == hi) break;
      ++a;
      value_ += g;
    }
    dense_[static_cast<size_t>(pos) - 1] = 0;
    if (hi > 0) value_ -= g * hi;
  }

  SequenceCache& cache_;
  const Plrs& plrs_;
  F& emit_;
  std::vector<int> dense_;
  BigInt value_ = 0;
};
}  // namespace detail

/// Streams every legal decomposition with top index <= max_index, in
/// lexicographic order of the top-down coefficient string, which is also
/// ascending value order: the values are exactly 1..G_{max_index+1}-1.
/// The zero string is not emitted.
template <typename F>
void enumerate_legal(SequenceCache& cache, int max_index, F&& emit) {
  detail::LegalEnumerator<F> e(cache, max_index, emit);
  e.run(max_index);
}

std::vector<Decomposition> enumerate_legal_collect(SequenceCache& cache, int max_index);

}  // namespace plrs
