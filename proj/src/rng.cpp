#include "plrslab/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace plrs {

BigInt uniform_below(BitStream& bits, const BigInt& bound) {
  if (bound < 1) fail(errc::zero_or_negative_input, "sampling bound must be >= 1");
  if (bound == 1) return BigInt(0);

  const unsigned bit_len = static_cast<unsigned>(msb(bound)) + 1;
  const unsigned words = (bit_len + 63) / 64;
  const unsigned top_bits = bit_len - 64 * (words - 1);
  const std::uint64_t top_mask =
      top_bits >= 64 ? ~0ULL : ((std::uint64_t{1} << top_bits) - 1);

  BigInt draw;
  do {
    draw = 0;
    for (unsigned w = 0; w < words; ++w) {
      std::uint64_t word = bits.next_word();
      if (w + 1 == words) word &= top_mask;
      draw |= BigInt(word) << (64 * w);
    }
  } while (draw >= bound);
  return draw;
}

}  // namespace plrs
