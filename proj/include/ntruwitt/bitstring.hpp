#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ntruwitt {

// Fixed-length bit vector with index 0 in the least significant bit.
// Carries the secret polynomials F, g and candidate variable assignments.
// Capped at 64 bits so a value fits one machine word.
struct Bitstring {
  std::uint64_t bits = 0;
  int size = 0;

  Bitstring() = default;

  Bitstring(std::uint64_t b, int n) : bits(b), size(n) {
    if (n < 0 || n > 64)
      throw std::invalid_argument("bitstring length must be in [0, 64]");
    if (n < 64)
      bits &= (std::uint64_t{1} << n) - 1;
  }

  static Bitstring zeros(int n) { return Bitstring(0, n); }

  // "0101" -> bit 0 = 0, bit 1 = 1, ...
  static Bitstring from_string(const std::string& s) {
    Bitstring out(0, static_cast<int>(s.size()));
    for (int i = 0; i < out.size; ++i) {
      if (s[static_cast<std::size_t>(i)] == '1')
        out.bits |= std::uint64_t{1} << i;
      else if (s[static_cast<std::size_t>(i)] != '0')
        throw std::invalid_argument("bitstring must contain only 0 and 1");
    }
    return out;
  }

  bool get(int i) const { return (bits >> i) & 1u; }

  void set(int i, bool v) {
    if (v)
      bits |= std::uint64_t{1} << i;
    else
      bits &= ~(std::uint64_t{1} << i);
  }

  int weight() const { return std::popcount(bits); }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(size), '0');
    for (int i = 0; i < size; ++i)
      if (get(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
  }

  friend bool operator==(const Bitstring&, const Bitstring&) = default;
};

}  // namespace ntruwitt
