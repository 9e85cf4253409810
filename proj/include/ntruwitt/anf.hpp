#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntruwitt/bitstring.hpp"

namespace ntruwitt {

// A monomial over Boolean variables x0..x63: bit i set means x_i divides the
// monomial. Exponents never exceed 1 (x^2 = x), so a set of indices is the
// whole story. Mask 0 is the constant monomial 1.
using Monomial = std::uint64_t;

inline int monomial_degree(Monomial m) { return std::popcount(m); }

using Assignment = Bitstring;

namespace detail {

// Open-addressing parity table used to accumulate the monomials of a product.
// A slot is live only while its stamp matches the current epoch, so clearing
// between products is O(1). Capacity is always at least twice the number of
// distinct keys, which is bounded by both |a|*|b| and 2^(support size).
class ParityTable {
 public:
  void begin(std::size_t expected_distinct) {
    std::size_t want = std::bit_ceil(2 * expected_distinct + 16);
    if (want > keys_.size()) {
      keys_.assign(want, 0);
      odd_.assign(want, 0);
      stamp_.assign(want, 0);
      epoch_ = 0;
    }
    ++epoch_;
    if (epoch_ == 0) {  // stamp wrapped; invalidate everything once
      std::fill(stamp_.begin(), stamp_.end(), 0u);
      epoch_ = 1;
    }
    mask_ = keys_.size() - 1;
  }

  void toggle(std::uint64_t key) {
    std::size_t i = hash(key) & mask_;
    for (;;) {
      if (stamp_[i] != epoch_) {
        stamp_[i] = epoch_;
        keys_[i] = key;
        odd_[i] = 1;
        return;
      }
      if (keys_[i] == key) {
        odd_[i] ^= 1u;
        return;
      }
      i = (i + 1) & mask_;
    }
  }

  void extract_sorted(std::vector<std::uint64_t>& out) const {
    out.clear();
    for (std::size_t i = 0; i < keys_.size(); ++i)
      if (stamp_[i] == epoch_ && odd_[i]) out.push_back(keys_[i]);
    std::sort(out.begin(), out.end());
  }

 private:
  static std::size_t hash(std::uint64_t k) {
    return static_cast<std::size_t>((k * 0x9E3779B97F4A7C15ull) >> 13);
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint8_t> odd_;
  std::vector<std::uint32_t> stamp_;
  std::size_t mask_ = 0;
  std::uint32_t epoch_ = 0;
};

// Sort, then keep keys appearing an odd number of times (addition is mod 2).
inline void canonicalize(std::vector<std::uint64_t>& v) {
  std::sort(v.begin(), v.end());
  std::size_t out = 0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    if ((j - i) & 1u) v[out++] = v[i];
    i = j;
  }
  v.resize(out);
}

}  // namespace detail

// Boolean polynomial in algebraic normal form: an XOR of AND-monomials over
// x0..x_{N-1}. Canonical storage is a strictly ascending, duplicate-free
// vector of monomial masks; the zero polynomial is the empty vector.
class AnfPoly {
 public:
  AnfPoly() = default;

  static AnfPoly zero() { return AnfPoly(); }

  static AnfPoly one() {
    AnfPoly p;
    p.terms_.push_back(0);
    return p;
  }

  static AnfPoly constant(bool v) { return v ? one() : zero(); }

  static AnfPoly variable(int i) {
    if (i < 0 || i >= 64) throw std::invalid_argument("variable index out of range");
    AnfPoly p;
    p.terms_.push_back(Monomial{1} << i);
    return p;
  }

  static AnfPoly monomial(Monomial m) {
    AnfPoly p;
    p.terms_.push_back(m);
    return p;
  }

  // Canonicalizes: sorts and cancels repeated monomials mod 2.
  static AnfPoly from_monomials(std::vector<Monomial> ms) {
    detail::canonicalize(ms);
    AnfPoly p;
    p.terms_ = std::move(ms);
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const { return terms_.size() == 1 && terms_[0] == 0; }

  std::size_t term_count() const { return terms_.size(); }

  // Degree of the zero polynomial is 0 by convention.
  int degree() const {
    int d = 0;
    for (Monomial m : terms_) d = std::max(d, monomial_degree(m));
    return d;
  }

  const std::vector<Monomial>& monomials() const { return terms_; }

  // Union of all variable masks.
  Monomial support() const {
    Monomial s = 0;
    for (Monomial m : terms_) s |= m;
    return s;
  }

  AnfPoly operator+(const AnfPoly& o) const {
    AnfPoly out;
    out.terms_.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = o.terms_.begin(), be = o.terms_.end();
    while (a != ae && b != be) {
      if (*a < *b)
        out.terms_.push_back(*a++);
      else if (*b < *a)
        out.terms_.push_back(*b++);
      else {
        ++a;  // equal monomials cancel mod 2
        ++b;
      }
    }
    out.terms_.insert(out.terms_.end(), a, ae);
    out.terms_.insert(out.terms_.end(), b, be);
    return out;
  }

  AnfPoly& operator+=(const AnfPoly& o) {
    *this = *this + o;
    return *this;
  }

  AnfPoly operator*(const AnfPoly& o) const {
    if (is_zero() || o.is_zero()) return zero();
    if (is_one()) return o;
    if (o.is_one()) return *this;

    const std::size_t raw = terms_.size() * o.terms_.size();
    AnfPoly out;
    if (raw <= 4096) {
      std::vector<Monomial> buf;
      buf.reserve(raw);
      for (Monomial ma : terms_)
        for (Monomial mb : o.terms_) buf.push_back(ma | mb);
      detail::canonicalize(buf);
      out.terms_ = std::move(buf);
      return out;
    }

    // Distinct product monomials are limited by the joint support.
    const int s = std::popcount(support() | o.support());
    const std::size_t bound =
        s >= 63 ? raw : std::min<std::size_t>(raw, std::size_t{1} << s);
    static thread_local detail::ParityTable table;
    table.begin(bound);
    for (Monomial ma : terms_)
      for (Monomial mb : o.terms_) table.toggle(ma | mb);
    table.extract_sorted(out.terms_);
    return out;
  }

  AnfPoly& operator*=(const AnfPoly& o) {
    *this = *this * o;
    return *this;
  }

  friend bool operator==(const AnfPoly&, const AnfPoly&) = default;

 private:
  std::vector<Monomial> terms_;
};

// XOR over monomials of AND over variables. Errors when the polynomial uses a
// variable the assignment does not cover.
inline bool anf_eval(const AnfPoly& p, const Assignment& a) {
  const Monomial in_range =
      a.size >= 64 ? ~Monomial{0} : (Monomial{1} << a.size) - 1;
  bool acc = false;
  for (Monomial m : p.monomials()) {
    if (m & ~in_range)
      throw std::invalid_argument("assignment shorter than polynomial variable space");
    acc ^= (m & a.bits) == m;
  }
  return acc;
}

struct AnfStats {
  int degree = 0;
  std::size_t term_count = 0;
};

inline AnfStats anf_stats(const AnfPoly& p) {
  return AnfStats{p.degree(), p.term_count()};
}

// p with x_var fixed to value, over the remaining variables.
inline AnfPoly substitute(const AnfPoly& p, int var, bool value) {
  const Monomial bit = Monomial{1} << var;
  std::vector<Monomial> keep;
  keep.reserve(p.term_count());
  for (Monomial m : p.monomials()) {
    if (!(m & bit))
      keep.push_back(m);
    else if (value)
      keep.push_back(m & ~bit);
  }
  return AnfPoly::from_monomials(std::move(keep));
}

// Multiply by one monomial (variable-set union; merged terms cancel mod 2).
inline AnfPoly mul_monomial(const AnfPoly& p, Monomial m) {
  if (m == 0) return p;
  std::vector<Monomial> buf;
  buf.reserve(p.term_count());
  for (Monomial t : p.monomials()) buf.push_back(t | m);
  return AnfPoly::from_monomials(std::move(buf));
}

inline std::string render_monomial(Monomial m) {
  if (m == 0) return "1";
  std::string s;
  for (int i = 0; i < 64; ++i) {
    if ((m >> i) & 1u) {
      if (!s.empty()) s += '*';
      s += 'x';
      s += std::to_string(i);
    }
  }
  return s;
}

// Monomials ascending as masks, joined by " + "; the zero polynomial is "0".
inline std::string render_anf(const AnfPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (Monomial m : p.monomials()) {
    if (!s.empty()) s += " + ";
    s += render_monomial(m);
  }
  return s;
}

namespace detail {

inline Monomial parse_monomial(const std::string& tok) {
  if (tok == "1") return 0;
  Monomial m = 0;
  std::size_t i = 0;
  while (i < tok.size()) {
    if (tok[i] != 'x')
      throw std::invalid_argument("bad monomial token: " + tok);
    ++i;
    std::size_t j = i;
    while (j < tok.size() && tok[j] >= '0' && tok[j] <= '9') ++j;
    if (j == i) throw std::invalid_argument("bad monomial token: " + tok);
    const int var = std::stoi(tok.substr(i, j - i));
    if (var < 0 || var >= 64)
      throw std::invalid_argument("variable index out of range: " + tok);
    m |= Monomial{1} << var;
    i = j;
    if (i < tok.size()) {
      if (tok[i] != '*')
        throw std::invalid_argument("bad monomial token: " + tok);
      ++i;
    }
  }
  return m;
}

}  // namespace detail

inline AnfPoly parse_anf(const std::string& text) {
  std::vector<Monomial> ms;
  std::size_t pos = 0;
  bool saw_zero = false;
  while (pos <= text.size()) {
    std::size_t next = text.find('+', pos);
    std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    // trim
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    tok = b == std::string::npos ? std::string() : tok.substr(b, e - b + 1);
    if (tok.empty())
      throw std::invalid_argument("empty term in polynomial text");
    if (tok == "0")
      saw_zero = true;
    else
      ms.push_back(detail::parse_monomial(tok));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (saw_zero && !ms.empty())
    throw std::invalid_argument("0 may only appear as the whole polynomial");
  return AnfPoly::from_monomials(std::move(ms));
}

}  // namespace ntruwitt
