#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ntruwitt/bitstring.hpp"

namespace ntruwitt {

struct not_invertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
  int line;
  parse_error(const std::string& what, int line_no)
      : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Public parameters of the NTRU variant: N prime, q = 2^m with m >= 4 so the
// four Witt bits exist below q, and p fixed to the polynomial 2 + X.
struct NtruParams {
  int n = 0;
  std::uint32_t q = 0;

  NtruParams() = default;

  NtruParams(int n_, std::uint32_t q_) : n(n_), q(q_) {
    if (!is_prime(n) || n < 5 || n > 64)
      throw std::invalid_argument("N must be a prime in [5, 64]");
    if (!std::has_single_bit(q) || q < 16 || q > 65536)
      throw std::invalid_argument("q must be a power of two in [16, 65536]");
  }

  int log2q() const { return std::countr_zero(q); }

  friend bool operator==(const NtruParams&, const NtruParams&) = default;
};

// Element of Z_q[X]/(X^N - 1): N coefficients, each reduced mod q.
class ZqPoly {
 public:
  ZqPoly() = default;

  explicit ZqPoly(NtruParams params)
      : params_(params), c_(static_cast<std::size_t>(params.n), 0) {}

  ZqPoly(NtruParams params, std::vector<std::uint32_t> coeffs) : params_(params), c_(std::move(coeffs)) {
    if (c_.size() != static_cast<std::size_t>(params_.n))
      throw std::invalid_argument("coefficient vector must have length N");
    for (auto& x : c_) x &= params_.q - 1;
  }

  static ZqPoly constant(NtruParams params, std::uint32_t v) {
    ZqPoly p(params);
    p.c_[0] = v & (params.q - 1);
    return p;
  }

  static ZqPoly one(NtruParams params) { return constant(params, 1); }

  // The fixed polynomial p = 2 + X.
  static ZqPoly p_poly(NtruParams params) {
    ZqPoly p(params);
    p.c_[0] = 2;
    p.c_[1] = 1;
    return p;
  }

  static ZqPoly from_bits(NtruParams params, const Bitstring& bits) {
    if (bits.size != params.n)
      throw std::invalid_argument("bitstring length must equal N");
    ZqPoly p(params);
    for (int i = 0; i < params.n; ++i) p.c_[static_cast<std::size_t>(i)] = bits.get(i);
    return p;
  }

  const NtruParams& params() const { return params_; }
  std::uint32_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::uint32_t& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }

  friend ZqPoly operator+(const ZqPoly& a, const ZqPoly& b) {
    a.check_same(b);
    ZqPoly out(a.params_);
    for (int i = 0; i < a.params_.n; ++i)
      out[i] = (a[i] + b[i]) & (a.params_.q - 1);
    return out;
  }

  friend ZqPoly operator-(const ZqPoly& a, const ZqPoly& b) {
    a.check_same(b);
    ZqPoly out(a.params_);
    for (int i = 0; i < a.params_.n; ++i)
      out[i] = (a[i] + a.params_.q - b[i]) & (a.params_.q - 1);
    return out;
  }

  friend bool operator==(const ZqPoly&, const ZqPoly&) = default;

  void check_same(const ZqPoly& o) const {
    if (!(params_ == o.params_))
      throw std::invalid_argument("parameter mismatch between ring elements");
  }

 private:
  NtruParams params_;
  std::vector<std::uint32_t> c_;
};

// Cyclic convolution: c_k = sum_{i+j = k mod N} a_i * b_j, reduced mod q.
inline ZqPoly poly_mul(const ZqPoly& a, const ZqPoly& b) {
  a.check_same(b);
  const auto& params = a.params();
  const int n = params.n;
  std::vector<std::uint64_t> acc(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    const std::uint64_t ai = a[i];
    for (int j = 0; j < n; ++j) {
      int k = i + j;
      if (k >= n) k -= n;
      acc[static_cast<std::size_t>(k)] += ai * b[j];
    }
  }
  ZqPoly out(params);
  for (int k = 0; k < n; ++k)
    out[k] = static_cast<std::uint32_t>(acc[static_cast<std::size_t>(k)]) & (params.q - 1);
  return out;
}

inline ZqPoly operator*(const ZqPoly& a, const ZqPoly& b) { return poly_mul(a, b); }

// --- GF(2)[X]/(X^N - 1) on word-wide masks (N <= 61, so X^N fits) ---
namespace gf2 {

// Carryless product, reduced by X^N = 1.
inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, int n) {
  unsigned __int128 prod = 0;
  while (a) {
    const int i = std::countr_zero(a);
    prod ^= static_cast<unsigned __int128>(b) << i;
    a &= a - 1;
  }
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  std::uint64_t lo = static_cast<std::uint64_t>(prod) & mask;
  std::uint64_t hi = static_cast<std::uint64_t>(prod >> n);
  return lo ^ hi;  // both halves have degree < n
}

inline int degree(unsigned __int128 a) {
  if (a == 0) return -1;
  const std::uint64_t hi = static_cast<std::uint64_t>(a >> 64);
  if (hi) return 64 + (63 - std::countl_zero(hi));
  return 63 - std::countl_zero(static_cast<std::uint64_t>(a));
}

// Inverse of a in GF(2)[X]/(X^N - 1) by the extended Euclidean algorithm.
// Throws not_invertible when gcd(a, X^N - 1) != 1.
inline std::uint64_t invert(std::uint64_t a, int n) {
  using u128 = unsigned __int128;
  u128 r0 = (u128{1} << n) ^ 1u;  // X^N + 1
  u128 r1 = a;
  u128 s0 = 0, s1 = 1;  // invariant: s*a = r (mod X^N + 1)
  while (r1 != 0) {
    // long division r0 = q*r1 + r, tracked on the cofactors
    u128 r = r0;
    u128 snew = s0;
    int shift;
    while ((shift = degree(r) - degree(r1)) >= 0) {
      r ^= r1 << shift;
      snew ^= s1 << shift;
    }
    r0 = r1;
    s0 = s1;
    r1 = r;
    s1 = snew;
  }
  if (r0 != 1) throw not_invertible("polynomial has no inverse mod 2");
  // cofactor degrees stay below N, so s0 fits a word
  return static_cast<std::uint64_t>(s0);
}

}  // namespace gf2

// Inverse of the bit-polynomial a in GF(2)[X]/(X^N - 1).
inline Bitstring invert_mod2(const Bitstring& a, int n) {
  if (a.size != n) throw std::invalid_argument("bit polynomial length must equal N");
  return Bitstring(gf2::invert(a.bits, n), n);
}

// Newton lifting of an inverse mod 2 to an inverse mod q = 2^m:
// v <- v*(2 - a*v), doubling the valid precision each round, so
// ceil(log2(m)) rounds starting from the mod-2 inverse.
inline ZqPoly hensel_lift_inverse(const ZqPoly& a, const Bitstring& inv2, int* iterations = nullptr) {
  const auto& params = a.params();
  // precondition: a * inv2 = 1 (mod 2)
  {
    std::uint64_t a2 = 0;
    for (int i = 0; i < params.n; ++i)
      if (a[i] & 1u) a2 |= std::uint64_t{1} << i;
    if (gf2::mul_mod(a2, inv2.bits, params.n) != 1)
      throw std::invalid_argument("inv2 is not an inverse of a mod 2");
  }
  ZqPoly v = ZqPoly::from_bits(params, inv2);
  const ZqPoly two = ZqPoly::constant(params, 2);
  int iters = 0;
  for (int prec = 1; prec < params.log2q(); prec *= 2) {
    v = v * (two - a * v);
    ++iters;
  }
  if (iterations) *iterations = iters;
  return v;
}

// Key set of the NTRU variant: f = 1 + (2+X)*F with bit polynomials F, g, and
// public key h = (2+X) * f^{-1} * g mod q. The seed that produced F and g is
// kept so every experiment can be replayed.
struct NtruKeySet {
  NtruParams params;
  Bitstring F;
  Bitstring g;
  ZqPoly f;
  ZqPoly h;
  std::uint64_t seed = 0;
  int redraws = 0;
};

// f = 1 + (2+X)*F over Z_q; coefficients are 2*F_i + F_{i-1} (+1 at i = 0).
inline ZqPoly f_from_bits(NtruParams params, const Bitstring& F) {
  ZqPoly f(params);
  for (int i = 0; i < params.n; ++i) {
    const int prev = i == 0 ? params.n - 1 : i - 1;
    f[i] = 2u * F.get(i) + F.get(prev) + (i == 0 ? 1u : 0u);
  }
  return f;
}

// Draws F and g as uniform bits from mt19937_64 (one bit per output word).
// F is redrawn whole while f = 1 + (2+X)*F stays non-invertible mod 2; g is
// drawn after F settles. Deterministic for a fixed seed.
inline NtruKeySet keygen(NtruParams params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw_bits = [&]() {
    Bitstring out = Bitstring::zeros(params.n);
    for (int i = 0; i < params.n; ++i) out.set(i, rng() & 1u);
    return out;
  };

  Bitstring F;
  Bitstring inv2;
  int redraws = 0;
  for (;;) {
    F = draw_bits();
    // f mod 2 = 1 + X*F(X), a cyclic shift of F plus the constant term
    std::uint64_t f2 = ((F.bits << 1) | (F.bits >> (params.n - 1)));
    f2 &= (std::uint64_t{1} << params.n) - 1;
    f2 ^= 1u;
    try {
      inv2 = Bitstring(gf2::invert(f2, params.n), params.n);
      break;
    } catch (const not_invertible&) {
      if (++redraws > 1000)
        throw std::runtime_error("keygen failed to find invertible f after 1000 redraws");
    }
  }
  const Bitstring g = draw_bits();

  const ZqPoly f = f_from_bits(params, F);
  const ZqPoly f_inv = hensel_lift_inverse(f, inv2);
  const ZqPoly h = ZqPoly::p_poly(params) * f_inv * ZqPoly::from_bits(params, g);

  return NtruKeySet{params, F, g, f, h, seed, redraws};
}

// --- key file: "ntru-witt-keys v1" ---

inline void write_key_file(std::ostream& os, const NtruKeySet& keys) {
  os << "ntru-witt-keys v1\n";
  os << "N " << keys.params.n << "\n";
  os << "q " << keys.params.q << "\n";
  os << "seed " << keys.seed << "\n";
  os << "F " << keys.F.to_string() << "\n";
  os << "g " << keys.g.to_string() << "\n";
  os << "h";
  for (int i = 0; i < keys.params.n; ++i) os << ' ' << keys.h[i];
  os << "\n";
}

inline NtruKeySet parse_key_file(std::istream& is) {
  int line_no = 0;
  auto next_line = [&](const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw parse_error(std::string("missing ") + what, line_no + 1);
    ++line_no;
    return line;
  };
  auto expect_field = [&](const std::string& line, const std::string& key) {
    if (line.size() < key.size() + 1 || line.compare(0, key.size(), key) != 0 || line[key.size()] != ' ')
      throw parse_error("expected `" + key + " ...`", line_no);
    return line.substr(key.size() + 1);
  };

  if (next_line("header") != "ntru-witt-keys v1")
    throw parse_error("bad key file header", line_no);

  NtruParams params;
  std::uint64_t seed = 0;
  try {
    const int n = std::stoi(expect_field(next_line("N"), "N"));
    const auto q = static_cast<std::uint32_t>(std::stoul(expect_field(next_line("q"), "q")));
    params = NtruParams(n, q);
    seed = std::stoull(expect_field(next_line("seed"), "seed"));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what(), line_no);
  } catch (const std::out_of_range& e) {
    throw parse_error(e.what(), line_no);
  }

  Bitstring F, g;
  try {
    F = Bitstring::from_string(expect_field(next_line("F"), "F"));
    g = Bitstring::from_string(expect_field(next_line("g"), "g"));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what(), line_no);
  }
  if (F.size != params.n || g.size != params.n)
    throw parse_error("F/g bitstring length must equal N", line_no);

  ZqPoly h(params);
  {
    std::istringstream hs(expect_field(next_line("h"), "h"));
    for (int i = 0; i < params.n; ++i) {
      std::uint64_t v = 0;
      if (!(hs >> v) || v >= params.q)
        throw parse_error("h needs N decimals in [0, q)", line_no);
      h[i] = static_cast<std::uint32_t>(v);
    }
    std::string rest;
    if (hs >> rest) throw parse_error("trailing data after h coefficients", line_no);
  }

  NtruKeySet keys{params, F, g, f_from_bits(params, F), h, seed, 0};
  // reject files whose contents do not satisfy f*h = (2+X)*g mod q
  if (!(keys.f * keys.h == ZqPoly::p_poly(params) * ZqPoly::from_bits(params, g)))
    throw parse_error("inconsistent key material: f*h != (2+X)*g mod q", line_no);
  return keys;
}

}  // namespace ntruwitt
