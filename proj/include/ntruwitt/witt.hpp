#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ntruwitt {

// Component ring of a Witt vector: any commutative ring of characteristic 2
// with idempotent elements where they stand for Boolean values. Two
// realizations are used: a plain bit and an ANF polynomial.
template <class R>
concept boolean_ring = std::regular<R> && requires(const R& a, const R& b) {
  { R::zero() } -> std::convertible_to<R>;
  { R::one() } -> std::convertible_to<R>;
  { a + b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
};

// The field with two elements.
struct Bit {
  std::uint8_t v = 0;

  static Bit zero() { return Bit{0}; }
  static Bit one() { return Bit{1}; }

  friend Bit operator+(Bit a, Bit b) { return Bit{static_cast<std::uint8_t>(a.v ^ b.v)}; }
  friend Bit operator*(Bit a, Bit b) { return Bit{static_cast<std::uint8_t>(a.v & b.v)}; }
  friend bool operator==(Bit, Bit) = default;
};

// Witt vector truncated to 4 components, identified with residues mod 16 via
// [a0,a1,a2,a3] <-> a0 + 2*a1 + 4*a2 + 8*a3. The ring laws below are the
// transported addition and multiplication of Z_16, so they hold verbatim over
// any Boolean component ring.
template <boolean_ring R>
struct WittVec {
  std::array<R, 4> b{R::zero(), R::zero(), R::zero(), R::zero()};

  WittVec() = default;
  WittVec(R b0, R b1, R b2, R b3) : b{std::move(b0), std::move(b1), std::move(b2), std::move(b3)} {}

  static WittVec zero() { return WittVec(); }
  static WittVec one() { return WittVec(R::one(), R::zero(), R::zero(), R::zero()); }

  friend bool operator==(const WittVec&, const WittVec&) = default;
};

inline WittVec<Bit> witt_from_residue(unsigned r) {
  if (r >= 16) throw std::out_of_range("Witt residue must be in [0, 16)");
  return WittVec<Bit>(Bit{static_cast<std::uint8_t>(r & 1u)},
                      Bit{static_cast<std::uint8_t>((r >> 1) & 1u)},
                      Bit{static_cast<std::uint8_t>((r >> 2) & 1u)},
                      Bit{static_cast<std::uint8_t>((r >> 3) & 1u)});
}

inline unsigned witt_to_residue(const WittVec<Bit>& w) {
  return static_cast<unsigned>(w.b[0].v) | static_cast<unsigned>(w.b[1].v) << 1 |
         static_cast<unsigned>(w.b[2].v) << 2 | static_cast<unsigned>(w.b[3].v) << 3;
}

// Sum law S(a, b):
//   S0 = a0 + b0
//   S1 = a0*b0 + a1 + b1
//   S2 = a0*b0*(a1 + b1) + a1*b1 + a2 + b2
//   S3 = a0*b0*(a1 + b1)*(a2 + b2) + a1*b1*(a2 + b2) + a2*b2 + a3 + b3
// (S3 is grouped here by the carry chain; expanded it is the eight-term law.)
template <boolean_ring R>
WittVec<R> witt_add(const WittVec<R>& a, const WittVec<R>& v) {
  const R c = a.b[0] * v.b[0];
  const R u = a.b[1] + v.b[1];
  const R w = a.b[1] * v.b[1];
  const R t = a.b[2] + v.b[2];
  const R r = c * u + w;  // carry into the third bit
  return WittVec<R>(a.b[0] + v.b[0], c + u, r + t, r * t + a.b[2] * v.b[2] + a.b[3] + v.b[3]);
}

// Product law P(a, b):
//   P0 = a0*b0
//   P1 = a0*b1 + a1*b0
//   P2 = a0*b0*a1*b1 + a0*b2 + a1*b1 + a2*b0
//   P3 = a1*b1*(a0*b0*(a2 + b2 + 1) + a0*b2 + a2*b0)
//      + a0*b0*a2*b2 + a0*b3 + a3*b0 + a1*b2 + a2*b1
template <boolean_ring R>
WittVec<R> witt_mul(const WittVec<R>& a, const WittVec<R>& v) {
  const R p = a.b[0] * v.b[0];
  const R q = a.b[1] * v.b[1];
  const R cross = a.b[0] * v.b[2] + a.b[2] * v.b[0];
  return WittVec<R>(p, a.b[0] * v.b[1] + a.b[1] * v.b[0], p * q + cross + q,
                    q * (p * (a.b[2] + v.b[2] + R::one()) + cross) + p * (a.b[2] * v.b[2]) +
                        a.b[0] * v.b[3] + a.b[3] * v.b[0] + a.b[1] * v.b[2] + a.b[2] * v.b[1]);
}

// Left fold of witt_add. Transport of structure makes every association order
// agree, so this is the ground truth for sums of s terms. Empty input sums to
// zero.
template <boolean_ring R>
WittVec<R> witt_sum_fold(std::span<const WittVec<R>> terms) {
  WittVec<R> acc = WittVec<R>::zero();
  for (const auto& t : terms) acc = witt_add(acc, t);
  return acc;
}

template <boolean_ring R>
WittVec<R> witt_sum_fold(const std::vector<WittVec<R>>& terms) {
  return witt_sum_fold(std::span<const WittVec<R>>(terms));
}

// Elementary symmetric polynomials e_0..e_tmax of xs, by the incremental
// recurrence e_t <- e_t + x*e_{t-1}. On 0/1 inputs with k ones, e_t counts
// C(k, t) mod 2; for t a power of two that is bit log2(t) of k (Lucas), which
// is what makes these the carry polynomials of a multi-term sum.
template <boolean_ring R>
std::vector<R> elementary_symmetric(std::span<const R> xs, int tmax) {
  std::vector<R> e(static_cast<std::size_t>(tmax) + 1, R::zero());
  e[0] = R::one();
  int seen = 0;
  for (const R& x : xs) {
    ++seen;
    for (int t = std::min(tmax, seen); t >= 1; --t)
      e[static_cast<std::size_t>(t)] = e[static_cast<std::size_t>(t)] + x * e[static_cast<std::size_t>(t - 1)];
  }
  return e;
}

// Closed form of the s-term sum, one carry level at a time:
//   S0 = e1(b0)
//   S1 = e2(b0) + e1(b1)
//   S2 = e1(b1)*e2(b0) + e2(b1) + e1(b2) + e4(b0)
//   S3 = e1(b3) + e2(b2) + e1(b2)*e2(b1) + e2(b0)*e1(b1)*e1(b2)
//      + e2(b0)*e3(b1) + e4(b0)*(e1(b2) + e2(b1)) + e4(b1)
//      + e1(b1)*e6(b0) + e8(b0)
// where e_t(bj) is taken over the slice of j-th components. The degree-4..8
// blocks only activate once enough terms exist (e_t = 0 for t > s).
template <boolean_ring R>
WittVec<R> closed_form_sum(std::span<const WittVec<R>> terms) {
  std::vector<R> s0, s1, s2, s3;
  s0.reserve(terms.size());
  s1.reserve(terms.size());
  s2.reserve(terms.size());
  s3.reserve(terms.size());
  for (const auto& t : terms) {
    s0.push_back(t.b[0]);
    s1.push_back(t.b[1]);
    s2.push_back(t.b[2]);
    s3.push_back(t.b[3]);
  }
  const auto e0 = elementary_symmetric(std::span<const R>(s0), 8);
  const auto e1 = elementary_symmetric(std::span<const R>(s1), 4);
  const auto e2 = elementary_symmetric(std::span<const R>(s2), 2);
  const auto e3 = elementary_symmetric(std::span<const R>(s3), 1);

  WittVec<R> out;
  out.b[0] = e0[1];
  out.b[1] = e0[2] + e1[1];
  out.b[2] = e1[1] * e0[2] + e1[2] + e2[1] + e0[4];
  out.b[3] = e3[1] + e2[2] + e2[1] * e1[2] + e0[2] * e1[1] * e2[1] + e0[2] * e1[3] +
             e0[4] * (e2[1] + e1[2]) + e1[4] + e1[1] * e0[6] + e0[8];
  return out;
}

template <boolean_ring R>
WittVec<R> closed_form_sum(const std::vector<WittVec<R>>& terms) {
  return closed_form_sum(std::span<const WittVec<R>>(terms));
}

}  // namespace ntruwitt
