#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "ntruwitt/anf.hpp"
#include "ntruwitt/witt.hpp"

using namespace ntruwitt;

namespace {

std::vector<WittVec<Bit>> to_witt(const std::vector<unsigned>& residues) {
  std::vector<WittVec<Bit>> out;
  for (unsigned r : residues) out.push_back(witt_from_residue(r));
  return out;
}

unsigned oracle_sum(const std::vector<unsigned>& residues) {
  unsigned total = 0;
  for (unsigned r : residues) total = (total + r) % 16;
  return total;
}

// The most literal misreading of the printed multi-term S3: the block with
// the missing connective taken as a product with its neighbour.
template <boolean_ring R>
R s3_literal_juxtaposition(const std::vector<WittVec<R>>& terms) {
  std::vector<R> s0, s1, s2, s3;
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
  return e3[1] + e2[2] + e2[1] * e1[2] + e0[2] * e1[1] * e2[1] + e0[2] * e1[3] +
         e0[4] * (e2[1] + e1[2]) + e1[4] * (e1[1] * e0[6]) + e0[8];
}

}  // namespace

TEST_CASE("witt residue bijection") {
  CHECK(witt_from_residue(0) == WittVec<Bit>::zero());
  CHECK(witt_from_residue(1) == WittVec<Bit>::one());
  CHECK(witt_from_residue(13) == WittVec<Bit>(Bit::one(), Bit::zero(), Bit::one(), Bit::one()));
  for (unsigned r = 0; r < 16; ++r) CHECK(witt_to_residue(witt_from_residue(r)) == r);
  CHECK_THROWS_AS(witt_from_residue(16), std::out_of_range);
}

TEST_CASE("witt addition examples") {
  CHECK(witt_add(witt_from_residue(1), witt_from_residue(1)) == witt_from_residue(2));
  CHECK(witt_add(witt_from_residue(15), witt_from_residue(1)) == witt_from_residue(0));
  for (unsigned a = 0; a < 16; ++a)
    CHECK(witt_add(witt_from_residue(a), WittVec<Bit>::zero()) == witt_from_residue(a));
}

TEST_CASE("witt multiplication examples") {
  for (unsigned a = 0; a < 16; ++a)
    CHECK(witt_mul(witt_from_residue(a), WittVec<Bit>::one()) == witt_from_residue(a));
  CHECK(witt_mul(witt_from_residue(3), witt_from_residue(3)) == witt_from_residue(9));
  CHECK(witt_mul(witt_from_residue(2), witt_from_residue(2)) == witt_from_residue(4));
}

TEST_CASE("witt laws transport Z16 exhaustively") {
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      const auto wa = witt_from_residue(a);
      const auto wb = witt_from_residue(b);
      CHECK(witt_to_residue(witt_add(wa, wb)) == (a + b) % 16);
      CHECK(witt_to_residue(witt_mul(wa, wb)) == (a * b) % 16);
      CHECK(witt_add(wa, wb) == witt_add(wb, wa));
      CHECK(witt_mul(wa, wb) == witt_mul(wb, wa));
    }
  }
}

TEST_CASE("witt multiplication distributes over addition") {
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned b = 0; b < 16; ++b)
      for (unsigned c = 0; c < 16; ++c) {
        const auto wa = witt_from_residue(a);
        const auto wb = witt_from_residue(b);
        const auto wc = witt_from_residue(c);
        if (!(witt_mul(wa, witt_add(wb, wc)) == witt_add(witt_mul(wa, wb), witt_mul(wa, wc))))
          FAIL("distributivity failed at " << a << "," << b << "," << c);
      }
  SUCCEED();
}

TEST_CASE("witt_sum_fold matches the integer oracle") {
  std::vector<unsigned> ones;
  for (int s = 1; s <= 20; ++s) {
    ones.push_back(1);
    CHECK(witt_to_residue(witt_sum_fold(to_witt(ones))) == static_cast<unsigned>(s % 16));
  }

  CHECK(witt_sum_fold(to_witt({13})) == witt_from_residue(13));
  CHECK(witt_sum_fold(std::vector<WittVec<Bit>>{}) == WittVec<Bit>::zero());

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<unsigned> rs(1 + rng() % 10);
    for (auto& r : rs) r = static_cast<unsigned>(rng() % 16);
    const auto folded = witt_sum_fold(to_witt(rs));
    CHECK(witt_to_residue(folded) == oracle_sum(rs));

    auto shuffled = rs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(witt_sum_fold(to_witt(shuffled)) == folded);
  }
}

TEST_CASE("closed_form_sum bits 0 and 1 exhaustively for s <= 6") {
  // every bit-0/bit-1 pattern; bits 2 and 3 held zero
  for (int s = 1; s <= 6; ++s) {
    const std::uint64_t patterns = std::uint64_t{1} << (2 * s);
    for (std::uint64_t pat = 0; pat < patterns; ++pat) {
      std::vector<unsigned> rs;
      for (int i = 0; i < s; ++i) rs.push_back(static_cast<unsigned>((pat >> (2 * i)) & 3u));
      const auto terms = to_witt(rs);
      const auto fold = witt_sum_fold(terms);
      const auto cf = closed_form_sum(terms);
      if (!(cf.b[0] == fold.b[0] && cf.b[1] == fold.b[1]))
        FAIL("closed form bits 0/1 mismatch at pattern " << pat << " s=" << s);
    }
  }
  SUCCEED();
}

TEST_CASE("closed_form_sum bit 2 on random lists") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<unsigned> rs(2 + rng() % 9);
    for (auto& r : rs) r = static_cast<unsigned>(rng() % 16);
    const auto terms = to_witt(rs);
    if (!(closed_form_sum(terms).b[2] == witt_sum_fold(terms).b[2]))
      FAIL("closed form bit 2 mismatch");
  }
  SUCCEED();
}

TEST_CASE("closed_form_sum of a single term is that term") {
  for (unsigned r = 0; r < 16; ++r)
    CHECK(closed_form_sum(std::vector<WittVec<Bit>>{witt_from_residue(r)}) == witt_from_residue(r));
}

TEST_CASE("closed_form_sum matches fold on all components") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 1500; ++trial) {
    std::vector<unsigned> rs(1 + rng() % 12);
    for (auto& r : rs) r = static_cast<unsigned>(rng() % 16);
    const auto terms = to_witt(rs);
    if (!(closed_form_sum(terms) == witt_sum_fold(terms))) FAIL("closed form mismatch");
  }
  SUCCEED();
}

TEST_CASE("literal juxtaposition reading of the printed multi-term S3 is wrong") {
  // 2+2+2+2 = 8: bit 3 of the sum is set, but the juxtaposed product kills
  // the e4(b1) block
  const auto terms = to_witt({2, 2, 2, 2});
  const auto fold = witt_sum_fold(terms);
  REQUIRE(witt_to_residue(fold) == 8);
  CHECK(s3_literal_juxtaposition(terms) != fold.b[3]);
  CHECK(closed_form_sum(terms).b[3] == fold.b[3]);
}

TEST_CASE("symbolic and concrete witt paths cohere") {
  std::mt19937_64 rng(31);
  const int n_vars = 6;
  auto random_anf = [&] {
    std::vector<Monomial> ms;
    const int terms = static_cast<int>(rng() % 5);
    for (int i = 0; i < terms; ++i) ms.push_back(rng() & 0x3Fu);
    return AnfPoly::from_monomials(std::move(ms));
  };
  auto random_witt = [&] {
    return WittVec<AnfPoly>(random_anf(), random_anf(), random_anf(), random_anf());
  };
  auto eval_witt = [](const WittVec<AnfPoly>& w, const Assignment& x) {
    WittVec<Bit> out;
    for (int i = 0; i < 4; ++i) out.b[i] = Bit{static_cast<std::uint8_t>(anf_eval(w.b[i], x))};
    return out;
  };

  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_witt();
    const auto b = random_witt();
    const auto sum = witt_add(a, b);
    const auto prod = witt_mul(a, b);
    for (int probe = 0; probe < 8; ++probe) {
      const Assignment x(rng() & 0x3Fu, n_vars);
      CHECK(eval_witt(sum, x) == witt_add(eval_witt(a, x), eval_witt(b, x)));
      CHECK(eval_witt(prod, x) == witt_mul(eval_witt(a, x), eval_witt(b, x)));
    }
  }
}
