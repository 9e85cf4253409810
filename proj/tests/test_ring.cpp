#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "ntruwitt/ring.hpp"

using namespace ntruwitt;

namespace {

ZqPoly random_poly(std::mt19937_64& rng, NtruParams params) {
  std::vector<std::uint32_t> c(static_cast<std::size_t>(params.n));
  for (auto& x : c) x = static_cast<std::uint32_t>(rng()) & (params.q - 1);
  return ZqPoly(params, std::move(c));
}

// multiply as plain integer polynomials, then fold X^N = 1, then reduce mod q
ZqPoly schoolbook_oracle(const ZqPoly& a, const ZqPoly& b) {
  const auto params = a.params();
  const int n = params.n;
  std::vector<std::uint64_t> wide(static_cast<std::size_t>(2 * n - 1), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      wide[static_cast<std::size_t>(i + j)] += static_cast<std::uint64_t>(a[i]) * b[j];
  ZqPoly out(params);
  for (int k = 0; k < 2 * n - 1; ++k)
    out[k % n] = static_cast<std::uint32_t>((out[k % n] + wide[static_cast<std::size_t>(k)]) & (params.q - 1));
  return out;
}

ZqPoly monomial(NtruParams params, int i) {
  ZqPoly p(params);
  p[i] = 1;
  return p;
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_NOTHROW(NtruParams(23, 128));
  CHECK_THROWS_AS(NtruParams(24, 128), std::invalid_argument);  // not prime
  CHECK_THROWS_AS(NtruParams(3, 128), std::invalid_argument);   // too small
  CHECK_THROWS_AS(NtruParams(23, 8), std::invalid_argument);    // q < 16
  CHECK_THROWS_AS(NtruParams(23, 100), std::invalid_argument);  // not a power of two
  CHECK(NtruParams(23, 128).log2q() == 7);
}

TEST_CASE("poly_mul identities and oracle") {
  const NtruParams params(7, 16);
  std::mt19937_64 rng(101);

  const ZqPoly a = random_poly(rng, params);
  CHECK(a * ZqPoly::one(params) == a);

  // X * X^{N-1} = 1
  CHECK(monomial(params, 1) * monomial(params, 6) == ZqPoly::one(params));

  for (int trial = 0; trial < 200; ++trial) {
    const ZqPoly x = random_poly(rng, params);
    const ZqPoly y = random_poly(rng, params);
    CHECK(x * y == schoolbook_oracle(x, y));
  }

  const NtruParams other(11, 16);
  CHECK_THROWS_AS(poly_mul(random_poly(rng, params), random_poly(rng, other)), std::invalid_argument);
}

TEST_CASE("poly_mul ring laws") {
  const NtruParams params(11, 64);
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const ZqPoly a = random_poly(rng, params);
    const ZqPoly b = random_poly(rng, params);
    const ZqPoly c = random_poly(rng, params);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("invert_mod2") {
  const int n = 11;
  CHECK(invert_mod2(Bitstring(1, n), n) == Bitstring(1, n));
  // X^{-1} = X^{N-1}
  CHECK(invert_mod2(Bitstring(2, n), n) == Bitstring(std::uint64_t{1} << (n - 1), n));

  // 1 + X vanishes at 1, so it shares a factor with X^N - 1
  CHECK_THROWS_AS(invert_mod2(Bitstring(0b11, n), n), not_invertible);

  std::mt19937_64 rng(107);
  int done = 0;
  while (done < 50) {
    const Bitstring a(rng(), n);
    Bitstring inv;
    try {
      inv = invert_mod2(a, n);
    } catch (const not_invertible&) {
      continue;
    }
    ++done;
    CHECK(gf2::mul_mod(a.bits, inv.bits, n) == 1);
  }
}

TEST_CASE("hensel lifting") {
  {
    const NtruParams params(7, 128);
    const ZqPoly a = ZqPoly::one(params);
    CHECK(hensel_lift_inverse(a, Bitstring(1, 7)) == a);
  }
  {
    const NtruParams params(7, 16);
    ZqPoly a(params);
    a[0] = 1;
    a[1] = 2;  // 1 + 2X
    int iters = 0;
    const ZqPoly v = hensel_lift_inverse(a, invert_mod2(Bitstring(1, 7), 7), &iters);
    CHECK(a * v == ZqPoly::one(params));
    const int m = params.log2q();
    int bound = 0;
    while ((1 << bound) < m) ++bound;
    CHECK(iters <= bound + 1);
  }
  {
    const NtruParams params(7, 16);
    ZqPoly a(params);
    a[0] = 3;
    CHECK_THROWS_AS(hensel_lift_inverse(a, Bitstring(0b10, 7)), std::invalid_argument);
  }
}

TEST_CASE("invert_mod2 then hensel gives a two-sided inverse mod q") {
  const NtruParams params(13, 256);
  std::mt19937_64 rng(109);
  int done = 0;
  while (done < 20) {
    const ZqPoly a = random_poly(rng, params);
    std::uint64_t a2 = 0;
    for (int i = 0; i < params.n; ++i)
      if (a[i] & 1u) a2 |= std::uint64_t{1} << i;
    Bitstring inv2;
    try {
      inv2 = invert_mod2(Bitstring(a2, params.n), params.n);
    } catch (const not_invertible&) {
      continue;
    }
    ++done;
    const ZqPoly v = hensel_lift_inverse(a, inv2);
    CHECK(a * v == ZqPoly::one(params));
    CHECK(v * a == ZqPoly::one(params));
  }
}

TEST_CASE("keygen at the paper size and determinism") {
  const NtruParams params(23, 128);
  const NtruKeySet keys = keygen(params, 1);
  CHECK(keys.F.size == 23);
  CHECK(keys.g.size == 23);
  CHECK(keys.f == f_from_bits(params, keys.F));
  CHECK(keys.f * keys.h == ZqPoly::p_poly(params) * ZqPoly::from_bits(params, keys.g));

  const NtruKeySet again = keygen(params, 1);
  CHECK(again.F == keys.F);
  CHECK(again.g == keys.g);
  CHECK(again.h == keys.h);
  CHECK(again.redraws == keys.redraws);

  CHECK_FALSE(keygen(params, 2).F == keys.F);
}

TEST_CASE("keygen satisfies the ring identity across sizes and seeds") {
  for (int n : {7, 11, 13, 17, 23}) {
    const NtruParams params(n, 128);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const NtruKeySet keys = keygen(params, seed);
      const ZqPoly lhs = keys.f * keys.h;
      const ZqPoly rhs = ZqPoly::p_poly(params) * ZqPoly::from_bits(params, keys.g);
      REQUIRE(lhs == rhs);
      // with 16 | q the relation survives reduction mod 16
      for (int k = 0; k < n; ++k) REQUIRE((lhs[k] & 15u) == (rhs[k] & 15u));
    }
  }
}

TEST_CASE("key file round-trip is byte identical") {
  const NtruKeySet keys = keygen(NtruParams(17, 128), 42);
  std::ostringstream first;
  write_key_file(first, keys);

  std::istringstream in(first.str());
  const NtruKeySet parsed = parse_key_file(in);
  CHECK(parsed.F == keys.F);
  CHECK(parsed.g == keys.g);
  CHECK(parsed.h == keys.h);
  CHECK(parsed.seed == keys.seed);

  std::ostringstream second;
  write_key_file(second, parsed);
  CHECK(first.str() == second.str());
}

TEST_CASE("key file parse errors carry line numbers") {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return parse_key_file(is);
  };

  try {
    parse("bogus\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 1);
  }

  try {
    parse("ntru-witt-keys v1\nN 24\nq 128\nseed 1\nF 0\ng 0\nh 0\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 3);  // params rejected once q is known
  }

  const NtruKeySet keys = keygen(NtruParams(7, 16), 3);
  std::ostringstream os;
  write_key_file(os, keys);
  std::string text = os.str();
  text.replace(text.find("\nF ") + 3, 1, text[text.find("\nF ") + 3] == '0' ? "1" : "0");
  try {
    parse(text);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 7);  // consistency check fails at the end of the file
  }
}
