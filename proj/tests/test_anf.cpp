#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ntruwitt/anf.hpp"

using namespace ntruwitt;

namespace {

AnfPoly random_poly(std::mt19937_64& rng, int n_vars, int max_terms) {
  std::vector<Monomial> ms;
  const int terms = static_cast<int>(rng() % static_cast<std::uint64_t>(max_terms + 1));
  const Monomial mask = (Monomial{1} << n_vars) - 1;
  for (int i = 0; i < terms; ++i) ms.push_back(rng() & mask);
  return AnfPoly::from_monomials(std::move(ms));
}

bool strictly_ascending(const AnfPoly& p) {
  const auto& ms = p.monomials();
  for (std::size_t i = 1; i < ms.size(); ++i)
    if (ms[i - 1] >= ms[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("anf addition is characteristic 2") {
  std::mt19937_64 rng(1);
  const AnfPoly p = random_poly(rng, 8, 10);
  CHECK((p + p).is_zero());
  CHECK(p + AnfPoly::zero() == p);

  const AnfPoly a = AnfPoly::variable(0) + AnfPoly::variable(1);
  const AnfPoly b = AnfPoly::variable(1) + AnfPoly::variable(2);
  CHECK(a + b == AnfPoly::variable(0) + AnfPoly::variable(2));
}

TEST_CASE("anf multiplication is idempotent on variables") {
  const AnfPoly x0 = AnfPoly::variable(0);
  CHECK(x0 * x0 == x0);

  const AnfPoly e = x0 + AnfPoly::one();
  CHECK(e * e == e);
}

TEST_CASE("anf operations agree with truth tables") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 10;
    const AnfPoly a = random_poly(rng, n, 30);
    const AnfPoly b = random_poly(rng, n, 30);
    const AnfPoly sum = a + b;
    const AnfPoly prod = a * b;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      const Assignment asg(x, n);
      const bool ea = anf_eval(a, asg);
      const bool eb = anf_eval(b, asg);
      if (anf_eval(sum, asg) != (ea ^ eb)) FAIL("sum truth table mismatch");
      if (anf_eval(prod, asg) != (ea && eb)) FAIL("product truth table mismatch");
    }
  }
}

TEST_CASE("anf results are canonical") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const AnfPoly a = random_poly(rng, 12, 40);
    const AnfPoly b = random_poly(rng, 12, 40);
    CHECK(strictly_ascending(a + b));
    CHECK(strictly_ascending(a * b));
    CHECK((a + b) + b == a);  // add is an involution with itself
  }
}

TEST_CASE("anf ring laws on random triples") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const AnfPoly a = random_poly(rng, 9, 15);
    const AnfPoly b = random_poly(rng, 9, 15);
    const AnfPoly c = random_poly(rng, 9, 15);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("anf evaluation") {
  CHECK_FALSE(anf_eval(AnfPoly::zero(), Assignment(0b101, 3)));
  CHECK(anf_eval(AnfPoly::one(), Assignment(0, 3)));

  // x0*x1 + x2 at F = "110": 1*1 xor 0 = 1
  const AnfPoly p = AnfPoly::variable(0) * AnfPoly::variable(1) + AnfPoly::variable(2);
  CHECK(anf_eval(p, Assignment::from_string("110")));
  CHECK_FALSE(anf_eval(p, Assignment::from_string("111")));

  CHECK_THROWS_AS(anf_eval(p, Assignment::from_string("11")), std::invalid_argument);
}

TEST_CASE("anf stats") {
  CHECK(anf_stats(AnfPoly::zero()).degree == 0);
  CHECK(anf_stats(AnfPoly::zero()).term_count == 0);

  const AnfPoly m = AnfPoly::monomial(0b1111);
  CHECK(anf_stats(m).degree == 4);
  CHECK(anf_stats(m).term_count == 1);
}

TEST_CASE("substitute and monomial multiplication") {
  const AnfPoly x0 = AnfPoly::variable(0);
  const AnfPoly x1 = AnfPoly::variable(1);
  const AnfPoly x2 = AnfPoly::variable(2);

  CHECK(substitute(x0 * x1 + x2, 0, true) == x1 + x2);
  CHECK(substitute(x0 * x1 + x2, 0, false) == x2);
  CHECK(substitute(x0 + AnfPoly::one(), 0, true).is_zero());

  // union products may cancel terms: (x0 + x0*x1) * x1 = x0*x1 + x0*x1 = 0
  CHECK(mul_monomial(x0 + x0 * x1, 0b10).is_zero());
  CHECK(mul_monomial(x0 + x1, 0b100) == x0 * x2 + x1 * x2);
}

TEST_CASE("anf rendering and parsing") {
  CHECK(render_anf(AnfPoly::zero()) == "0");
  CHECK(render_anf(AnfPoly::one()) == "1");

  const AnfPoly p = AnfPoly::one() + AnfPoly::variable(0) + AnfPoly::variable(0) * AnfPoly::variable(2);
  CHECK(render_anf(p) == "1 + x0 + x0*x2");
  CHECK(parse_anf("1 + x0 + x0*x2") == p);
  CHECK(parse_anf("0").is_zero());

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const AnfPoly q = random_poly(rng, 14, 25);
    CHECK(parse_anf(render_anf(q)) == q);
  }

  CHECK_THROWS_AS(parse_anf(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_anf("x0 + + x1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_anf("y3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_anf("x99"), std::invalid_argument);
  CHECK_THROWS_AS(parse_anf("0 + x1"), std::invalid_argument);
}
