#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ntruwitt/anf.hpp"
#include "ntruwitt/attack.hpp"
#include "ntruwitt/ring.hpp"

namespace ntruwitt {

struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All satisfying assignments of a system. exhaustive is true when the search
// provably covered the whole space.
struct SolutionSet {
  std::vector<Assignment> solutions;  // ascending by bit pattern
  bool exhaustive = false;

  bool contains(const Assignment& x) const {
    return std::binary_search(solutions.begin(), solutions.end(), x,
                              [](const Assignment& a, const Assignment& b) { return a.bits < b.bits; });
  }
};

// --- exhaustive backend ---

namespace detail {

inline std::vector<int> levels_of(const EquationSystem& sys) {
  std::set<int> ls;
  for (const auto& eq : sys.equations) ls.insert(eq.level);
  return {ls.begin(), ls.end()};
}

// Walks assignments in Gray-code order over [begin, end), updating the mod-16
// convolution incrementally: flipping F_i adds or removes (2+X)*X^i*h.
inline void exhaustive_range(int n, const std::vector<std::uint8_t>& h16, bool l1, bool l2, bool l3,
                             std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& hits) {
  if (begin >= end) return;
  // per-variable delta rows, both signs, coefficients already mod 16
  std::vector<std::vector<std::uint8_t>> add(static_cast<std::size_t>(n)), sub(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    add[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
    sub[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      int a = k - i;
      if (a < 0) a += n;
      int b = a - 1;
      if (b < 0) b += n;
      const std::uint8_t d = static_cast<std::uint8_t>((2u * h16[static_cast<std::size_t>(a)] + h16[static_cast<std::size_t>(b)]) & 15u);
      add[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = d;
      sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((16u - d) & 15u);
    }
  }

  std::uint64_t x = begin ^ (begin >> 1);  // Gray code of the range start
  auto c = convolve_mod16(n, h16, x);
  for (std::uint64_t g = begin;; ++g) {
    if (numeric_satisfies(n, c, l1, l2, l3)) hits.push_back(x);
    if (g + 1 >= end) break;
    const int i = std::countr_zero(g + 1);
    const std::uint64_t bit = std::uint64_t{1} << i;
    const auto& row = (x & bit) ? sub[static_cast<std::size_t>(i)] : add[static_cast<std::size_t>(i)];
    x ^= bit;
    for (int k = 0; k < n; ++k)
      c[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((c[static_cast<std::size_t>(k)] + row[static_cast<std::size_t>(k)]) & 15u);
  }
}

}  // namespace detail

// Enumerates all 2^N assignments against the numeric mod-16 bit conditions
// for the levels present in the system; equivalent to evaluating the ANF
// equations by the path-equivalence property of the generator. Disjoint
// chunks of the space run concurrently; the merged result is sorted.
inline SolutionSet solve_exhaustive(const EquationSystem& sys, const ZqPoly& h, int n_threads = 0) {
  const int n = sys.n_vars;
  if (n > 28) throw budget_exceeded("exhaustive search capped at N <= 28; use the groebner backend or export");
  if (static_cast<int>(h.coeffs().size()) != n)
    throw std::invalid_argument("h length does not match system variable count");

  const auto levels = detail::levels_of(sys);
  const bool l1 = std::find(levels.begin(), levels.end(), 1) != levels.end();
  const bool l2 = std::find(levels.begin(), levels.end(), 2) != levels.end();
  const bool l3 = std::find(levels.begin(), levels.end(), 3) != levels.end();
  const auto h16 = h_mod16(h);

  if (n_threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n_threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  n_threads = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(n_threads), total));

  std::vector<std::vector<std::uint64_t>> hits(static_cast<std::size_t>(n_threads));
  std::vector<std::thread> pool;
  const std::uint64_t chunk = total / static_cast<std::uint64_t>(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    const std::uint64_t begin = chunk * static_cast<std::uint64_t>(t);
    const std::uint64_t end = t == n_threads - 1 ? total : begin + chunk;
    pool.emplace_back([&, t, begin, end] {
      detail::exhaustive_range(n, h16, l1, l2, l3, begin, end, hits[static_cast<std::size_t>(t)]);
    });
  }
  for (auto& th : pool) th.join();

  std::vector<std::uint64_t> all;
  for (auto& part : hits) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end());

  SolutionSet out;
  out.exhaustive = true;
  out.solutions.reserve(all.size());
  for (std::uint64_t x : all) out.solutions.emplace_back(x, n);
  return out;
}

// Same semantics evaluated directly on the ANF equations; no key material
// needed, but far slower. Intended for small N or foreign system files.
inline SolutionSet solve_exhaustive(const EquationSystem& sys) {
  const int n = sys.n_vars;
  if (n > 28) throw budget_exceeded("exhaustive search capped at N <= 28; use the groebner backend or export");
  SolutionSet out;
  out.exhaustive = true;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const Assignment a(x, n);
    if (assignment_satisfies(sys, a)) out.solutions.push_back(a);
  }
  return out;
}

// --- Groebner backend ---

enum class MonomialOrder { degrevlex, lex };

// Variable order x0 > x1 > ... > x_{N-1}; monomials are square-free masks.
inline bool monomial_less(Monomial a, Monomial b, MonomialOrder order) {
  if (a == b) return false;
  if (order == MonomialOrder::degrevlex) {
    const int da = monomial_degree(a), db = monomial_degree(b);
    if (da != db) return da < db;
    // reverse-lex tie-break: the holder of the highest differing index loses
    const int d = 63 - std::countl_zero(a ^ b);
    return (a >> d) & 1u;
  }
  // lex: decided by the lowest differing index
  const int d = std::countr_zero(a ^ b);
  return (b >> d) & 1u;
}

inline Monomial leading_monomial(const AnfPoly& p, MonomialOrder order) {
  Monomial best = 0;
  bool first = true;
  for (Monomial m : p.monomials()) {
    if (first || monomial_less(best, m, order)) best = m;
    first = false;
  }
  return best;
}

struct GroebnerBasis {
  int n_vars = 0;
  MonomialOrder order = MonomialOrder::degrevlex;
  std::vector<AnfPoly> generators;  // interreduced, ascending leading monomials
};

struct pair_budget_exceeded : budget_exceeded {
  GroebnerBasis partial;
  explicit pair_budget_exceeded(GroebnerBasis p)
      : budget_exceeded("S-pair budget exceeded before the basis closed"), partial(std::move(p)) {}
};

namespace detail {

// Full normal form of p modulo G.
inline AnfPoly gb_reduce(AnfPoly p, const std::vector<AnfPoly>& basis, const std::vector<Monomial>& leads,
                         MonomialOrder order) {
  std::vector<Monomial> normal;
  while (!p.is_zero()) {
    const Monomial lm = leading_monomial(p, order);
    bool reduced = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if ((leads[i] & lm) == leads[i]) {
        p += mul_monomial(basis[i], lm & ~leads[i]);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      normal.push_back(lm);
      p += AnfPoly::monomial(lm);
    }
  }
  return AnfPoly::from_monomials(std::move(normal));
}

struct SPair {
  int degree;       // of the pair's lcm
  Monomial lcm;
  int i, j;         // j == -1 encodes the implicit field pair (G[i], x_var^2 + x_var)
  int var;

  friend bool operator<(const SPair& a, const SPair& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    if (a.lcm != b.lcm) return a.lcm < b.lcm;
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    return a.var < b.var;
  }
};

}  // namespace detail

// Buchberger's algorithm in the Boolean ring. The field relations x^2 = x are
// baked into the monomial arithmetic (variable-set unions), so no field
// generators are stored; what remains of them is one implicit S-pair per
// basis element and variable of its leading monomial, whose S-polynomial is
// x_v * tail(f) + lm(f). Pairs are processed by ascending lcm degree (normal
// strategy) and coprime-lead pairs are skipped (product criterion).
inline GroebnerBasis buchberger(const std::vector<AnfPoly>& input, int n_vars,
                                MonomialOrder order = MonomialOrder::degrevlex,
                                std::size_t pair_budget = 1u << 20) {
  std::vector<AnfPoly> basis;
  std::vector<Monomial> leads;
  std::set<detail::SPair> queue;

  auto add_poly = [&](const AnfPoly& h) {
    const Monomial lm = leading_monomial(h, order);
    const int idx = static_cast<int>(basis.size());
    for (int i = 0; i < idx; ++i) {
      const Monomial lcm = leads[static_cast<std::size_t>(i)] | lm;
      queue.insert(detail::SPair{monomial_degree(lcm), lcm, i, idx, -1});
    }
    for (int v = 0; v < n_vars; ++v)
      if ((lm >> v) & 1u)
        queue.insert(detail::SPair{monomial_degree(lm) + 1, lm, idx, -1, v});
    basis.push_back(h);
    leads.push_back(lm);
  };

  for (const auto& f : input) {
    const AnfPoly h = detail::gb_reduce(f, basis, leads, order);
    if (!h.is_zero()) add_poly(h);
  }

  std::size_t processed = 0;
  while (!queue.empty()) {
    const detail::SPair sp = *queue.begin();
    queue.erase(queue.begin());
    if (++processed > pair_budget) {
      GroebnerBasis partial{n_vars, order, basis};
      throw pair_budget_exceeded(std::move(partial));
    }

    AnfPoly spoly;
    if (sp.j >= 0) {
      const Monomial la = leads[static_cast<std::size_t>(sp.i)];
      const Monomial lb = leads[static_cast<std::size_t>(sp.j)];
      if ((la & lb) == 0) continue;  // product criterion
      spoly = mul_monomial(basis[static_cast<std::size_t>(sp.i)], sp.lcm & ~la) +
              mul_monomial(basis[static_cast<std::size_t>(sp.j)], sp.lcm & ~lb);
    } else {
      const AnfPoly& f = basis[static_cast<std::size_t>(sp.i)];
      const Monomial lm = leads[static_cast<std::size_t>(sp.i)];
      const AnfPoly tail = f + AnfPoly::monomial(lm);
      spoly = mul_monomial(tail, Monomial{1} << sp.var) + AnfPoly::monomial(lm);
    }
    const AnfPoly h = detail::gb_reduce(std::move(spoly), basis, leads, order);
    if (!h.is_zero()) add_poly(h);
  }

  // interreduce: drop generators whose lead another lead divides, then put
  // every survivor's tail in normal form
  std::vector<AnfPoly> minimal;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j)
      if (j != i && (leads[j] & leads[i]) == leads[j] &&
          (leads[j] != leads[i] || j < i))
        redundant = true;
    if (!redundant) minimal.push_back(basis[i]);
  }
  std::vector<AnfPoly> reduced = minimal;
  std::vector<Monomial> rleads;
  for (const auto& g : reduced) rleads.push_back(leading_monomial(g, order));
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    std::vector<AnfPoly> others;
    std::vector<Monomial> oleads;
    for (std::size_t j = 0; j < reduced.size(); ++j)
      if (j != i) {
        others.push_back(reduced[j]);
        oleads.push_back(rleads[j]);
      }
    reduced[i] = detail::gb_reduce(reduced[i], others, oleads, order);
  }
  std::sort(reduced.begin(), reduced.end(), [&](const AnfPoly& a, const AnfPoly& b) {
    return monomial_less(leading_monomial(a, order), leading_monomial(b, order), order);
  });
  return GroebnerBasis{n_vars, order, std::move(reduced)};
}

inline GroebnerBasis buchberger(const EquationSystem& sys, MonomialOrder order = MonomialOrder::degrevlex,
                                std::size_t pair_budget = 1u << 20) {
  std::vector<AnfPoly> input;
  input.reserve(sys.equations.size());
  for (const auto& eq : sys.equations) input.push_back(eq.poly);
  return buchberger(input, sys.n_vars, order, pair_budget);
}

// All zeros of the basis by recursive splitting on the lowest unassigned
// variable; a branch dies as soon as some generator collapses to 1. The
// Boolean ring is finite, so the ideal is always zero-dimensional.
inline SolutionSet solutions_from_basis(const GroebnerBasis& gb) {
  SolutionSet out;
  out.exhaustive = true;

  std::vector<AnfPoly> start;
  for (const auto& g : gb.generators) {
    if (g.is_one()) return out;  // unit ideal
    if (!g.is_zero()) start.push_back(g);
  }

  struct Frame {
    std::vector<AnfPoly> polys;
    int var;
    std::uint64_t bits;
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{std::move(start), 0, 0});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (fr.var == gb.n_vars) {
      out.solutions.emplace_back(fr.bits, gb.n_vars);
      continue;
    }
    // try x_var = 1 then x_var = 0; LIFO order makes the walk ascending
    for (int val = 1; val >= 0; --val) {
      std::vector<AnfPoly> next;
      next.reserve(fr.polys.size());
      bool dead = false;
      for (const auto& p : fr.polys) {
        AnfPoly q = substitute(p, fr.var, val == 1);
        if (q.is_one()) {
          dead = true;
          break;
        }
        if (!q.is_zero()) next.push_back(std::move(q));
      }
      if (!dead)
        stack.push_back(Frame{std::move(next), fr.var + 1,
                              fr.bits | (val ? (std::uint64_t{1} << fr.var) : 0)});
    }
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const Assignment& a, const Assignment& b) { return a.bits < b.bits; });
  return out;
}

// --- exports ---

inline void export_anf(std::ostream& os, const EquationSystem& sys) { write_system_file(os, sys); }

// Extended DIMACS with one auxiliary variable per distinct nonlinear
// monomial, AND-defined by plain clauses; each equation becomes one XOR
// clause (`x` line) over monomial variables. Variables 1..N are F_0..F_{N-1};
// auxiliaries follow in ascending monomial-mask order.
inline void export_cnf(std::ostream& os, const EquationSystem& sys) {
  const int n = sys.n_vars;
  std::map<Monomial, int> aux;  // nonlinear monomial -> variable id
  for (const auto& eq : sys.equations)
    for (Monomial m : eq.poly.monomials())
      if (monomial_degree(m) >= 2) aux.emplace(m, 0);
  int next_var = n + 1;
  for (auto& [m, id] : aux) id = next_var++;

  std::size_t n_clauses = 0;
  for (const auto& [m, id] : aux) n_clauses += static_cast<std::size_t>(monomial_degree(m)) + 1;
  for (const auto& eq : sys.equations) {
    bool constant = false;
    bool any = false;
    for (Monomial m : eq.poly.monomials()) {
      if (m == 0)
        constant = true;
      else
        any = true;
    }
    if (any || constant) ++n_clauses;  // tautologies (empty polys) emit nothing
  }

  os << "c ntru-witt cnf export\n";
  os << "c vars " << n << " eqs " << sys.equations.size() << "\n";
  for (int i = 0; i < n; ++i) os << "c var " << (i + 1) << " = x" << i << "\n";
  for (const auto& [m, id] : aux) os << "c var " << id << " = " << render_monomial(m) << "\n";
  os << "p cnf " << (next_var - 1) << " " << n_clauses << "\n";

  for (const auto& [m, id] : aux) {
    // id <-> AND of the variables of m
    std::string all;
    for (int i = 0; i < n; ++i) {
      if (!((m >> i) & 1u)) continue;
      os << -id << " " << (i + 1) << " 0\n";
      all += " -" + std::to_string(i + 1);
    }
    os << id << all << " 0\n";
  }

  for (const auto& eq : sys.equations) {
    bool constant = false;
    std::vector<int> lits;
    for (Monomial m : eq.poly.monomials()) {
      if (m == 0)
        constant = true;
      else if (monomial_degree(m) == 1)
        lits.push_back(std::countr_zero(m) + 1);
      else
        lits.push_back(aux.at(m));
    }
    if (lits.empty() && !constant) continue;  // 0 = 0
    if (lits.empty()) {
      os << "x 0\n";  // 1 = 0: unsatisfiable
      continue;
    }
    // XOR of literals must equal the constant term; flip one sign for = 0
    if (!constant) lits.front() = -lits.front();
    os << "x";
    for (int l : lits) os << " " << l;
    os << " 0\n";
  }
}

}  // namespace ntruwitt
