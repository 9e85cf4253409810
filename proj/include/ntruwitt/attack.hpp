#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ntruwitt/anf.hpp"
#include "ntruwitt/ring.hpp"
#include "ntruwitt/witt.hpp"

namespace ntruwitt {

struct inconsistent_solution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// AnfPoly satisfies the boolean_ring concept, so the Witt laws run unchanged
// on symbolic components.
static_assert(boolean_ring<AnfPoly>);

// Witt-vector coefficients of the two sides that stay fixed during the
// attack: f_i symbolically in the unknowns F_0..F_{N-1}, h_j concretely from
// h mod 16 (the relation f*h = (2+X)*g holds mod 16 because 16 | q).
//
//   f_0 = [1 + F_{N-1}, F_0 + F_{N-1}, F_0*F_{N-1}, 0]
//   f_i = [F_{i-1}, F_i, 0, 0]                for i >= 1
//   h_j = [h_j0, h_j1, h_j2, h_j3]            bits of h_j mod 16
struct SymbolicKeyCoeffs {
  NtruParams params;
  std::uint64_t seed = 0;
  std::vector<WittVec<AnfPoly>> f_witt;
  std::vector<WittVec<Bit>> h_witt;
};

inline SymbolicKeyCoeffs build_symbolic_coeffs(const NtruKeySet& keys) {
  const auto& params = keys.params;
  if (params.q < 16)
    throw std::invalid_argument("attack needs q >= 16 (four Witt bits)");

  SymbolicKeyCoeffs out;
  out.params = params;
  out.seed = keys.seed;
  out.f_witt.reserve(static_cast<std::size_t>(params.n));
  out.h_witt.reserve(static_cast<std::size_t>(params.n));

  const AnfPoly last = AnfPoly::variable(params.n - 1);
  out.f_witt.push_back(WittVec<AnfPoly>(AnfPoly::one() + last, AnfPoly::variable(0) + last,
                                        AnfPoly::variable(0) * last, AnfPoly::zero()));
  for (int i = 1; i < params.n; ++i)
    out.f_witt.push_back(WittVec<AnfPoly>(AnfPoly::variable(i - 1), AnfPoly::variable(i),
                                          AnfPoly::zero(), AnfPoly::zero()));
  for (int j = 0; j < params.n; ++j)
    out.h_witt.push_back(witt_from_residue(keys.h[j] & 15u));
  return out;
}

namespace detail {

inline WittVec<AnfPoly> lift_bits(const WittVec<Bit>& w) {
  WittVec<AnfPoly> out;
  for (int i = 0; i < 4; ++i) out.b[static_cast<std::size_t>(i)] = AnfPoly::constant(w.b[static_cast<std::size_t>(i)].v);
  return out;
}

// witt_add computing only components 0..max_bit. The sum law is triangular
// (S_j reads components <= j), so the low components agree with the full law.
inline WittVec<AnfPoly> witt_add_trunc(const WittVec<AnfPoly>& a, const WittVec<AnfPoly>& v, int max_bit) {
  WittVec<AnfPoly> out;
  out.b[0] = a.b[0] + v.b[0];
  if (max_bit < 1) return out;
  const AnfPoly c = a.b[0] * v.b[0];
  out.b[1] = c + a.b[1] + v.b[1];
  if (max_bit < 2) return out;
  const AnfPoly u = a.b[1] + v.b[1];
  const AnfPoly t = a.b[2] + v.b[2];
  const AnfPoly r = c * u + a.b[1] * v.b[1];
  out.b[2] = r + t;
  if (max_bit < 3) return out;
  out.b[3] = r * t + a.b[2] * v.b[2] + a.b[3] + v.b[3];
  return out;
}

}  // namespace detail

// Summands of L_k: t_i = f_i * h_{i*} in W4 with i + i* = k (mod N).
inline std::vector<WittVec<AnfPoly>> witt_terms_of_L(const SymbolicKeyCoeffs& coeffs, int k) {
  const int n = coeffs.params.n;
  std::vector<WittVec<AnfPoly>> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int istar = k - i;
    if (istar < 0) istar += n;
    terms.push_back(witt_mul(coeffs.f_witt[static_cast<std::size_t>(i)],
                             detail::lift_bits(coeffs.h_witt[static_cast<std::size_t>(istar)])));
  }
  return terms;
}

// L_k = fold of the N products f_i * h_{i*}. Components above max_bit are
// left zero, which saves the expensive high-carry products when only the
// quadratic or degree-4 equations are wanted.
inline WittVec<AnfPoly> compute_L(const SymbolicKeyCoeffs& coeffs, int k, int max_bit = 3) {
  WittVec<AnfPoly> acc;
  for (const auto& t : witt_terms_of_L(coeffs, k)) {
    if (t == WittVec<AnfPoly>::zero()) continue;
    acc = detail::witt_add_trunc(acc, t, max_bit);
  }
  return acc;
}

// One equation of the system: poly = 0 at the given Witt bit level.
struct Equation {
  int level = 0;  // 1, 2 or 3
  int k = 0;
  AnfPoly poly;
};

struct SystemProvenance {
  NtruParams params;
  std::uint64_t seed = 0;
};

struct EquationSystem {
  int n_vars = 0;
  std::vector<Equation> equations;  // ascending (level, k)
  std::optional<SystemProvenance> provenance;
};

namespace detail {

inline void parallel_for(int count, int n_threads, const std::function<void(int)>& body) {
  if (n_threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n_threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  n_threads = std::min(n_threads, count);
  if (n_threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += n_threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Builds the equation system for the first `bits` Witt bits (2, 3 or 4).
// Bit 0 is never emitted: L_{k,0} = g_{k-1} defines g affinely in F, and
// substituting that definition into L_{k,1} = g_k yields the quadratic level
//   L_{k,1} + L_{(k+1) mod N, 0} = 0.
// Bits 2 and 3 have no g at all (R_k = [g_{k-1}, g_k, 0, 0]), so those levels
// are plain L_{k,2} = 0 and L_{k,3} = 0. Equation count is (bits-1)*N.
inline EquationSystem generate_system(const NtruKeySet& keys, int bits, int n_threads = 0) {
  if (bits < 2 || bits > 4) throw std::invalid_argument("bits must be 2, 3 or 4");
  const SymbolicKeyCoeffs coeffs = build_symbolic_coeffs(keys);
  const int n = keys.params.n;
  const int max_bit = bits - 1;

  std::vector<WittVec<AnfPoly>> L(static_cast<std::size_t>(n));
  detail::parallel_for(n, n_threads, [&](int k) { L[static_cast<std::size_t>(k)] = compute_L(coeffs, k, max_bit); });

  EquationSystem sys;
  sys.n_vars = n;
  sys.provenance = SystemProvenance{keys.params, keys.seed};
  for (int k = 0; k < n; ++k)
    sys.equations.push_back(Equation{1, k, L[static_cast<std::size_t>(k)].b[1] + L[static_cast<std::size_t>((k + 1) % n)].b[0]});
  if (bits >= 3)
    for (int k = 0; k < n; ++k) sys.equations.push_back(Equation{2, k, L[static_cast<std::size_t>(k)].b[2]});
  if (bits >= 4)
    for (int k = 0; k < n; ++k) sys.equations.push_back(Equation{3, k, L[static_cast<std::size_t>(k)].b[3]});
  return sys;
}

// --- closed forms of the printed degree-4 and degree-8 equations ---

// The four auxiliary sums named in the degree-8 equation, exactly as printed.
// With t_i = f_i * h_{i*}: A_k = e2 of the t1 slice, B_k = e2 of the t0
// slice, D_k = e1 of the t1 slice. C_k as printed mixes h_{i*1}/h_{i*0} into
// what structurally should be the t2 slice sum; see cross_check_closed_forms.
struct Bit3Aux {
  AnfPoly a, b, c, d;
};

struct ClosedFormL {
  AnfPoly l2;           // printed degree-4 expression for L_{k,2}
  AnfPoly l3_printed;   // printed degree-8 expression, connectives read as "+"
  AnfPoly l3_repaired;  // same skeleton with C_k replaced by e1 of the t2 slice
  Bit3Aux aux;
};

inline ClosedFormL closed_form_L2_L3(const SymbolicKeyCoeffs& coeffs, int k) {
  const int n = coeffs.params.n;
  const auto terms = witt_terms_of_L(coeffs, k);

  std::vector<AnfPoly> t0, t1, t2, t3;
  for (const auto& t : terms) {
    t0.push_back(t.b[0]);
    t1.push_back(t.b[1]);
    t2.push_back(t.b[2]);
    t3.push_back(t.b[3]);
  }
  const auto e0 = elementary_symmetric(std::span<const AnfPoly>(t0), 8);
  const auto e1 = elementary_symmetric(std::span<const AnfPoly>(t1), 4);
  const auto e2 = elementary_symmetric(std::span<const AnfPoly>(t2), 2);
  const auto e3 = elementary_symmetric(std::span<const AnfPoly>(t3), 1);

  ClosedFormL out;
  out.aux.a = e1[2];
  out.aux.b = e0[2];
  out.aux.d = e1[1];
  // C_k = sum_i (f_i0*h_i*0*f_i1*h_i*1 + f_i0*h_i*1 + f_i1*h_i*0 + f_i1*h_i*1)
  for (int i = 0; i < n; ++i) {
    int istar = k - i;
    if (istar < 0) istar += n;
    const auto& f = coeffs.f_witt[static_cast<std::size_t>(i)];
    const auto& hb = coeffs.h_witt[static_cast<std::size_t>(istar)];
    const AnfPoly h0 = AnfPoly::constant(hb.b[0].v);
    const AnfPoly h1 = AnfPoly::constant(hb.b[1].v);
    out.aux.c += f.b[0] * h0 * f.b[1] * h1 + f.b[0] * h1 + f.b[1] * h0 + f.b[1] * h1;
  }

  out.l2 = e1[1] * e0[2] + e1[2] + e2[1] + e0[4];

  auto l3_with = [&](const AnfPoly& c) {
    return e3[1] + e2[2] + c * out.aux.a + out.aux.b * out.aux.d * c + out.aux.b * e1[3] +
           (c + out.aux.a) * e0[4] + e1[4] + out.aux.d * e0[6] + e0[8];
  };
  out.l3_printed = l3_with(out.aux.c);
  out.l3_repaired = l3_with(e2[1]);
  return out;
}

// First assignment (ascending as a subset of the difference's support) where
// two polynomials disagree.
inline std::optional<Assignment> first_disagreement(const AnfPoly& a, const AnfPoly& b, int n_vars) {
  const AnfPoly diff = a + b;
  if (diff.is_zero()) return std::nullopt;
  const Monomial supp = diff.support();
  std::uint64_t s = 0;
  for (;;) {
    const Assignment x(s, n_vars);
    if (anf_eval(diff, x)) return x;
    if (s == supp) break;
    s = (s - supp) & supp;  // next subset of supp in ascending order
  }
  return std::nullopt;  // unreachable: a nonzero ANF is a nonzero function
}

struct CrossCheckReport {
  int k = 0;
  bool l2_matches = false;
  bool l3_printed_matches = false;
  bool l3_repaired_matches = false;
  std::optional<Assignment> l2_counterexample;
  std::optional<Assignment> l3_counterexample;
};

// Compares the printed expressions against the fold path for one k. A
// mismatch is reported with a minimal concrete counterexample, never raised:
// the fold is the authority and the printed text the object under test.
inline CrossCheckReport cross_check_closed_forms(const SymbolicKeyCoeffs& coeffs, int k) {
  const WittVec<AnfPoly> L = compute_L(coeffs, k);
  const ClosedFormL cf = closed_form_L2_L3(coeffs, k);
  CrossCheckReport rep;
  rep.k = k;
  rep.l2_matches = cf.l2 == L.b[2];
  rep.l3_printed_matches = cf.l3_printed == L.b[3];
  rep.l3_repaired_matches = cf.l3_repaired == L.b[3];
  if (!rep.l2_matches) rep.l2_counterexample = first_disagreement(cf.l2, L.b[2], coeffs.params.n);
  if (!rep.l3_printed_matches)
    rep.l3_counterexample = first_disagreement(cf.l3_printed, L.b[3], coeffs.params.n);
  return rep;
}

// --- numeric evaluation path ---

inline std::vector<std::uint8_t> h_mod16(const ZqPoly& h) {
  std::vector<std::uint8_t> out(h.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint8_t>(h.coeffs()[i] & 15u);
  return out;
}

// Coefficients of (1 + (2+X)*x) * h mod 16 for a candidate assignment x.
inline std::vector<std::uint8_t> convolve_mod16(int n, const std::vector<std::uint8_t>& h16, std::uint64_t xbits) {
  std::vector<std::uint8_t> c(h16.begin(), h16.end());  // the "1 * h" part
  for (int i = 0; i < n; ++i) {
    if (!((xbits >> i) & 1u)) continue;
    // adding (2+X)*X^i*h contributes 2*h_{k-i} + h_{k-i-1} at position k
    for (int k = 0; k < n; ++k) {
      int a = k - i;
      if (a < 0) a += n;
      int b = a - 1;
      if (b < 0) b += n;
      c[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(
          (c[static_cast<std::size_t>(k)] + 2u * h16[static_cast<std::size_t>(a)] + h16[static_cast<std::size_t>(b)]) & 15u);
    }
  }
  return c;
}

// Bit conditions equivalent to the symbolic equations: level 1 ties bit 1 of
// c_k to bit 0 of c_{k+1} (both equal g_k), levels 2 and 3 force the high
// bits of every c_k to zero.
inline bool numeric_satisfies(int n, const std::vector<std::uint8_t>& c, bool l1, bool l2, bool l3) {
  for (int k = 0; k < n; ++k) {
    const unsigned ck = c[static_cast<std::size_t>(k)];
    if (l1 && (((ck >> 1) ^ c[static_cast<std::size_t>((k + 1) % n)]) & 1u)) return false;
    if (l2 && ((ck >> 2) & 1u)) return false;
    if (l3 && ((ck >> 3) & 1u)) return false;
  }
  return true;
}

// Reads g off bit 0 of (1 + (2+X)*F)*h mod 16 and validates the full mod-16
// relation; an inconsistency means F was not a true solution.
inline Bitstring recover_g(const NtruParams& params, const ZqPoly& h, const Bitstring& F) {
  const int n = params.n;
  if (F.size != n) throw std::invalid_argument("assignment length must equal N");
  const auto c = convolve_mod16(n, h_mod16(h), F.bits);
  Bitstring g = Bitstring::zeros(n);
  for (int k = 0; k < n; ++k) g.set((k + n - 1) % n, c[static_cast<std::size_t>(k)] & 1u);
  for (int k = 0; k < n; ++k) {
    const unsigned expect = 2u * g.get(k) + g.get((k + n - 1) % n);
    if (c[static_cast<std::size_t>(k)] != expect)
      throw inconsistent_solution("recovered g does not satisfy (1+(2+X)F)*h = (2+X)*g mod 16");
  }
  return g;
}

// --- statistics ---

struct SystemLevelStats {
  int level = 0;
  int n_equations = 0;
  int max_degree = 0;
  std::size_t max_terms = 0;
  double mean_terms = 0.0;
};

inline std::vector<SystemLevelStats> system_stats(const EquationSystem& sys) {
  std::vector<SystemLevelStats> out;
  for (int level = 1; level <= 3; ++level) {
    SystemLevelStats s;
    s.level = level;
    std::size_t total = 0;
    for (const auto& eq : sys.equations) {
      if (eq.level != level) continue;
      ++s.n_equations;
      const auto st = anf_stats(eq.poly);
      s.max_degree = std::max(s.max_degree, st.degree);
      s.max_terms = std::max(s.max_terms, st.term_count);
      total += st.term_count;
    }
    if (s.n_equations == 0) continue;
    s.mean_terms = static_cast<double>(total) / s.n_equations;
    out.push_back(s);
  }
  return out;
}

// True iff the assignment zeroes every equation.
inline bool assignment_satisfies(const EquationSystem& sys, const Assignment& x) {
  for (const auto& eq : sys.equations)
    if (anf_eval(eq.poly, x)) return false;
  return true;
}

// --- system file: "ntru-witt-anf v1" ---

inline void write_system_file(std::ostream& os, const EquationSystem& sys) {
  os << "ntru-witt-anf v1\n";
  os << "vars " << sys.n_vars << "\n";
  os << "eqs " << sys.equations.size() << "\n";
  for (const auto& eq : sys.equations) {
    os << "# bit " << eq.level << " k " << eq.k << "\n";
    os << render_anf(eq.poly) << "\n";
  }
}

inline EquationSystem parse_system_file(std::istream& is) {
  int line_no = 0;
  auto next_line = [&](const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw parse_error(std::string("missing ") + what, line_no + 1);
    ++line_no;
    return line;
  };

  if (next_line("header") != "ntru-witt-anf v1")
    throw parse_error("bad system file header", line_no);

  EquationSystem sys;
  std::size_t n_eqs = 0;
  try {
    std::string l = next_line("vars");
    if (l.rfind("vars ", 0) != 0) throw parse_error("expected `vars <N>`", line_no);
    sys.n_vars = std::stoi(l.substr(5));
    l = next_line("eqs");
    if (l.rfind("eqs ", 0) != 0) throw parse_error("expected `eqs <count>`", line_no);
    n_eqs = std::stoul(l.substr(4));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what(), line_no);
  }
  if (sys.n_vars < 1 || sys.n_vars > 64)
    throw parse_error("vars must be in [1, 64]", line_no);

  for (std::size_t e = 0; e < n_eqs; ++e) {
    Equation eq;
    {
      const std::string l = next_line("equation comment");
      int level = 0, k = 0;
      if (std::sscanf(l.c_str(), "# bit %d k %d", &level, &k) != 2)
        throw parse_error("expected `# bit <level> k <k>`", line_no);
      if (level < 1 || level > 3 || k < 0 || k >= sys.n_vars)
        throw parse_error("equation tag out of range", line_no);
      eq.level = level;
      eq.k = k;
    }
    {
      const std::string l = next_line("polynomial");
      try {
        eq.poly = parse_anf(l);
      } catch (const std::invalid_argument& ex) {
        throw parse_error(ex.what(), line_no);
      }
      const Monomial in_range =
          sys.n_vars >= 64 ? ~Monomial{0} : (Monomial{1} << sys.n_vars) - 1;
      if (eq.poly.support() & ~in_range)
        throw parse_error("polynomial uses a variable >= vars", line_no);
    }
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

}  // namespace ntruwitt
