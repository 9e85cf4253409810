#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ntruwitt/attack.hpp"
#include "ntruwitt/ring.hpp"
#include "ntruwitt/solve.hpp"

namespace ntruwitt {

// One benchmark trial. Timing columns are informative only; every other
// column is deterministic for a fixed seed.
struct BenchRecord {
  int n = 0;
  std::uint32_t q = 0;
  std::uint64_t seed = 0;
  int bits = 0;
  int n_eqs = 0;
  int max_degree = 0;
  std::size_t max_terms_b1 = 0;
  std::size_t max_terms_b2 = 0;
  std::size_t max_terms_b3 = 0;
  std::int64_t gen_ms = 0;
  std::int64_t solve_ms = 0;
  std::int64_t n_solutions = 0;  // -1 marks a failed trial
  bool recovered = false;
};

inline const char* bench_csv_header() {
  return "N,q,seed,bits,n_eqs,max_degree,max_terms_b1,max_terms_b2,max_terms_b3,"
         "gen_ms,solve_ms,n_solutions,recovered";
}

inline void write_csv_row(std::ostream& os, const BenchRecord& r) {
  os << r.n << ',' << r.q << ',' << r.seed << ',' << r.bits << ',' << r.n_eqs << ',' << r.max_degree
     << ',' << r.max_terms_b1 << ',' << r.max_terms_b2 << ',' << r.max_terms_b3 << ',' << r.gen_ms
     << ',' << r.solve_ms << ',' << r.n_solutions << ',' << (r.recovered ? "true" : "false") << '\n';
}

enum class BenchSolver { exhaustive, groebner, none };

// Runs one seeded trial: keygen, system generation, optional solve, recovery
// check. Failures surface as n_solutions = -1 so a sweep can continue.
inline BenchRecord bench_trial(NtruParams params, std::uint64_t seed, int bits, BenchSolver solver) {
  using clock = std::chrono::steady_clock;
  BenchRecord rec;
  rec.n = params.n;
  rec.q = params.q;
  rec.seed = seed;
  rec.bits = bits;
  try {
    const NtruKeySet keys = keygen(params, seed);

    const auto t0 = clock::now();
    const EquationSystem sys = generate_system(keys, bits);
    const auto t1 = clock::now();
    rec.gen_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    rec.n_eqs = static_cast<int>(sys.equations.size());
    for (const auto& s : system_stats(sys)) {
      rec.max_degree = std::max(rec.max_degree, s.max_degree);
      if (s.level == 1) rec.max_terms_b1 = s.max_terms;
      if (s.level == 2) rec.max_terms_b2 = s.max_terms;
      if (s.level == 3) rec.max_terms_b3 = s.max_terms;
    }

    if (solver == BenchSolver::none) {
      rec.n_solutions = 0;
      rec.recovered = false;
      return rec;
    }
    const auto t2 = clock::now();
    SolutionSet sols;
    if (solver == BenchSolver::exhaustive)
      sols = solve_exhaustive(sys, keys.h);
    else
      sols = solutions_from_basis(buchberger(sys));
    const auto t3 = clock::now();
    rec.solve_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t3 - t2).count();
    rec.n_solutions = static_cast<std::int64_t>(sols.solutions.size());
    rec.recovered = sols.contains(keys.F);
  } catch (const std::exception&) {
    rec.n_solutions = -1;
    rec.recovered = false;
  }
  return rec;
}

}  // namespace ntruwitt
