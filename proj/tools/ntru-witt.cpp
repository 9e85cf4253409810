// Command-line driver: key generation, equation-system generation, solving,
// CNF export, micro-benchmarks and a built-in selftest.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ntruwitt/anf.hpp"
#include "ntruwitt/attack.hpp"
#include "ntruwitt/bench.hpp"
#include "ntruwitt/ring.hpp"
#include "ntruwitt/solve.hpp"
#include "ntruwitt/witt.hpp"

namespace nw = ntruwitt;

namespace {

nw::NtruParams make_params(int n, std::uint32_t q) {
  try {
    return nw::NtruParams(n, q);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError(e.what());
  }
}

nw::NtruKeySet load_keys(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open key file: " + path);
  return nw::parse_key_file(is);
}

nw::EquationSystem load_system(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open system file: " + path);
  return nw::parse_system_file(is);
}

void print_stats(const nw::EquationSystem& sys) {
  std::cout << sys.equations.size() << " equations over " << sys.n_vars << " variables\n";
  for (const auto& s : nw::system_stats(sys)) {
    std::cout << "bit " << s.level << ": " << s.n_equations << " eqs, max degree " << s.max_degree
              << ", max terms " << s.max_terms << ", mean terms " << s.mean_terms << "\n";
  }
}

int cmd_keygen(int n, std::uint32_t q, std::uint64_t seed, const std::string& out) {
  const auto keys = nw::keygen(make_params(n, q), seed);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + out);
  nw::write_key_file(os, keys);
  std::cout << "wrote " << out << " (N=" << n << " q=" << q << " seed=" << seed << ", "
            << keys.redraws << " redraws)\n";
  return 0;
}

int cmd_attack(const std::string& keys_path, int bits, const std::string& out) {
  const auto keys = load_keys(keys_path);
  const auto sys = nw::generate_system(keys, bits);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + out);
  nw::write_system_file(os, sys);
  print_stats(sys);
  return 0;
}

int cmd_solve(const std::string& system_path, const std::string& backend, const std::string& keys_path,
              std::size_t pair_budget) {
  const auto sys = load_system(system_path);
  if (sys.equations.empty())
    std::cout << "warning: empty system, every assignment is a solution\n";

  nw::SolutionSet sols;
  try {
    if (backend == "exhaustive") {
      if (!keys_path.empty()) {
        const auto keys = load_keys(keys_path);
        sols = nw::solve_exhaustive(sys, keys.h);
      } else {
        sols = nw::solve_exhaustive(sys);
      }
    } else {
      sols = nw::solutions_from_basis(nw::buchberger(sys, nw::MonomialOrder::degrevlex, pair_budget));
    }
  } catch (const nw::budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  }

  std::cout << sols.solutions.size() << " solution(s)\n";
  const std::size_t cap = 16;
  for (std::size_t i = 0; i < std::min(cap, sols.solutions.size()); ++i)
    std::cout << "F = " << sols.solutions[i].to_string() << "\n";
  if (sols.solutions.size() > cap)
    std::cout << "... (" << sols.solutions.size() - cap << " more suppressed)\n";

  if (!keys_path.empty()) {
    const auto keys = load_keys(keys_path);
    const bool recovered = sols.contains(keys.F);
    std::cout << "recovered=" << (recovered ? "true" : "false") << "\n";
    if (recovered) {
      const auto g = nw::recover_g(keys.params, keys.h, keys.F);
      std::cout << "g check: " << (g == keys.g ? "matches key file" : "MISMATCH") << "\n";
    }
  }
  return sols.solutions.empty() ? 1 : 0;
}

int cmd_export_cnf(const std::string& system_path, const std::string& out) {
  const auto sys = load_system(system_path);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + out);
  nw::export_cnf(os, sys);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_bench(const std::string& n_list, std::uint32_t q, int trials, int bits, std::uint64_t seed0,
              const std::string& solver_name, const std::string& csv) {
  std::vector<int> ns;
  std::stringstream ss(n_list);
  std::string tok;
  while (std::getline(ss, tok, ',')) ns.push_back(std::stoi(tok));
  if (ns.empty()) throw CLI::ValidationError("--n-list needs at least one N");

  nw::BenchSolver solver = nw::BenchSolver::exhaustive;
  if (solver_name == "groebner")
    solver = nw::BenchSolver::groebner;
  else if (solver_name == "none")
    solver = nw::BenchSolver::none;

  const bool fresh = !std::filesystem::exists(csv) || std::filesystem::file_size(csv) == 0;
  std::ofstream os(csv, std::ios::binary | std::ios::app);
  if (!os) throw std::runtime_error("cannot write " + csv);
  if (fresh) os << nw::bench_csv_header() << "\n";

  for (int n : ns) {
    const auto params = make_params(n, q);
    for (int t = 0; t < trials; ++t) {
      const auto rec = nw::bench_trial(params, seed0 + static_cast<std::uint64_t>(t), bits, solver);
      nw::write_csv_row(os, rec);
      os.flush();
      std::cout << "N=" << rec.n << " seed=" << rec.seed << " eqs=" << rec.n_eqs << " gen=" << rec.gen_ms
                << "ms solve=" << rec.solve_ms << "ms solutions=" << rec.n_solutions
                << (rec.recovered ? " recovered" : "") << "\n";
    }
  }
  return 0;
}

struct Suite {
  std::string name;
  long pass = 0;
  long total = 0;
  bool ok() const { return pass == total; }
};

int cmd_selftest() {
  std::vector<Suite> suites;

  {  // transported ring laws on all 256 pairs
    Suite s{"witt pairs"};
    for (unsigned a = 0; a < 16; ++a)
      for (unsigned b = 0; b < 16; ++b) {
        const auto wa = nw::witt_from_residue(a);
        const auto wb = nw::witt_from_residue(b);
        s.total += 1;
        if (nw::witt_to_residue(nw::witt_add(wa, wb)) == (a + b) % 16 &&
            nw::witt_to_residue(nw::witt_mul(wa, wb)) == (a * b) % 16)
          s.pass += 1;
      }
    suites.push_back(s);
  }

  {  // multi-term sums against the integer oracle, fold and closed form
    Suite s{"witt multi-term sums"};
    auto check = [&](const std::vector<unsigned>& residues) {
      std::vector<nw::WittVec<nw::Bit>> terms;
      unsigned total = 0;
      for (unsigned r : residues) {
        terms.push_back(nw::witt_from_residue(r));
        total = (total + r) % 16;
      }
      s.total += 1;
      if (nw::witt_to_residue(nw::witt_sum_fold(terms)) == total &&
          nw::closed_form_sum(terms) == nw::witt_sum_fold(terms))
        s.pass += 1;
    };
    for (unsigned len = 1; len <= 3; ++len) {
      std::vector<unsigned> tuple(len, 0);
      for (;;) {
        check(tuple);
        std::size_t i = 0;
        while (i < len && ++tuple[i] == 16) tuple[i++] = 0;
        if (i == len) break;
      }
    }
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<unsigned> tuple(1 + rng() % 12);
      for (auto& r : tuple) r = static_cast<unsigned>(rng() % 16);
      check(tuple);
    }
    suites.push_back(s);
  }

  {  // ANF operations against truth tables over 8 variables
    Suite s{"anf truth tables"};
    std::mt19937_64 rng(11);
    auto random_poly = [&] {
      std::vector<nw::Monomial> ms;
      const int terms = static_cast<int>(rng() % 12);
      for (int i = 0; i < terms; ++i) ms.push_back(rng() & 0xFFu);
      return nw::AnfPoly::from_monomials(std::move(ms));
    };
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = random_poly();
      const auto b = random_poly();
      const auto sum = a + b;
      const auto prod = a * b;
      bool ok = true;
      for (std::uint64_t x = 0; x < 256; ++x) {
        const nw::Assignment asg(x, 8);
        ok = ok && nw::anf_eval(sum, asg) == (nw::anf_eval(a, asg) ^ nw::anf_eval(b, asg));
        ok = ok && nw::anf_eval(prod, asg) == (nw::anf_eval(a, asg) && nw::anf_eval(b, asg));
      }
      s.total += 1;
      if (ok) s.pass += 1;
    }
    suites.push_back(s);
  }

  {  // end-to-end key recovery at N=7
    Suite s{"end-to-end N=7"};
    const nw::NtruParams params(7, 16);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto keys = nw::keygen(params, seed);
      const auto sys = nw::generate_system(keys, 4);
      const auto sols = nw::solve_exhaustive(sys, keys.h);
      const auto gb_sols = nw::solutions_from_basis(nw::buchberger(sys));
      bool ok = sols.contains(keys.F) && gb_sols.solutions == sols.solutions;
      ok = ok && nw::recover_g(keys.params, keys.h, keys.F) == keys.g;
      s.total += 1;
      if (ok) s.pass += 1;
    }
    suites.push_back(s);
  }

  bool all_ok = true;
  for (const auto& s : suites) {
    std::cout << s.name << ": " << s.pass << "/" << s.total << (s.ok() ? " ok" : " FAILED") << "\n";
    all_ok = all_ok && s.ok();
  }
  std::cout << "selftest: " << (all_ok ? "PASS" : "FAIL") << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NTRU key-recovery toolkit over 4-bit Witt vectors"};
  app.require_subcommand(1);

  int n = 23;
  std::uint32_t q = 128;
  std::uint64_t seed = 1;
  std::uint64_t seed0 = 1;
  int bits = 3;
  int trials = 1;
  std::string out, keys_path, system_path, backend = "exhaustive", n_list, csv, solver = "exhaustive";
  std::size_t pair_budget = 1u << 20;

  auto* keygen_cmd = app.add_subcommand("keygen", "generate a key set and write a key file");
  keygen_cmd->add_option("--n", n, "ring dimension N (prime)")->required();
  keygen_cmd->add_option("--q", q, "modulus q (power of two, >= 16)")->required();
  keygen_cmd->add_option("--seed", seed, "RNG seed")->required();
  keygen_cmd->add_option("--out", out, "output key file")->required();

  auto* attack_cmd = app.add_subcommand("attack", "derive the ANF equation system from a key file");
  attack_cmd->add_option("--keys", keys_path, "key file")->required();
  attack_cmd->add_option("--bits", bits, "Witt bits to use (2, 3 or 4)")->check(CLI::Range(2, 4))->required();
  attack_cmd->add_option("--out", out, "output system file")->required();

  auto* solve_cmd = app.add_subcommand("solve", "solve a system file");
  solve_cmd->add_option("--system", system_path, "system file")->required();
  solve_cmd->add_option("--backend", backend, "exhaustive | groebner")
      ->check(CLI::IsMember({"exhaustive", "groebner"}));
  solve_cmd->add_option("--keys", keys_path, "key file for the fast numeric path and recovery check");
  solve_cmd->add_option("--pair-budget", pair_budget, "S-pair budget for the groebner backend");

  auto* export_cmd = app.add_subcommand("export-cnf", "convert a system file to extended DIMACS");
  export_cmd->add_option("--system", system_path, "system file")->required();
  export_cmd->add_option("--out", out, "output CNF file")->required();

  auto* bench_cmd = app.add_subcommand("bench", "run seeded trials and append CSV rows");
  bench_cmd->add_option("--n-list", n_list, "comma-separated list of N values")->required();
  bench_cmd->add_option("--q", q, "modulus q");
  bench_cmd->add_option("--trials", trials, "trials per N (seeds seed0..seed0+trials-1)");
  bench_cmd->add_option("--bits", bits, "Witt bits to use")->check(CLI::Range(2, 4));
  bench_cmd->add_option("--seed0", seed0, "first seed");
  bench_cmd->add_option("--solver", solver, "exhaustive | groebner | none")
      ->check(CLI::IsMember({"exhaustive", "groebner", "none"}));
  bench_cmd->add_option("--csv", csv, "CSV output path")->required();

  app.add_subcommand("selftest", "run the built-in oracle suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (keygen_cmd->parsed()) return cmd_keygen(n, q, seed, out);
    if (attack_cmd->parsed()) return cmd_attack(keys_path, bits, out);
    if (solve_cmd->parsed()) return cmd_solve(system_path, backend, keys_path, pair_budget);
    if (export_cmd->parsed()) return cmd_export_cnf(system_path, out);
    if (bench_cmd->parsed()) return cmd_bench(n_list, q, trials, bits, seed0, solver, csv);
    return cmd_selftest();
  } catch (const nw::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
