// Acceptance suite: one checkable criterion per section, each printing a
// single PASS/FAIL line (plus indented details). Run with no arguments for
// the full suite or with --criterion N for one section.

#include <algorithm>
#include <cstring>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mwd/charspec.hpp"
#include "mwd/claims.hpp"
#include "mwd/constructions.hpp"
#include "mwd/design.hpp"
#include "mwd/exactla.hpp"
#include "mwd/gf.hpp"
#include "mwd/io.hpp"
#include "mwd/optimality.hpp"

using namespace mwd;

namespace {

struct Section {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("note " + what); }
};

FiniteField field_for(std::int64_t s) {
  const auto [p, m] = factor_prime_power(s);
  return FiniteField(p, m);
}

const std::vector<std::pair<std::int64_t, int>> kD1Instances = {
    {5, 2}, {7, 2}, {7, 3}, {9, 2}, {11, 2}, {13, 2}, {13, 3}, {13, 4}};
const std::vector<std::pair<std::int64_t, int>> kD2Instances = {{7, 2}, {13, 2}, {13, 4}};
const std::vector<std::int64_t> kD3Instances = {7, 11};

int acceptance_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(4u, hw == 0 ? 1u : hw));
}

// Criteria 6, 7 and 9 share these runs when executed in one process.
const OptimalityReport& cached_verify(const std::string& key) {
  static std::map<std::string, OptimalityReport> cache;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  VerifyOptions options;
  options.workers = acceptance_workers();
  OptimalityReport report;
  if (key == "d1") {
    CompetitorClass cls;
    cls.totally_binary = true;
    report = verify_m_optimality(build_d1_star(field_for(5), 2), cls, 500, 42, options);
  } else if (key == "d2") {
    report = verify_m_optimality(build_d2_star(field_for(7), 2), CompetitorClass{}, 500, 42, options);
  } else if (key == "d3") {
    report = verify_m_optimality(build_d3_star(field_for(7)), CompetitorClass{}, 500, 42, options);
  }
  return cache.emplace(key, std::move(report)).first->second;
}

// ---- criterion 1 -----------------------------------------------------------

Section criterion_dual_path() {
  Section sec;
  auto run = [&sec](const std::string& name, const Design& d) {
    const bool equal = c_matrix_closedform(d) == c_matrix_definitional(d);
    sec.check(equal, name + ": closed form equals the definitional C-matrix exactly");
  };
  for (const auto& [s, h] : kD1Instances) {
    run("d1(" + std::to_string(s) + "," + std::to_string(h) + ")", build_d1_star(field_for(s), h));
  }
  for (const auto& [s, h] : kD2Instances) {
    run("d2(" + std::to_string(s) + "," + std::to_string(h) + ")", build_d2_star(field_for(s), h));
  }
  for (std::int64_t s : kD3Instances) {
    run("d3(" + std::to_string(s) + ")", build_d3_star(field_for(s)));
  }
  return sec;
}

// ---- criterion 2 -----------------------------------------------------------

Section criterion_d1_spectrum() {
  Section sec;
  const FiniteField f = field_for(5);
  const Design d = build_d1_star(f, 2);
  const RMatrix c = c_matrix_definitional(d);

  const Spectrum expected = Spectrum::exact_lines(
      {{Rational(0), 1}, {Rational(1), 4}, {Rational(5, 3), 4}, {Rational(2), 1}});
  sec.check(verify_spectrum(c, expected), "d1(5,2) spectrum {0:1, 1:4, 5/3:4, 2:1} rank-certified");

  const Cyclotomy cy(f, 2);
  const DiagonalizationResult diag = diagonalize_L(build_character_table(cy), cyclotomic_matrices(cy));
  sec.check(diag.offdiag_residual <= 1e-9,
            "character-sum diagonalization off-diagonal residual " + std::to_string(diag.offdiag_residual));
  const Spectrum assembled = appendix_spectrum_d1(f, 2);
  sec.check(assembled.exact == expected.exact, "character-sum route reproduces the same exact spectrum");
  return sec;
}

// ---- criterion 3 -----------------------------------------------------------

Section criterion_gauss_moduli() {
  Section sec;
  for (const auto& [s, h] : kD1Instances) {
    const CharacterTable ct = build_character_table(Cyclotomy(field_for(s), h));
    const auto moduli = gauss_sum_moduli(ct);
    bool ok = std::abs(moduli[0] - 1.0) <= 1e-9;
    double worst = std::abs(moduli[0] - 1.0);
    for (int i = 1; i < h; ++i) {
      const double err = std::abs(moduli[i] - static_cast<double>(s));
      ok = ok && err <= 1e-9;
      worst = std::max(worst, err);
    }
    std::ostringstream os;
    os << "(s=" << s << ", h=" << h << "): |g(chi_i)|^2 = s for i != 0, max error " << worst;
    sec.check(ok, os.str());
  }
  return sec;
}

// ---- criterion 4 -----------------------------------------------------------

Section criterion_d3_properties() {
  Section sec;
  const Design d = build_d3_star(field_for(7));
  sec.check(is_equireplicate(d) && replication_vector(d)(0) == 4, "d3(7) equireplicate with r = 4");

  const IntMatrix n_xi = incidence_matrix(d, FactorRef::V(), FactorRef::block(0)).transpose();
  bool bibd_xi = (n_xi.rowwise().sum().array() == 8).all() && (n_xi.colwise().sum().array() == 4).all();
  const IntMatrix gram_xi = n_xi * n_xi.transpose();
  for (Eigen::Index i = 0; i < 7 && bibd_xi; ++i)
    for (Eigen::Index j = 0; j < 7; ++j) bibd_xi = bibd_xi && gram_xi(i, j) == (i == j ? 8 : 4);
  sec.check(bibd_xi, "N_xi' is a (7,14,8,4,4) block-design incidence by exact counting");

  const IntMatrix n_inf = incidence_matrix(d, FactorRef::V(), FactorRef::block(1)).transpose();
  bool bibd_inf = (n_inf.rowwise().sum().array() == 7).all() && (n_inf.colwise().sum().array() == 4).all();
  const IntMatrix gram_inf = n_inf * n_inf.transpose();
  for (Eigen::Index i = 0; i < 8 && bibd_inf; ++i)
    for (Eigen::Index j = 0; j < 8; ++j) bibd_inf = bibd_inf && gram_inf(i, j) == (i == j ? 7 : 3);
  sec.check(bibd_inf, "N_inf' is a (8,14,7,4,3) block-design incidence by exact counting");

  sec.check(n_xi * n_inf.transpose() == 4 * IntMatrix::Ones(7, 8),
            "adjusted orthogonality: N_xi' N_inf = 4 J exactly");

  const Spectrum expected = Spectrum::exact_lines(
      {{Rational(0), 1}, {Rational(24, 7), 7}, {Rational(7, 2), 6}});
  sec.check(verify_spectrum(c_matrix_definitional(d), expected),
            "d3(7) spectrum {0:1, 24/7:7, 7/2:6} rank-certified");
  return sec;
}

// ---- criterion 5 -----------------------------------------------------------

Section criterion_d2_spectrum() {
  Section sec;
  const Design d = build_d2_star(field_for(7), 2);
  const RMatrix c = c_matrix_definitional(d);

  const Spectrum computed = Spectrum::exact_lines(
      {{Rational(0), 1}, {Rational(14, 5), 6}, {Rational(4), 7}});
  sec.check(verify_spectrum(c, computed),
            "d2(7,2): value 14/5 with multiplicity exactly 6, remaining positive eigenvalues 4");

  Eigen::Index stated_total = 0;
  for (const auto& [value, mult] : d2_stated_spectrum_lines(7, 2)) stated_total += mult;
  sec.check(stated_total != d.v,
            "discrepancy flag: stated multiplicities total " + std::to_string(stated_total) +
                " but v = " + std::to_string(d.v) + " (lemma_5_5_b: MULTIPLICITY_DISCREPANCY)");
  return sec;
}

// ---- criterion 6 -----------------------------------------------------------

void summarize_sampling(Section& sec, const std::string& name, const OptimalityReport& report) {
  std::int64_t majorized = 0;
  double worst_delta = -1e300;
  bool connected = true;
  for (const auto& verdict : report.verdicts) {
    majorized += verdict.weak_majorization ? 1 : 0;
    worst_delta = std::max({worst_delta, verdict.psi_a_delta, verdict.psi_d_delta, verdict.psi_e_delta});
    connected = connected && verdict.connected;
  }
  std::ostringstream os;
  os << name << ": weak majorization " << majorized << "/" << report.verdicts.size()
     << ", max psi delta " << worst_delta << " (skipped disconnected "
     << report.skipped_disconnected << ")";
  sec.check(majorized == static_cast<std::int64_t>(report.verdicts.size()) && connected &&
                worst_delta <= kMajorizationTol,
            os.str());
}

Section criterion_sampling() {
  Section sec;
  summarize_sampling(sec, "d1(5,2) in the binary equireplicate class", cached_verify("d1"));
  summarize_sampling(sec, "d2(7,2) in the equireplicate class", cached_verify("d2"));
  summarize_sampling(sec, "d3(7) in the equireplicate class", cached_verify("d3"));
  return sec;
}

// ---- criterion 7 -----------------------------------------------------------

Section criterion_proof_chain() {
  Section sec;
  for (const std::string key : {std::string("d2"), std::string("d3")}) {
    const OptimalityReport& report = cached_verify(key);
    std::int64_t chain_ok = 0;
    for (const auto& verdict : report.verdicts) {
      if (verdict.chain_cd_le_c1.value_or(false) && verdict.chain_c1_le_c2.value_or(false)) ++chain_ok;
    }
    sec.check(chain_ok == static_cast<std::int64_t>(report.verdicts.size()),
              key + ": exact Loewner chain C_d <= C_1 <= C_2 held for " + std::to_string(chain_ok) +
                  "/" + std::to_string(report.verdicts.size()) + " competitors");
  }

  const auto gamma_d2 = gamma_bound(Rational(4), Rational(6, 5), 6, 14);
  sec.check(gamma_d2 == positive_eigenvalues_exact(d2_spectrum(7, 2)),
            "d2(7,2): gamma bound vector equals the exact spectrum");
  // For d3 the argument sharpens the flat tail d to r(s-1)/s before it can
  // match the spectrum; that refined vector is what must coincide.
  const auto gamma_d3 = gamma_bound(Rational(4), Rational(1, 2), 6, 14, Rational(24, 7));
  sec.check(gamma_d3 == positive_eigenvalues_exact(d3_spectrum(7)),
            "d3(7): refined gamma bound vector (tail 24/7) equals the exact spectrum");
  return sec;
}

// ---- criterion 8 -----------------------------------------------------------

std::uint64_t rng_state;

std::uint64_t next_u64() {
  rng_state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = rng_state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int64_t rand_int(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

RMatrix random_int_matrix(Eigen::Index rows, Eigen::Index cols, std::int64_t lo, std::int64_t hi) {
  RMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Rational(rand_int(lo, hi));
  return m;
}

Section criterion_lemma_suite() {
  Section sec;
  constexpr int kCases = 1000;

  {  // minimum of the squared sum: sum x_i^2 >= T^2 / n, exact
    rng_state = 101;
    int ok = 0;
    for (int trial = 0; trial < kCases; ++trial) {
      const Eigen::Index n = rand_int(1, 8);
      Rational sum(0), sum_sq(0);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Rational x(rand_int(-9, 9));
        sum += x;
        sum_sq += x * x;
      }
      if (sum_sq >= sum * sum / Rational(n)) ++ok;
    }
    sec.check(ok == kCases, "lemma_5_6: " + std::to_string(ok) + "/1000 (sum of squares floor, exact)");
  }

  {  // row-sum Gram floor: A A' >= b b' / n, exact Loewner
    rng_state = 102;
    int ok = 0;
    for (int trial = 0; trial < kCases; ++trial) {
      const RMatrix a = random_int_matrix(rand_int(1, 5), rand_int(1, 5), -6, 6);
      const RVector b = a.rowwise().sum();
      if (loewner_geq(a * a.transpose(), (b * b.transpose()) / Rational(a.cols()))) ++ok;
    }
    sec.check(ok == kCases, "lemma_5_7: " + std::to_string(ok) + "/1000 (Gram versus row sums, exact)");
  }

  {  // sum of Grams against the total: inequality (a) and identity (b), exact
    rng_state = 103;
    int ok = 0;
    for (int trial = 0; trial < kCases; ++trial) {
      const int q = static_cast<int>(rand_int(2, 4));
      const Eigen::Index rows = rand_int(1, 4), cols = rand_int(1, 4);
      std::vector<RMatrix> mats;
      RMatrix total = RMatrix::Zero(rows, cols);
      RMatrix gram_sum = RMatrix::Zero(rows, rows);
      for (int i = 0; i < q; ++i) {
        mats.push_back(random_int_matrix(rows, cols, -5, 5));
        total += mats.back();
        gram_sum += mats.back() * mats.back().transpose();
      }
      bool good = loewner_geq(gram_sum, (total * total.transpose()) / Rational(q));
      RMatrix pair_sum = RMatrix::Zero(rows, rows);
      for (int i = 0; i < q; ++i) {
        for (int j = 0; j < i; ++j) {
          const RMatrix diff = mats[i] - mats[j];
          pair_sum += diff * diff.transpose();
        }
      }
      good = good && (Rational(q) * gram_sum - total * total.transpose() == pair_sum);
      if (good) ++ok;
    }
    sec.check(ok == kCases, "lemma_5_8: " + std::to_string(ok) + "/1000 (both parts, exact)");
  }

  {  // stated floor tr(HH') >= m^2 v r on nonnegative integer matrices with
     // constant row sums r < b. The bound fails off the all-equal binary
     // family: mass spread across disjoint supports drives tr(HH') down to
     // the vicinity of m v r, so honest random sampling must refute it.
    rng_state = 104;
    int ok = 0;
    std::string example;
    for (int trial = 0; trial < kCases; ++trial) {
      const int m = static_cast<int>(rand_int(2, 4));
      const Eigen::Index v = rand_int(1, 4);
      const std::int64_t b = rand_int(2, 6);
      const std::int64_t r = rand_int(1, b - 1);
      IntMatrix h = IntMatrix::Zero(v, b);
      for (int l = 0; l < m; ++l) {
        for (Eigen::Index i = 0; i < v; ++i) {
          std::int64_t left = r;  // split r over the row, nonnegative cells
          for (std::int64_t j = 0; j < b - 1; ++j) {
            const std::int64_t take = rand_int(0, left);
            h(i, j) += take;
            left -= take;
          }
          h(i, b - 1) += left;
        }
      }
      const std::int64_t trace = (h.array() * h.array()).sum();
      const std::int64_t floor = static_cast<std::int64_t>(m) * m * v * r;
      if (trace >= floor) {
        ++ok;
      } else if (example.empty()) {
        std::ostringstream os;
        os << "m=" << m << " v=" << v << " b=" << b << " r=" << r << " gives tr(HH')=" << trace
           << " < " << floor;
        example = os.str();
      }
    }
    sec.check(ok == kCases, "lemma_5_10: " + std::to_string(ok) +
                                "/1000 (stated floor tr(HH') >= m^2 v r; first counterexample: " +
                                example + ")");
    if (ok != kCases) {
      sec.note("the floor is attained when all summands are equal and binary (then tr = m^2 v r "
               "exactly) but is not a lower bound over the stated family; see the verification "
               "reports' per-competitor trace_bound field for the same effect in context");
    }
  }

  {  // Loewner dominance pushes spectra: A >= B implies weak majorization
    rng_state = 105;
    int ok = 0;
    for (int trial = 0; trial < kCases; ++trial) {
      const Eigen::Index n = rand_int(2, 6);
      RMatrix b(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
          b(i, j) = Rational(rand_int(-4, 4), rand_int(1, 3));
          b(j, i) = b(i, j);
        }
      }
      const RMatrix l = random_int_matrix(n, n, -2, 2);
      const RMatrix a = b + l * l.transpose();
      auto expand = [](const Spectrum& sp) {
        std::vector<double> out;
        for (const auto& [value, mult] : sp.numeric) out.insert(out.end(), mult, value);
        return out;
      };
      if (loewner_geq(a, b) &&
          weakly_majorized_above(expand(eigenvalues_numeric(a)), expand(eigenvalues_numeric(b)), 1e-7)) {
        ++ok;
      }
    }
    sec.check(ok == kCases, "lemma_3_2: " + std::to_string(ok) + "/1000 (dominance to majorization)");
  }

  {  // two-level bound: conclusion re-verified whenever the hypotheses hold
    rng_state = 106;
    int ok = 0, held = 0;
    for (int trial = 0; trial < kCases; ++trial) {
      const Rational a(rand_int(1, 4), rand_int(1, 2));
      const Rational b = a + Rational(rand_int(1, 3), rand_int(1, 2));
      const int n = static_cast<int>(rand_int(2, 8));
      const int m = static_cast<int>(rand_int(1, n - 1));
      std::vector<Rational> y;
      for (int i = 0; i < n; ++i) y.push_back(Rational(rand_int(0, 12), rand_int(1, 2)));
      try {
        if (lemma33_bound(a, b, m, n, y)) ++held;  // throws if the bound itself broke
        ++ok;
      } catch (const Error&) {
      }
    }
    sec.check(ok == kCases && held > 0,
              "lemma_3_3: " + std::to_string(ok) + "/1000 (hypotheses held in " + std::to_string(held) +
                  " cases, conclusion verified in each)");
  }

  return sec;
}

// ---- criterion 9 -----------------------------------------------------------

Section criterion_determinism() {
  Section sec;
  VerifyOptions options;
  options.workers = acceptance_workers();

  {
    CompetitorClass cls;
    cls.totally_binary = true;
    const Design d1 = build_d1_star(field_for(5), 2);
    const std::string first = dump_json(report_to_json(cached_verify("d1")));
    const std::string second = dump_json(report_to_json(verify_m_optimality(d1, cls, 500, 42, options)));
    sec.check(first == second, "d1(5,2) verification report is byte-identical across runs");
  }
  {
    const Design d2 = build_d2_star(field_for(7), 2);
    const std::string first = dump_json(report_to_json(cached_verify("d2")));
    const std::string second =
        dump_json(report_to_json(verify_m_optimality(d2, CompetitorClass{}, 500, 42, options)));
    sec.check(first == second, "d2(7,2) verification report is byte-identical across runs");
  }
  {
    const Design d3 = build_d3_star(field_for(7));
    const std::string first = dump_json(report_to_json(cached_verify("d3")));
    const std::string second =
        dump_json(report_to_json(verify_m_optimality(d3, CompetitorClass{}, 500, 42, options)));
    sec.check(first == second, "d3(7) verification report is byte-identical across runs");
  }
  {
    const std::string a = dump_json(design_to_json(build_d1_star(field_for(9), 2)));
    const std::string b = dump_json(design_to_json(build_d1_star(field_for(9), 2)));
    sec.check(a == b, "design documents are byte-identical across runs");
  }
  return sec;
}

struct Criterion {
  int id;
  const char* name;
  Section (*run)();
};

const Criterion kCriteria[] = {
    {1, "C-matrix dual-path equality", criterion_dual_path},
    {2, "d1 spectrum, rank-certified and character-sum route", criterion_d1_spectrum},
    {3, "Gauss-sum moduli", criterion_gauss_moduli},
    {4, "d3 construction properties", criterion_d3_properties},
    {5, "d2 spectrum values and discrepancy flag", criterion_d2_spectrum},
    {6, "M-optimality sampling, 500 competitors at seed 42", criterion_sampling},
    {7, "proof-chain Loewner checks and gamma identities", criterion_proof_chain},
    {8, "matrix-inequality lemma suite, 1000 cases each", criterion_lemma_suite},
    {9, "determinism of report files", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  bool verbose = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--verbose") == 0) {
      verbose = true;
    } else {
      std::cerr << "usage: acceptance [--criterion N] [--verbose]\n";
      return 2;
    }
  }

  bool all_pass = true;
  for (const auto& criterion : kCriteria) {
    if (only != 0 && criterion.id != only) continue;
    Section sec;
    try {
      sec = criterion.run();
    } catch (const std::exception& e) {
      sec.pass = false;
      sec.details.push_back(std::string("FAIL exception: ") + e.what());
    }
    all_pass = all_pass && sec.pass;
    std::cout << "criterion " << criterion.id << " (" << criterion.name
              << "): " << (sec.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& line : sec.details) {
      if (verbose || !sec.pass || line.rfind("note", 0) == 0) std::cout << "  " << line << "\n";
    }
  }
  return all_pass ? 0 : 1;
}
