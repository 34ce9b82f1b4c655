// Command-line front end: construct the built-in multi-way designs, compute
// and certify their spectra, run sampled optimality verification, compare
// designs, and emit the character-sum diagnostics. All outputs are
// deterministic JSON (CSV for raw unit tables on request).

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mwd/charspec.hpp"
#include "mwd/claims.hpp"
#include "mwd/constructions.hpp"
#include "mwd/design.hpp"
#include "mwd/exactla.hpp"
#include "mwd/gf.hpp"
#include "mwd/io.hpp"
#include "mwd/optimality.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitParameterError = 2;
constexpr int kExitInternalError = 3;

struct Options {
  std::string design;   // d1 | d2 | d3 | path to a design document
  std::int64_t s = 0;
  int h = 2;
  std::string reps;     // comma-separated representative overrides for d1
  std::string cls = "equireplicate";
  int competitors = 100;
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "json";
  std::string file_a, file_b;  // compare inputs
};

void emit(const Options& opt, const std::string& content) {
  if (opt.out.empty()) {
    std::cout << content;
  } else {
    mwd::write_text_file(opt.out, content);
  }
}

mwd::FiniteField field_for(std::int64_t s) {
  const auto [p, m] = mwd::factor_prime_power(s);
  return mwd::FiniteField(p, m);
}

bool is_builtin(const std::string& name) { return name == "d1" || name == "d2" || name == "d3"; }

mwd::Design build_named(const Options& opt) {
  if (opt.s < 2) throw mwd::ParameterError("bad_parameters", "--s is required for built-in constructions");
  const mwd::FiniteField field = field_for(opt.s);
  if (opt.design == "d1") {
    std::optional<std::vector<std::int64_t>> reps;
    if (!opt.reps.empty()) {
      std::vector<std::int64_t> parsed;
      std::size_t pos = 0;
      while (pos <= opt.reps.size()) {
        const auto comma = opt.reps.find(',', pos);
        const std::string tok = opt.reps.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
          std::size_t used = 0;
          parsed.push_back(std::stoll(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw mwd::ParameterError("bad_parameters", "cannot parse --reps item '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      reps = std::move(parsed);
    }
    return mwd::build_d1_star(field, opt.h, reps);
  }
  if (opt.design == "d2") return mwd::build_d2_star(field, opt.h);
  if (opt.design == "d3") return mwd::build_d3_star(field);
  throw mwd::ParameterError("bad_parameters", "unknown construction " + opt.design);
}

mwd::Design load_or_build(const Options& opt) {
  if (is_builtin(opt.design)) return build_named(opt);
  return mwd::design_from_json(mwd::Json::parse(mwd::read_text_file(opt.design)));
}

int cmd_construct(const Options& opt) {
  const mwd::Design d = build_named(opt);
  if (opt.format == "csv") {
    emit(opt, mwd::design_to_csv(d));
  } else {
    emit(opt, mwd::dump_json(mwd::design_to_json(d)));
  }
  return kExitPass;
}

// Exact spectrum of the definitional C-matrix plus the named closed-form
// cross-checks for the built-in constructions.
int cmd_spectrum(const Options& opt) {
  const mwd::Design d = load_or_build(opt);
  const int h = d.s > 0 ? static_cast<int>(d.v / d.s) : 0;

  mwd::Json j;
  j["command"] = "spectrum";
  j["design"] = d.construction;
  j["s"] = d.s;
  j["h"] = h;
  j["v"] = d.v;
  j["n"] = d.n();

  const mwd::RMatrix c_def = mwd::c_matrix_definitional(d);
  const Eigen::Index rank = mwd::exact_rank(c_def);
  j["rank"] = rank;
  j["connected"] = rank == d.v - 1;
  if (rank != d.v - 1) {
    j["error"] = "disconnected design: rank " + std::to_string(rank) + " < v-1";
    emit(opt, mwd::dump_json(j));
    return kExitVerificationFailure;
  }

  mwd::Json verdicts = mwd::Json::object();
  mwd::Json flags = mwd::Json::array();
  mwd::Json notes = mwd::Json::array();
  bool failed = false;

  const mwd::SettingClass sc = mwd::classify_setting(d.setting);
  {
    std::string kind = "other";
    if (sc.kind == mwd::SettingClass::Kind::Type1) kind = "type1";
    if (sc.kind == mwd::SettingClass::Kind::Type2) kind = "type2";
    if (sc.kind == mwd::SettingClass::Kind::Type3) kind = "type3";
    mwd::Json setting = mwd::Json{{"type", kind}, {"s", sc.s}, {"m", sc.m}};
    if (sc.kind == mwd::SettingClass::Kind::Type2) setting["p"] = sc.p;
    j["setting"] = setting;
  }
  if (sc.kind != mwd::SettingClass::Kind::Other) {
    const bool equal = mwd::c_matrix_closedform(d) == c_def;
    verdicts["lemma_4_1"] = equal ? "PASS" : "FAIL";
    failed = failed || !equal;
  } else {
    notes.push_back("setting is outside the three closed-form types; lemma_4_1 skipped");
  }
  if (d.construction == "d2" && sc.kind == mwd::SettingClass::Kind::Type2) {
    // recorded because the pairwise incidences (h-1)I + J pin the setting to
    // type 2 with p = h-1 even where it is elsewhere labeled type 1
    notes.push_back("d2 setting classifies as type 2 with p = h-1 = " + std::to_string(sc.p));
  }
  if (sc.m < 3) {
    notes.push_back("m = " + std::to_string(sc.m) + " block factors; the optimality theory assumes m >= 3");
  }

  mwd::Spectrum exact;
  bool have_exact = false;
  if (d.construction == "d1") {
    exact = mwd::d1_spectrum(d.s, h);
    const bool ok = mwd::verify_spectrum(c_def, exact);
    verdicts["lemma_5_1_b"] = ok ? "PASS" : "FAIL";
    failed = failed || !ok;
    have_exact = ok;
  } else if (d.construction == "d2") {
    exact = mwd::d2_spectrum(d.s, h);
    const bool ok = mwd::verify_spectrum(c_def, exact);
    verdicts["spectrum_rank_certified"] = ok ? "PASS" : "FAIL";
    failed = failed || !ok;
    have_exact = ok;
    // The stated d2 spectrum does not fill v slots; report the discrepancy
    // instead of asserting it.
    verdicts["lemma_5_5_b"] = "MULTIPLICITY_DISCREPANCY";
    mwd::Spectrum stated;
    stated.mode = mwd::Spectrum::Mode::Exact;
    for (auto& line : mwd::d2_stated_spectrum_lines(d.s, h)) stated.exact.push_back(line);
    mwd::Json flag;
    flag["id"] = "lemma_5_5_b";
    flag["kind"] = "MULTIPLICITY_DISCREPANCY";
    flag["stated"] = mwd::spectrum_to_json(stated);
    flag["stated_multiplicity_total"] = stated.dimension();
    flag["v"] = d.v;
    flag["computed"] = mwd::spectrum_to_json(exact);
    flags.push_back(std::move(flag));
  } else if (d.construction == "d3") {
    exact = mwd::d3_spectrum(d.s);
    const bool ok = mwd::verify_spectrum(c_def, exact);
    verdicts["theorem_5_3_d"] = ok ? "PASS" : "FAIL";
    failed = failed || !ok;
    have_exact = ok;
  }

  if (have_exact) j["spectrum"] = mwd::spectrum_to_json(exact);
  j["numeric_spectrum"] = mwd::spectrum_to_json(mwd::eigenvalues_numeric(c_def));
  j["verdicts"] = verdicts;
  j["flags"] = flags;
  j["notes"] = notes;
  emit(opt, mwd::dump_json(j));
  return failed ? kExitVerificationFailure : kExitPass;
}

int cmd_verify(const Options& opt) {
  const mwd::Design d = load_or_build(opt);
  mwd::CompetitorClass cls;
  cls.equireplicate = true;
  if (opt.cls == "binary-equireplicate") {
    cls.totally_binary = true;
  } else if (opt.cls != "equireplicate") {
    throw mwd::ParameterError("bad_parameters", "--class must be equireplicate or binary-equireplicate");
  }
  mwd::VerifyOptions vopt;
  if (const char* env = std::getenv("MWD_WORKERS")) {
    vopt.workers = std::max(1, std::atoi(env));
  }
  const mwd::OptimalityReport report =
      mwd::verify_m_optimality(d, cls, opt.competitors, opt.seed, vopt);
  emit(opt, mwd::dump_json(mwd::report_to_json(report)));
  return report.pass() ? kExitPass : kExitVerificationFailure;
}

int cmd_compare(const Options& opt) {
  const mwd::Design a = mwd::design_from_json(mwd::Json::parse(mwd::read_text_file(opt.file_a)));
  const mwd::Design b = mwd::design_from_json(mwd::Json::parse(mwd::read_text_file(opt.file_b)));

  mwd::Json j;
  j["command"] = "compare";
  const mwd::RMatrix ca = mwd::c_matrix_definitional(a);
  const mwd::RMatrix cb = mwd::c_matrix_definitional(b);
  const mwd::Spectrum sa = mwd::eigenvalues_numeric(ca);
  const mwd::Spectrum sb = mwd::eigenvalues_numeric(cb);
  j["first"] = mwd::Json{{"construction", a.construction}, {"v", a.v}, {"n", a.n()},
                         {"spectrum", mwd::spectrum_to_json(sa)}};
  j["second"] = mwd::Json{{"construction", b.construction}, {"v", b.v}, {"n", b.n()},
                          {"spectrum", mwd::spectrum_to_json(sb)}};

  const bool same_shape = a.v == b.v;
  if (same_shape) {
    const auto mu_a = mwd::positive_eigenvalues(sa);
    const auto mu_b = mwd::positive_eigenvalues(sb);
    bool equal_spectra = true;
    for (std::size_t i = 0; i < mu_a.size() && equal_spectra; ++i) {
      equal_spectra = std::abs(mu_a[i] - mu_b[i]) <= 1e-9;
    }
    j["equal_spectra"] = equal_spectra;
    if (equal_spectra) j["summary"] = "equal spectra";
    j["first_weakly_majorizes_second_from_above"] = mwd::weakly_majorized_above(mu_a, mu_b);
    j["second_weakly_majorizes_first_from_above"] = mwd::weakly_majorized_above(mu_b, mu_a);
    j["psi"] = mwd::Json{
        {"A", mwd::Json{{"first", mwd::psi(mu_a, mwd::Criterion::A)}, {"second", mwd::psi(mu_b, mwd::Criterion::A)}}},
        {"D", mwd::Json{{"first", mwd::psi(mu_a, mwd::Criterion::D)}, {"second", mwd::psi(mu_b, mwd::Criterion::D)}}},
        {"E", mwd::Json{{"first", mwd::psi(mu_a, mwd::Criterion::E)}, {"second", mwd::psi(mu_b, mwd::Criterion::E)}}}};
  } else {
    j["equal_spectra"] = false;
    j["summary"] = "designs have different treatment counts; only spectra reported";
  }
  emit(opt, mwd::dump_json(j));
  return kExitPass;
}

int cmd_appendix(const Options& opt) {
  if (opt.s < 2) throw mwd::ParameterError("bad_parameters", "--s is required");
  const mwd::FiniteField field = field_for(opt.s);
  const mwd::Cyclotomy cy(field, opt.h);
  const mwd::CharacterTable ct = mwd::build_character_table(cy);
  const mwd::CyclotomicMatrixSet lset = mwd::cyclotomic_matrices(cy);

  mwd::Json j;
  j["command"] = "appendix";
  j["s"] = opt.s;
  j["h"] = opt.h;

  bool failed = false;
  mwd::Json verdicts = mwd::Json::object();

  const auto moduli = mwd::gauss_sum_moduli(ct);
  j["gauss_sum_moduli"] = moduli;
  bool moduli_ok = std::abs(moduli[0] - 1.0) <= 1e-9;
  for (std::size_t i = 1; i < moduli.size(); ++i) {
    moduli_ok = moduli_ok && std::abs(moduli[i] - static_cast<double>(opt.s)) <= 1e-9;
  }
  verdicts["lemma_6_4"] = moduli_ok ? "PASS" : "FAIL";
  failed = failed || !moduli_ok;

  const mwd::DiagonalizationResult diag = mwd::diagonalize_L(ct, lset);
  mwd::Json delta = mwd::Json::array();
  for (int i = 0; i < opt.h; ++i) {
    for (std::int64_t x = 0; x < opt.s; ++x) {
      const auto z = diag.diagonal(i * opt.s + x);
      delta.push_back(mwd::Json{{"i", i}, {"x", x}, {"re", z.real()}, {"im", z.imag()}});
    }
  }
  j["delta"] = std::move(delta);
  j["offdiag_residual"] = diag.offdiag_residual;
  j["formula_residual"] = diag.formula_residual;
  verdicts["lemma_6_3"] = "PASS";  // diagonalize_L throws on residual breach

  const mwd::HHtResult hht = mwd::spectrum_HHt(ct);
  j["hht"] = mwd::Json{{"offdiag_residual", hht.offdiag_residual}, {"formula_residual", hht.formula_residual}};
  verdicts["lemma_6_7"] = "PASS";  // spectrum_HHt throws on residual breach

  if ((opt.s - 1) / opt.h >= 2) {
    const mwd::Spectrum assembled = mwd::appendix_spectrum_d1(field, opt.h);
    const mwd::Design d1 = mwd::build_d1_star(field, opt.h);
    const bool cross = mwd::verify_spectrum(mwd::c_matrix_definitional(d1), assembled);
    j["spectrum"] = mwd::spectrum_to_json(assembled);
    verdicts["theorem_6_1"] = cross ? "PASS" : "FAIL";
    failed = failed || !cross;
  } else {
    j["notes"] = mwd::Json::array({"t = 1: no connected d1 at these parameters; spectrum cross-check skipped"});
  }

  j["verdicts"] = verdicts;
  emit(opt, mwd::dump_json(j));
  return failed ? kExitVerificationFailure : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-way design construction and optimality verification"};
  app.require_subcommand(1);
  // frees the single-dash h for the --h option below
  app.set_help_flag("--help", "print help");
  Options opt;

  auto* construct = app.add_subcommand("construct", "build a design document");
  construct->set_help_flag("--help", "print help");
  construct->add_option("--design", opt.design, "d1 | d2 | d3")->required();
  construct->add_option("--s", opt.s, "field order (prime power)");
  construct->add_option("--h", opt.h, "number of cyclotomic classes");
  construct->add_option("--reps", opt.reps, "comma-separated class representatives (d1)");
  construct->add_option("--out", opt.out, "output path (default stdout)");
  construct->add_option("--format", opt.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  auto* spectrum = app.add_subcommand("spectrum", "exact spectrum and closed-form cross-checks");
  spectrum->set_help_flag("--help", "print help");
  spectrum->add_option("--design", opt.design, "d1 | d2 | d3 | design document path")->required();
  spectrum->add_option("--s", opt.s, "field order (for built-ins)");
  spectrum->add_option("--h", opt.h, "number of cyclotomic classes");
  spectrum->add_option("--out", opt.out, "output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "sampled optimality verification report");
  verify->set_help_flag("--help", "print help");
  verify->add_option("--design", opt.design, "d1 | d2 | d3 | design document path")->required();
  verify->add_option("--s", opt.s, "field order (for built-ins)");
  verify->add_option("--h", opt.h, "number of cyclotomic classes");
  verify->add_option("--class", opt.cls, "equireplicate | binary-equireplicate");
  verify->add_option("--competitors", opt.competitors, "number of sampled competitors");
  verify->add_option("--seed", opt.seed, "random-walk seed");
  verify->add_option("--out", opt.out, "output path (default stdout)");

  auto* compare = app.add_subcommand("compare", "compare two design documents");
  compare->set_help_flag("--help", "print help");
  compare->add_option("first", opt.file_a, "design document")->required();
  compare->add_option("second", opt.file_b, "design document")->required();
  compare->add_option("--out", opt.out, "output path (default stdout)");

  auto* appendix = app.add_subcommand("appendix", "character-sum diagnostics for one (s, h)");
  appendix->set_help_flag("--help", "print help");
  appendix->add_option("--s", opt.s, "field order (prime power)")->required();
  appendix->add_option("--h", opt.h, "number of cyclotomic classes");
  appendix->add_option("--out", opt.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitParameterError;
  }

  try {
    if (construct->parsed()) return cmd_construct(opt);
    if (spectrum->parsed()) return cmd_spectrum(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (appendix->parsed()) return cmd_appendix(opt);
  } catch (const mwd::ParameterError& e) {
    std::cerr << "error" << e.what() << "\n";
    return kExitParameterError;
  } catch (const mwd::VerificationError& e) {
    std::cerr << "error" << e.what() << "\n";
    return kExitVerificationFailure;
  } catch (const mwd::Error& e) {
    std::cerr << "error" << e.what() << "\n";
    return kExitInternalError;
  } catch (const std::exception& e) {
    std::cerr << "error[internal] " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitParameterError;
}
