#include "mwd/io.hpp"

#include <fstream>
#include <sstream>

namespace mwd {

namespace {

Json table_to_json(const std::vector<Factor>& factors, const IntMatrix& eta2, const IntVector& labels,
                   std::int64_t s, const std::string& construction, const char* label_key) {
  Json j;
  j["s"] = s;
  j["construction"] = construction;
  j["factors"] = Json::array();
  for (const auto& f : factors) j["factors"].push_back(Json{{"name", f.name}, {"levels", f.levels}});
  j["units"] = Json::array();
  for (Eigen::Index u = 0; u < eta2.rows(); ++u) {
    Json unit;
    unit["id"] = u;
    unit["levels"] = Json::object();
    for (int k = 0; k < static_cast<int>(factors.size()); ++k) unit["levels"][factors[k].name] = eta2(u, k);
    unit[label_key] = labels(u);
    j["units"].push_back(std::move(unit));
  }
  return j;
}

void table_from_json(const Json& j, const char* label_key, std::vector<Factor>& factors, IntMatrix& eta2,
                     IntVector& labels, std::int64_t& s, std::string& construction) {
  if (!j.contains("factors") || !j.contains("units")) {
    throw ParameterError("io_error", "document needs 'factors' and 'units'");
  }
  s = j.value("s", std::int64_t{0});
  construction = j.value("construction", std::string{"custom"});
  factors.clear();
  for (const auto& f : j.at("factors")) {
    factors.push_back({f.at("name").get<std::string>(), f.at("levels").get<std::int64_t>()});
  }
  const auto& units = j.at("units");
  eta2.resize(static_cast<Eigen::Index>(units.size()), static_cast<Eigen::Index>(factors.size()));
  labels.resize(static_cast<Eigen::Index>(units.size()));
  Eigen::Index u = 0;
  for (const auto& unit : units) {
    const auto& levels = unit.at("levels");
    for (int k = 0; k < static_cast<int>(factors.size()); ++k) {
      if (!levels.contains(factors[k].name)) {
        throw ParameterError("io_error", "unit misses level for factor " + factors[k].name);
      }
      eta2(u, k) = levels.at(factors[k].name).get<std::int64_t>();
    }
    if (!unit.contains(label_key)) {
      throw ParameterError("io_error", std::string("unit misses '") + label_key + "'");
    }
    labels(u) = unit.at(label_key).get<std::int64_t>();
    ++u;
  }
}

}  // namespace

Json design_to_json(const Design& d) {
  return table_to_json(d.setting.factors, d.setting.eta2, d.eta1, d.s, d.construction, "treatment");
}

Design design_from_json(const Json& j) {
  Design d;
  table_from_json(j, "treatment", d.setting.factors, d.setting.eta2, d.eta1, d.s, d.construction);
  d.v = d.eta1.size() == 0 ? 0 : d.eta1.maxCoeff() + 1;
  d.validate();
  return d;
}

Json mep_to_json(const MainEffectPlan& plan) {
  return table_to_json(plan.factors, plan.levels, plan.block_of, plan.s, "mep", "block");
}

MainEffectPlan mep_from_json(const Json& j) {
  MainEffectPlan plan;
  std::string construction;
  table_from_json(j, "block", plan.factors, plan.levels, plan.block_of, plan.s, construction);
  plan.blocks = plan.block_of.size() == 0 ? 0 : plan.block_of.maxCoeff() + 1;
  return plan;
}

std::string design_to_csv(const Design& d) {
  std::ostringstream os;
  for (int j = 0; j < d.setting.m(); ++j) os << d.setting.factors[j].name << ',';
  os << "treatment\n";
  for (Eigen::Index u = 0; u < d.n(); ++u) {
    for (int j = 0; j < d.setting.m(); ++j) os << d.setting.eta2(u, j) << ',';
    os << d.eta1(u) << '\n';
  }
  return os.str();
}

Json spectrum_to_json(const Spectrum& sp) {
  Json j;
  j["mode"] = sp.mode == Spectrum::Mode::Exact ? "exact" : "numeric";
  j["eigenvalues"] = Json::array();
  if (sp.mode == Spectrum::Mode::Exact) {
    for (const auto& [value, mult] : sp.exact) {
      j["eigenvalues"].push_back(Json{{"value", to_string(value)}, {"multiplicity", mult}});
    }
  } else {
    j["tol"] = sp.tol;
    for (const auto& [value, mult] : sp.numeric) {
      j["eigenvalues"].push_back(Json{{"value", value}, {"multiplicity", mult}});
    }
  }
  return j;
}

Spectrum spectrum_from_json(const Json& j) {
  Spectrum sp;
  const bool exact = j.at("mode").get<std::string>() == "exact";
  sp.mode = exact ? Spectrum::Mode::Exact : Spectrum::Mode::Numeric;
  if (!exact) sp.tol = j.value("tol", 0.0);
  for (const auto& line : j.at("eigenvalues")) {
    const auto mult = line.at("multiplicity").get<Eigen::Index>();
    if (exact) {
      sp.exact.emplace_back(rational_from_string(line.at("value").get<std::string>()), mult);
    } else {
      sp.numeric.emplace_back(line.at("value").get<double>(), mult);
    }
  }
  return sp;
}

Json matrix_to_json(const RMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["entries"] = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_string(m(i, c)));
    j["entries"].push_back(std::move(row));
  }
  return j;
}

Json report_to_json(const OptimalityReport& report) {
  Json j;
  j["candidate"] = report.candidate;
  j["class"] = Json{{"name", report.cls.name()},
                    {"equireplicate", report.cls.equireplicate},
                    {"totally_binary", report.cls.totally_binary}};
  j["setting"] = report.setting_descriptor;
  j["competitors"] = Json{{"count", report.competitors},
                          {"mode", report.generation_mode},
                          {"seed", report.seed},
                          {"skipped_disconnected", report.skipped_disconnected},
                          {"skipped_duplicate", report.skipped_duplicate}};
  j["candidate_spectrum"] = spectrum_to_json(report.candidate_spectrum);
  if (report.exact_spectrum) j["exact_spectrum"] = spectrum_to_json(*report.exact_spectrum);
  j["verdicts"] = Json::array();
  for (const auto& verdict : report.verdicts) {
    Json v;
    v["index"] = verdict.index;
    v["connected"] = verdict.connected;
    v["weak_majorization"] = verdict.weak_majorization;
    v["psi_A_delta"] = verdict.psi_a_delta;
    v["psi_D_delta"] = verdict.psi_d_delta;
    v["psi_E_delta"] = verdict.psi_e_delta;
    auto put = [&v](const char* key, const std::optional<bool>& b) {
      if (b.has_value()) v[key] = *b;
    };
    put("chain_cd_le_c1", verdict.chain_cd_le_c1);
    put("chain_c1_le_c2", verdict.chain_c1_le_c2);
    put("gamma_majorized", verdict.gamma_majorized);
    put("trace_bound", verdict.trace_bound);
    put("top_eigenvalues_r", verdict.top_eigenvalues_r);
    put("prefix_bound", verdict.prefix_bound);
    v["pass"] = verdict.pass();
    j["verdicts"].push_back(std::move(v));
  }
  j["failures"] = report.failures;
  j["notes"] = report.notes;
  j["pass"] = report.pass();
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("io_error", "cannot open " + path + " for writing");
  out << content;
  if (!out) throw ParameterError("io_error", "failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("io_error", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mwd
