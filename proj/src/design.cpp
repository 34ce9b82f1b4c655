#include "mwd/design.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace mwd {

namespace {

std::string pair_name(const Setting& st, int i, int j) {
  return st.factors[i].name + " vs " + st.factors[j].name;
}

}  // namespace

void Setting::validate() const {
  if (eta2.rows() == 0) throw_param("bad_parameters", "setting has no units");
  if (eta2.cols() != static_cast<Eigen::Index>(factors.size())) {
    throw_param("bad_parameters", "eta2 column count does not match factor count");
  }
  for (int j = 0; j < m(); ++j) {
    if (factors[j].levels < 2) {
      throw_param("bad_parameters", "block factor " + factors[j].name + " needs at least 2 levels");
    }
    std::vector<bool> seen(factors[j].levels, false);
    for (Eigen::Index u = 0; u < n(); ++u) {
      const std::int64_t lev = eta2(u, j);
      if (lev < 0 || lev >= factors[j].levels) {
        throw_param("bad_parameters", "level out of range for factor " + factors[j].name);
      }
      seen[lev] = true;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
      throw_param("bad_parameters", "factor " + factors[j].name + " has an unused level");
    }
  }
}

void Design::validate() const {
  setting.validate();
  if (eta1.size() != setting.n()) throw_param("bad_parameters", "eta1 length does not match unit count");
  if (v < 1) throw_param("bad_parameters", "design needs at least one treatment");
  std::vector<bool> seen(v, false);
  for (Eigen::Index u = 0; u < n(); ++u) {
    if (eta1(u) < 0 || eta1(u) >= v) throw_param("bad_parameters", "treatment label out of range");
    seen[eta1(u)] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw_param("bad_parameters", "some treatment never occurs");
  }
}

IntMatrix design_matrix(const Design& d, FactorRef a) {
  const Eigen::Index n = d.n();
  switch (a.kind) {
    case FactorRef::Kind::General:
      return IntMatrix::Ones(n, 1);
    case FactorRef::Kind::Treatment: {
      IntMatrix x = IntMatrix::Zero(n, d.v);
      for (Eigen::Index u = 0; u < n; ++u) x(u, d.eta1(u)) = 1;
      return x;
    }
    case FactorRef::Kind::Block: {
      if (a.index < 0 || a.index >= d.setting.m()) {
        throw_param("unknown_factor", "no block factor with index " + std::to_string(a.index));
      }
      IntMatrix x = IntMatrix::Zero(n, d.setting.factors[a.index].levels);
      for (Eigen::Index u = 0; u < n; ++u) x(u, d.setting.eta2(u, a.index)) = 1;
      return x;
    }
  }
  throw_internal("invariant_violated", "unreachable factor kind");
}

IntMatrix incidence_matrix(const Design& d, FactorRef a, FactorRef b) {
  if (a == b) throw_param("same_factor", "incidence matrix needs two distinct factors");
  auto levels_of = [&](FactorRef f) -> std::int64_t {
    switch (f.kind) {
      case FactorRef::Kind::General:
        return 1;
      case FactorRef::Kind::Treatment:
        return d.v;
      case FactorRef::Kind::Block:
        if (f.index < 0 || f.index >= d.setting.m()) {
          throw_param("unknown_factor", "no block factor with index " + std::to_string(f.index));
        }
        return d.setting.factors[f.index].levels;
    }
    throw_internal("invariant_violated", "unreachable factor kind");
  };
  auto level_at = [&](FactorRef f, Eigen::Index u) -> std::int64_t {
    switch (f.kind) {
      case FactorRef::Kind::General:
        return 0;
      case FactorRef::Kind::Treatment:
        return d.eta1(u);
      case FactorRef::Kind::Block:
        return d.setting.eta2(u, f.index);
    }
    throw_internal("invariant_violated", "unreachable factor kind");
  };

  IntMatrix inc = IntMatrix::Zero(levels_of(a), levels_of(b));
  for (Eigen::Index u = 0; u < d.n(); ++u) inc(level_at(a, u), level_at(b, u)) += 1;
  return inc;
}

IntVector replication_vector(const Design& d) {
  IntVector r = IntVector::Zero(d.v);
  for (Eigen::Index u = 0; u < d.n(); ++u) r(d.eta1(u)) += 1;
  return r;
}

bool is_equireplicate(const Design& d) {
  const IntVector r = replication_vector(d);
  return (r.array() == r(0)).all();
}

SettingClass classify_setting(const Setting& st) {
  st.validate();
  SettingClass out;
  out.m = st.m();
  if (st.m() < 2) {
    out.evidence = "fewer than two block factors";
    return out;
  }

  auto pairwise = [&](int i, int j) {
    IntMatrix inc = IntMatrix::Zero(st.factors[i].levels, st.factors[j].levels);
    for (Eigen::Index u = 0; u < st.n(); ++u) inc(st.eta2(u, i), st.eta2(u, j)) += 1;
    return inc;
  };

  std::vector<std::int64_t> levels;
  for (const auto& f : st.factors) levels.push_back(f.levels);

  const bool uniform = std::all_of(levels.begin(), levels.end(), [&](std::int64_t l) { return l == levels[0]; });
  if (uniform) {
    const std::int64_t s = levels[0];
    // Type 1: every pair J - I; Type 2: every pair pI + J with one p >= 1.
    bool type1 = true;
    bool type2 = true;
    std::int64_t p = -2;
    for (int i = 0; i < st.m() && (type1 || type2); ++i) {
      for (int j = 0; j < st.m(); ++j) {
        if (i == j) continue;
        IntMatrix inc = pairwise(i, j);
        const std::int64_t off = inc(0, 1);
        const std::int64_t diag = inc(0, 0);
        const bool uniform_pattern =
            (inc.diagonal().array() == diag).all() &&
            ((inc + IntMatrix::Identity(s, s) * (off - diag)).array() == off).all();
        if (!uniform_pattern || off != 1) {
          type1 = type2 = false;
          out.evidence = "pair " + pair_name(st, i, j) + " is not of the form aI + J";
          break;
        }
        if (diag != 0) type1 = false;
        if (diag < 2) type2 = false;  // needs p = diag - 1 >= 1
        if (type2) {
          if (p == -2) {
            p = diag - 1;
          } else if (p != diag - 1) {
            type2 = false;
            out.evidence = "pair " + pair_name(st, i, j) + " has a different diagonal weight";
          }
        }
      }
    }
    if (type1) {
      out.kind = SettingClass::Kind::Type1;
      out.s = s;
      out.evidence = "all pairwise incidences J - I";
      return out;
    }
    if (type2) {
      out.kind = SettingClass::Kind::Type2;
      out.s = s;
      out.p = p;
      out.evidence = "all pairwise incidences " + std::to_string(p) + "I + J";
      return out;
    }
    if (out.evidence.empty()) out.evidence = "pairwise incidences mix patterns";
    return out;
  }

  // Type 3: exactly one factor with s+1 levels, everything else at s.
  std::vector<std::int64_t> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  const std::int64_t s = sorted[0];
  const bool candidate = std::count(levels.begin(), levels.end(), s) == st.m() - 1 &&
                         std::count(levels.begin(), levels.end(), s + 1) == 1;
  if (!candidate) {
    out.evidence = "level counts fit neither a uniform setting nor s,(s+1)";
    return out;
  }
  const int e = static_cast<int>(std::find(levels.begin(), levels.end(), s + 1) - levels.begin());
  for (int i = 0; i < st.m(); ++i) {
    for (int j = 0; j < st.m(); ++j) {
      if (i == j) continue;
      IntMatrix inc = pairwise(i, j);
      if (i == e || j == e) {
        if (!(inc.array() == 1).all()) {
          out.evidence = "pair " + pair_name(st, i, j) + " is not all-ones";
          return out;
        }
      } else if (inc != IntMatrix::Identity(s, s) + IntMatrix::Ones(s, s)) {
        out.evidence = "pair " + pair_name(st, i, j) + " is not I + J";
        return out;
      }
    }
  }
  out.kind = SettingClass::Kind::Type3;
  out.s = s;
  out.e_factor = e;
  out.evidence = "one (s+1)-level factor, I + J among the rest";
  return out;
}

IntMatrix total_incidence_H(const Design& d) {
  if (d.setting.m() == 0) throw_param("bad_parameters", "setting has no block factors");
  const std::int64_t s = d.setting.factors[0].levels;
  for (const auto& f : d.setting.factors) {
    if (f.levels != s) {
      throw_param("mixed_level_counts", "H needs a common level count; " + f.name + " differs");
    }
  }
  IntMatrix h = IntMatrix::Zero(d.v, s);
  for (Eigen::Index u = 0; u < d.n(); ++u) {
    for (int j = 0; j < d.setting.m(); ++j) h(d.eta1(u), d.setting.eta2(u, j)) += 1;
  }
  return h;
}

bool is_totally_binary(const Design& d) {
  const IntMatrix h = total_incidence_H(d);
  return (h.array() <= 1).all();
}

HNormalization normalize_H(const Design& d) {
  const SettingClass sc = classify_setting(d.setting);
  if (sc.kind != SettingClass::Kind::Type1) {
    throw_param("precondition_violated", "H normalization applies to settings with J - I incidences");
  }
  if (!is_equireplicate(d)) throw_param("precondition_violated", "H normalization needs an equireplicate design");
  if (!is_totally_binary(d)) throw_param("precondition_violated", "H normalization needs a totally binary design");

  const IntMatrix h = total_incidence_H(d);
  const std::int64_t s = sc.s;
  const std::int64_t v = d.v;
  if (v % s != 0) throw ParameterError("not_reducible", "treatment count is not a multiple of s");
  const std::int64_t hh = v / s;

  // Every row must have exactly one zero; every column exactly hh of them.
  std::vector<std::vector<int>> rows_by_zero(s);
  for (std::int64_t row = 0; row < v; ++row) {
    int zero_col = -1;
    for (std::int64_t col = 0; col < s; ++col) {
      if (h(row, col) == 0) {
        if (zero_col != -1) throw VerificationError("not_reducible", "row " + std::to_string(row) + " has several zeros");
        zero_col = static_cast<int>(col);
      }
    }
    if (zero_col == -1) throw VerificationError("not_reducible", "row " + std::to_string(row) + " has no zero");
    rows_by_zero[zero_col].push_back(static_cast<int>(row));
  }
  for (std::int64_t col = 0; col < s; ++col) {
    if (static_cast<std::int64_t>(rows_by_zero[col].size()) != hh) {
      throw VerificationError("not_reducible", "column " + std::to_string(col) + " does not have exactly v/s zeros");
    }
  }

  HNormalization out;
  out.row_perm.assign(v, 0);
  out.col_perm.resize(s);
  std::iota(out.col_perm.begin(), out.col_perm.end(), 0);
  for (std::int64_t col = 0; col < s; ++col) {
    for (std::int64_t k = 0; k < hh; ++k) {
      out.row_perm[k * s + col] = rows_by_zero[col][k];  // ascending treatment encoding
    }
  }

  for (std::int64_t i = 0; i < v; ++i) {
    for (std::int64_t j = 0; j < s; ++j) {
      const std::int64_t want = (i % s == j) ? 0 : 1;
      if (h(out.row_perm[i], out.col_perm[j]) != want) {
        throw_internal("invariant_violated", "H normalization produced a non-normal form");
      }
    }
  }
  return out;
}

Design dual_of_mep(const MainEffectPlan& plan) {
  if (plan.levels.rows() == 0) throw_param("bad_parameters", "plan has no runs");
  if (plan.block_of.size() != plan.levels.rows()) {
    throw_param("bad_parameters", "block assignment length does not match run count");
  }
  const std::int64_t b = plan.blocks > 0 ? plan.blocks : plan.block_of.maxCoeff() + 1;
  std::vector<bool> seen(b, false);
  for (Eigen::Index r = 0; r < plan.block_of.size(); ++r) {
    if (plan.block_of(r) < 0 || plan.block_of(r) >= b) {
      throw_param("bad_parameters", "block label out of range");
    }
    seen[plan.block_of(r)] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool x) { return x; })) {
    throw_param("empty_block", "some block of the plan is empty");
  }

  Design d;
  d.setting.factors = plan.factors;
  d.setting.eta2 = plan.levels;
  d.v = b;
  d.eta1 = plan.block_of;
  d.construction = "mep-dual";
  d.s = plan.s > 0 ? plan.s : (plan.factors.empty() ? 0 : plan.factors[0].levels);
  d.validate();
  return d;
}

}  // namespace mwd
