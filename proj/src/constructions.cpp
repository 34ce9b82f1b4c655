#include "mwd/constructions.hpp"

#include <algorithm>
#include <string>

namespace mwd {

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw_internal("construction_check_failed", what);
}

IntMatrix stacked_blocks(const std::vector<IntMatrix>& blocks) {
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  IntMatrix out(rows, blocks.front().cols());
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

}  // namespace

CyclotomicMatrixSet cyclotomic_matrices(const Cyclotomy& cy) {
  const FiniteField& f = cy.field();
  const std::int64_t s = f.order();
  const int h = cy.h();

  CyclotomicMatrixSet set;
  set.L.reserve(h);
  for (int i = 0; i < h; ++i) {
    IntMatrix li = IntMatrix::Zero(s, s);
    for (std::int64_t x = 0; x < s; ++x) {
      for (std::int64_t c : cy.coset(i)) li(x, f.add(x, c)) = 1;  // y = x + c
    }
    set.L.push_back(std::move(li));
  }

  const std::int64_t t = cy.t();
  IntMatrix sum = IntMatrix::Zero(s, s);
  for (int i = 0; i < h; ++i) {
    check(set.L[i].rowwise().sum().maxCoeff() == t && set.L[i].rowwise().sum().minCoeff() == t,
          "L_i row sums must equal t");
    check(set.L[i].colwise().sum().maxCoeff() == t && set.L[i].colwise().sum().minCoeff() == t,
          "L_i column sums must equal t");
    sum += set.L[i];
  }
  check(sum == IntMatrix::Ones(s, s) - IntMatrix::Identity(s, s), "sum of L_i must be J - I");

  set.Lbig.resize(h * s, h * s);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < h; ++j) {
      set.Lbig.block(i * s, j * s, s, s) = set.L[(i - j + h) % h];
    }
  }
  return set;
}

Design build_d1_star(const FiniteField& field, int h,
                     const std::optional<std::vector<std::int64_t>>& representatives) {
  const std::int64_t s = field.order();
  if (h < 2) throw_param("bad_parameters", "d1 needs h >= 2");
  if ((s - 1) % h != 0) {
    throw_param("bad_parameters", "d1 needs h | s-1; got s = " + std::to_string(s) + ", h = " + std::to_string(h));
  }
  const std::int64_t t = (s - 1) / h;
  if (t == 1) {
    throw_param("disconnected_design",
                "d1 with t = 1 is disconnected (its information matrix has rank below v-1)");
  }
  Cyclotomy cy(field, h);

  std::vector<std::int64_t> reps(h);
  if (representatives) {
    if (static_cast<int>(representatives->size()) != h) {
      throw_param("bad_parameters", "need exactly h representatives");
    }
    reps = *representatives;
    for (int i = 0; i < h; ++i) {
      field.check_element(reps[i]);
      if (reps[i] == 0 || cy.coset_of(reps[i]) != i) {
        throw_param("representative_not_in_coset",
                    "representative " + std::to_string(reps[i]) + " is not in C_" + std::to_string(i));
      }
    }
  } else {
    for (int i = 0; i < h; ++i) reps[i] = field.exp(i);
  }

  Design d;
  d.construction = "d1";
  d.s = s;
  d.v = h * s;
  for (int i = 0; i < h; ++i) d.setting.factors.push_back({"p" + std::to_string(i), s});

  const Eigen::Index n = (s - 1) * s;
  d.setting.eta2.resize(n, h);
  d.eta1.resize(n);
  Eigen::Index u = 0;
  for (std::int64_t a = 1; a < s; ++a) {    // a runs over F* in encoding order
    for (std::int64_t b = 0; b < s; ++b) {  // b runs over F
      for (int i = 0; i < h; ++i) d.setting.eta2(u, i) = field.add(field.mul(a, reps[i]), b);
      d.eta1(u) = static_cast<std::int64_t>(cy.coset_of(a)) * s + b;
      ++u;
    }
  }
  d.validate();

  // construction-time contract checks
  const CyclotomicMatrixSet lset = cyclotomic_matrices(cy);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < h; ++j) {
      if (i == j) continue;
      check(incidence_matrix(d, FactorRef::block(i), FactorRef::block(j)) ==
                IntMatrix::Ones(s, s) - IntMatrix::Identity(s, s),
            "d1 block-pair incidence must be J - I");
    }
    std::vector<IntMatrix> expect;
    for (int j = 0; j < h; ++j) expect.push_back(lset.L[(i + j) % h]);
    check(incidence_matrix(d, FactorRef::V(), FactorRef::block(i)) == stacked_blocks(expect),
          "d1 treatment incidence N_i must stack L_i..L_{i+h-1}");
  }
  const IntVector r = replication_vector(d);
  check((r.array() == t).all(), "d1 must be equireplicate with r = t");
  check(classify_setting(d.setting).kind == SettingClass::Kind::Type1, "d1 setting must classify as type 1");
  return d;
}

Design build_d2_star(const FiniteField& field, int h) {
  const std::int64_t s = field.order();
  if (h < 2) throw_param("bad_parameters", "d2 needs h >= 2");
  if ((s - 1) % h != 0) {
    throw_param("bad_parameters", "d2 needs h | s-1; got s = " + std::to_string(s) + ", h = " + std::to_string(h));
  }
  const std::int64_t t = (s - 1) / h;
  if (t < 3) {
    throw ParameterError("too_few_factors",
                         "d2 has m = t block factors and needs m >= 3; got t = " + std::to_string(t));
  }
  Cyclotomy cy(field, h);

  Design d;
  d.construction = "d2";
  d.s = s;
  d.v = h * s;
  const std::vector<std::int64_t>& alphas = cy.coset(0);
  for (std::int64_t a : alphas) d.setting.factors.push_back({"alpha" + std::to_string(a), s});

  // Units (a,b,j), a in C_j union {0}: for fixed (a,b) the admissible j are
  // all of I_h when a = 0 and just coset_of(a) otherwise.
  const Eigen::Index n = h * s * (t + 1);
  d.setting.eta2.resize(n, static_cast<int>(t));
  d.eta1.resize(n);
  Eigen::Index u = 0;
  for (std::int64_t a = 0; a < s; ++a) {
    for (std::int64_t b = 0; b < s; ++b) {
      std::vector<int> js;
      if (a == 0) {
        for (int j = 0; j < h; ++j) js.push_back(j);
      } else {
        js.push_back(cy.coset_of(a));
      }
      for (int j : js) {
        for (std::size_t k = 0; k < alphas.size(); ++k) {
          d.setting.eta2(u, static_cast<int>(k)) = field.add(field.mul(a, alphas[k]), b);
        }
        d.eta1(u) = static_cast<std::int64_t>(j) * s + b;
        ++u;
      }
    }
  }
  check(u == n, "d2 unit count must be hs(t+1)");
  d.validate();

  const CyclotomicMatrixSet lset = cyclotomic_matrices(cy);
  std::vector<IntMatrix> expect;
  for (int j = 0; j < h; ++j) expect.push_back(lset.L[j] + IntMatrix::Identity(s, s));
  const IntMatrix n_alpha = stacked_blocks(expect);
  for (int k = 0; k < d.setting.m(); ++k) {
    for (int l = 0; l < d.setting.m(); ++l) {
      if (k == l) continue;
      check(incidence_matrix(d, FactorRef::block(k), FactorRef::block(l)) ==
                (h - 1) * IntMatrix::Identity(s, s) + IntMatrix::Ones(s, s),
            "d2 block-pair incidence must be (h-1)I + J");
    }
    check(incidence_matrix(d, FactorRef::V(), FactorRef::block(k)) == n_alpha,
          "d2 treatment incidence N_alpha must stack L_j + I");
  }
  const IntVector r = replication_vector(d);
  check((r.array() == t + 1).all(), "d2 must be equireplicate with r = t+1");
  const SettingClass sc = classify_setting(d.setting);
  check(sc.kind == SettingClass::Kind::Type2 && sc.p == h - 1, "d2 setting must classify as type 2 with p = h-1");
  return d;
}

Design build_d3_star(const FiniteField& field) {
  const std::int64_t s = field.order();
  if (s % 4 != 3) {
    throw_param("bad_residue_class", "d3 needs s = 3 (mod 4); got s = " + std::to_string(s));
  }
  if (s < 7) throw_param("bad_parameters", "d3 needs s >= 7 so that W is nonempty");
  Cyclotomy cy(field, 2);
  const ResiduePairing rp = build_residue_pairing(field);
  const std::int64_t t = (s - 1) / 2;
  const std::int64_t w = static_cast<std::int64_t>(rp.w.size());

  Design d;
  d.construction = "d3";
  d.s = s;
  d.v = 2 * s;
  for (std::int64_t xi : rp.w) d.setting.factors.push_back({"xi" + std::to_string(xi), s});
  d.setting.factors.push_back({"inf", s + 1});  // level s encodes the extra point
  const int inf = static_cast<int>(w);

  const Eigen::Index n = s * (s + 1);  // 2 s (t+1)
  d.setting.eta2.resize(n, static_cast<int>(w) + 1);
  d.eta1.resize(n);
  Eigen::Index u = 0;
  std::vector<std::int64_t> a_values{0};
  a_values.insert(a_values.end(), cy.coset(0).begin(), cy.coset(0).end());
  std::sort(a_values.begin(), a_values.end());
  for (std::int64_t a : a_values) {
    for (std::int64_t b = 0; b < s; ++b) {
      for (int i = 0; i < 2; ++i) {
        for (std::int64_t k = 0; k < w; ++k) {
          const std::int64_t slope = i == 0 ? rp.w[k] : field.neg(rp.f_of_w[k]);
          d.setting.eta2(u, static_cast<int>(k)) = field.add(b, field.mul(a, slope));
        }
        if (i == 0) {
          d.setting.eta2(u, inf) = field.add(a, b);
        } else {
          d.setting.eta2(u, inf) = (a == 0) ? s : field.sub(b, a);
        }
        d.eta1(u) = static_cast<std::int64_t>(i) * s + b;
        ++u;
      }
    }
  }
  check(u == n, "d3 unit count must be s(s+1)");
  d.validate();

  const CyclotomicMatrixSet lset = cyclotomic_matrices(cy);
  const IntMatrix l0i = lset.L[0] + IntMatrix::Identity(s, s);
  const IntMatrix n_xi_expect = stacked_blocks({l0i, l0i});
  IntMatrix n_inf_expect = IntMatrix::Zero(2 * s, s + 1);
  n_inf_expect.block(0, 0, s, s) = l0i;
  n_inf_expect.block(s, 0, s, s) = lset.L[1];
  n_inf_expect.block(s, s, s, 1) = IntMatrix::Ones(s, 1);

  for (int k = 0; k < static_cast<int>(w); ++k) {
    check(incidence_matrix(d, FactorRef::block(k), FactorRef::block(inf)) == IntMatrix::Ones(s, s + 1),
          "d3 incidence of xi against inf must be all-ones");
    for (int l = 0; l < static_cast<int>(w); ++l) {
      if (k == l) continue;
      check(incidence_matrix(d, FactorRef::block(k), FactorRef::block(l)) ==
                IntMatrix::Identity(s, s) + IntMatrix::Ones(s, s),
            "d3 incidence between two xi factors must be I + J");
    }
    check(incidence_matrix(d, FactorRef::V(), FactorRef::block(k)) == n_xi_expect,
          "d3 treatment incidence N_xi must stack L_0 + I twice");
  }
  check(incidence_matrix(d, FactorRef::V(), FactorRef::block(inf)) == n_inf_expect,
        "d3 treatment incidence N_inf must match its block form");
  const IntVector r = replication_vector(d);
  check((r.array() == t + 1).all(), "d3 must be equireplicate with r = (s+1)/2");
  const SettingClass sc = classify_setting(d.setting);
  check(sc.kind == SettingClass::Kind::Type3 && sc.e_factor == inf, "d3 setting must classify as type 3");
  return d;
}

}  // namespace mwd
