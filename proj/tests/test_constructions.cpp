#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwd/constructions.hpp"
#include "mwd/design.hpp"
#include "mwd/gf.hpp"

using namespace mwd;

TEST_CASE("cyclotomic matrices for GF(5), h = 2") {
  FiniteField f(5, 1);
  Cyclotomy cy(f, 2);
  const CyclotomicMatrixSet set = cyclotomic_matrices(cy);
  // row at x = 0 of L_0 marks the squares {1, 4}
  CHECK(set.L[0](0, 1) == 1);
  CHECK(set.L[0](0, 4) == 1);
  CHECK(set.L[0](0, 0) == 0);
  CHECK(set.L[0](0, 2) == 0);
  CHECK(set.L[0](0, 3) == 0);
  CHECK(set.L[0] + set.L[1] + IntMatrix::Identity(5, 5) == IntMatrix::Ones(5, 5));
  // block structure of the big matrix
  CHECK(set.Lbig.block(0, 0, 5, 5) == set.L[0]);
  CHECK(set.Lbig.block(0, 5, 5, 5) == set.L[1]);
  CHECK(set.Lbig.block(5, 0, 5, 5) == set.L[1]);
}

TEST_CASE("for s = 3 mod 4 the square-difference matrix pairs with its transpose") {
  FiniteField f(7, 1);
  Cyclotomy cy(f, 2);
  const CyclotomicMatrixSet set = cyclotomic_matrices(cy);
  CHECK(set.L[0].transpose() == set.L[1]);  // -1 is a non-square
  for (int i = 0; i < 2; ++i) {
    CHECK((set.L[i].rowwise().sum().array() == 3).all());
    CHECK((set.L[i].colwise().sum().array() == 3).all());
  }
}

TEST_CASE("d1 at (5, 2)") {
  FiniteField f(5, 1);
  const Design d = build_d1_star(f, 2);
  CHECK(d.n() == 20);
  CHECK(d.v == 10);
  CHECK((replication_vector(d).array() == 2).all());
  CHECK(classify_setting(d.setting).kind == SettingClass::Kind::Type1);

  // N_0 = [L_0; L_1] stacked
  Cyclotomy cy(f, 2);
  const CyclotomicMatrixSet set = cyclotomic_matrices(cy);
  const IntMatrix n0 = incidence_matrix(d, FactorRef::V(), FactorRef::block(0));
  CHECK(n0.block(0, 0, 5, 5) == set.L[0]);
  CHECK(n0.block(5, 0, 5, 5) == set.L[1]);
}

TEST_CASE("d1 at (7, 3)") {
  FiniteField f(7, 1);
  const Design d = build_d1_star(f, 3);
  CHECK(d.n() == 42);
  CHECK(d.v == 21);
  CHECK((replication_vector(d).array() == 2).all());
}

TEST_CASE("d1 parameter validation") {
  FiniteField f5(5, 1), f7(7, 1);
  CHECK_THROWS_AS(build_d1_star(f5, 4), ParameterError);                       // t = 1
  CHECK_THROWS_WITH_AS(build_d1_star(f7, 6), doctest::Contains("disconnected"), ParameterError);
  CHECK_THROWS_AS(build_d1_star(f7, 4), ParameterError);                       // 4 does not divide 6
}

TEST_CASE("d1 accepts valid representative overrides and rejects bad ones") {
  FiniteField f(5, 1);
  // C_0 = {1, 4}, C_1 = {2, 3}
  const Design d = build_d1_star(f, 2, std::vector<std::int64_t>{4, 3});
  CHECK(d.n() == 20);
  CHECK_THROWS_AS(build_d1_star(f, 2, std::vector<std::int64_t>{2, 3}), ParameterError);
  CHECK_THROWS_AS(build_d1_star(f, 2, std::vector<std::int64_t>{1}), ParameterError);
}

TEST_CASE("d1 is totally binary and H-normalizable") {
  FiniteField f(5, 1);
  const Design d = build_d1_star(f, 2);
  CHECK(is_totally_binary(d));
  CHECK_NOTHROW(normalize_H(d));
}

TEST_CASE("d2 at (7, 2)") {
  FiniteField f(7, 1);
  const Design d = build_d2_star(f, 2);
  CHECK(d.n() == 56);
  CHECK(d.v == 14);
  CHECK(d.setting.m() == 3);
  CHECK((replication_vector(d).array() == 4).all());

  // N_alpha' is a balanced incomplete block incidence with parameters
  // (7, 14, 8, 4, 4): row sums 8, column sums 4, pairwise inner products 4.
  const IntMatrix n = incidence_matrix(d, FactorRef::V(), FactorRef::block(0));
  const IntMatrix nt = n.transpose();  // 7 x 14
  CHECK((nt.rowwise().sum().array() == 8).all());
  CHECK((nt.colwise().sum().array() == 4).all());
  const IntMatrix gram = nt * nt.transpose();  // (r - lambda) I + lambda J
  for (Eigen::Index i = 0; i < 7; ++i) {
    for (Eigen::Index j = 0; j < 7; ++j) {
      CHECK(gram(i, j) == (i == j ? 8 : 4));
    }
  }
}

TEST_CASE("d2 at (13, 4) classifies as type 2 with p = 3") {
  FiniteField f(13, 1);
  const Design d = build_d2_star(f, 4);
  CHECK(d.setting.m() == 3);
  const SettingClass sc = classify_setting(d.setting);
  CHECK(sc.kind == SettingClass::Kind::Type2);
  CHECK(sc.p == 3);
}

TEST_CASE("d2 needs at least three block factors") {
  FiniteField f(5, 1);
  CHECK_THROWS_WITH_AS(build_d2_star(f, 2), doctest::Contains("m >= 3"), ParameterError);
}

TEST_CASE("d3 at s = 7") {
  FiniteField f(7, 1);
  const Design d = build_d3_star(f);
  CHECK(d.n() == 56);
  CHECK(d.v == 14);
  CHECK(d.setting.m() == 2);
  CHECK((replication_vector(d).array() == 4).all());

  // N_inf' is a balanced incomplete block incidence with parameters
  // (8, 14, 7, 4, 3).
  const IntMatrix n = incidence_matrix(d, FactorRef::V(), FactorRef::block(1));
  const IntMatrix nt = n.transpose();  // 8 x 14
  CHECK((nt.rowwise().sum().array() == 7).all());
  CHECK((nt.colwise().sum().array() == 4).all());
  const IntMatrix gram = nt * nt.transpose();
  for (Eigen::Index i = 0; i < 8; ++i) {
    for (Eigen::Index j = 0; j < 8; ++j) {
      CHECK(gram(i, j) == (i == j ? 7 : 3));
    }
  }

  // adjusted orthogonality in raw incidence form: N_xi' N_inf = r J
  const IntMatrix nxi = incidence_matrix(d, FactorRef::V(), FactorRef::block(0));
  CHECK(nxi.transpose() * n == 4 * IntMatrix::Ones(7, 8));
}

TEST_CASE("d3 at s = 11") {
  FiniteField f(11, 1);
  const Design d = build_d3_star(f);
  CHECK(d.n() == 132);
  CHECK(d.v == 22);
  CHECK(d.setting.m() == 3);
  CHECK((replication_vector(d).array() == 6).all());
}

TEST_CASE("d3 parameter validation") {
  FiniteField f5(5, 1);
  CHECK_THROWS_AS(build_d3_star(f5), ParameterError);
  FiniteField f3(3, 1);
  CHECK_THROWS_AS(build_d3_star(f3), ParameterError);  // W would be empty
}

TEST_CASE("classification matches the claimed type across every valid parameter set up to 13") {
  const std::vector<std::pair<std::int64_t, int>> d1_params = {
      {5, 2}, {7, 2}, {7, 3}, {9, 2}, {9, 4}, {11, 2}, {11, 5},
      {13, 2}, {13, 3}, {13, 4}, {13, 6}};
  for (const auto& [s, h] : d1_params) {
    const auto [p, m] = factor_prime_power(s);
    const SettingClass sc = classify_setting(build_d1_star(FiniteField(p, m), h).setting);
    CHECK(sc.kind == SettingClass::Kind::Type1);
    CHECK(sc.s == s);
    CHECK(sc.m == h);
  }
  const std::vector<std::pair<std::int64_t, int>> d2_params = {
      {7, 2}, {9, 2}, {11, 2}, {13, 2}, {13, 3}, {13, 4}};
  for (const auto& [s, h] : d2_params) {
    const auto [p, m] = factor_prime_power(s);
    const SettingClass sc = classify_setting(build_d2_star(FiniteField(p, m), h).setting);
    CHECK(sc.kind == SettingClass::Kind::Type2);
    CHECK(sc.s == s);
    CHECK(sc.m == (s - 1) / h);
    CHECK(sc.p == h - 1);
  }
  for (std::int64_t s : {7, 11}) {
    const SettingClass sc = classify_setting(build_d3_star(FiniteField(s, 1)).setting);
    CHECK(sc.kind == SettingClass::Kind::Type3);
    CHECK(sc.s == s);
    CHECK(sc.m == (s + 1) / 4);
  }
}

TEST_CASE("all acceptance-list constructions build with their checks on") {
  CHECK_NOTHROW(build_d1_star(FiniteField(5, 1), 2));
  CHECK_NOTHROW(build_d1_star(FiniteField(7, 1), 2));
  CHECK_NOTHROW(build_d1_star(FiniteField(7, 1), 3));
  CHECK_NOTHROW(build_d1_star(FiniteField(3, 2), 2));
  CHECK_NOTHROW(build_d1_star(FiniteField(11, 1), 2));
  CHECK_NOTHROW(build_d1_star(FiniteField(13, 1), 2));
  CHECK_NOTHROW(build_d1_star(FiniteField(13, 1), 3));
  CHECK_NOTHROW(build_d1_star(FiniteField(13, 1), 4));
  CHECK_NOTHROW(build_d2_star(FiniteField(7, 1), 2));
  CHECK_NOTHROW(build_d2_star(FiniteField(13, 1), 2));
  CHECK_NOTHROW(build_d2_star(FiniteField(13, 1), 4));
  CHECK_NOTHROW(build_d3_star(FiniteField(7, 1)));
  CHECK_NOTHROW(build_d3_star(FiniteField(11, 1)));
}
