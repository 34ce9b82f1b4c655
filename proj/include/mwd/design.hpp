#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "mwd/errors.hpp"

namespace mwd {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct Factor {
  std::string name;
  std::int64_t levels = 0;  // level labels are 0..levels-1
};

// The experimental setup: units crossed with block factors. eta2(u, j) is the
// level of block factor j on unit u. Units are opaque ordered ids 0..n-1; the
// builders document their canonical unit order.
struct Setting {
  std::vector<Factor> factors;
  IntMatrix eta2;  // n x m

  Eigen::Index n() const { return eta2.rows(); }
  int m() const { return static_cast<int>(factors.size()); }
  void validate() const;
};

// A design on a setting: eta1(u) is the treatment of unit u, labels 0..v-1.
struct Design {
  Setting setting;
  std::int64_t v = 0;
  IntVector eta1;  // n
  std::string construction = "custom";
  std::int64_t s = 0;  // base level count, recorded in the document header

  Eigen::Index n() const { return setting.n(); }
  void validate() const;
};

// Selects the treatment factor V, the general mean G, or a block factor.
struct FactorRef {
  enum class Kind { Treatment, General, Block };
  Kind kind = Kind::Treatment;
  int index = -1;

  static FactorRef V() { return {Kind::Treatment, -1}; }
  static FactorRef G() { return {Kind::General, -1}; }
  static FactorRef block(int i) { return {Kind::Block, i}; }

  friend bool operator==(const FactorRef& a, const FactorRef& b) {
    return a.kind == b.kind && (a.kind != Kind::Block || a.index == b.index);
  }
};

struct SettingClass {
  enum class Kind { Type1, Type2, Type3, Other };
  Kind kind = Kind::Other;
  std::int64_t s = 0;  // common block-factor level count
  int m = 0;
  std::int64_t p = 0;    // Type2: M_{BB'} = p I + J
  int e_factor = -1;     // Type3: index of the (s+1)-level factor
  std::string evidence;  // pattern found / first offending pair
};

struct HNormalization {
  std::vector<int> row_perm;  // H(row_perm[i], col_perm[j]) is in normal form
  std::vector<int> col_perm;
};

// A blocked main-effect plan; same table shape as a Design with the block
// label playing the treatment's role.
struct MainEffectPlan {
  std::vector<Factor> factors;
  IntMatrix levels;      // runs x factors
  IntVector block_of;    // runs
  std::int64_t blocks = 0;
  std::int64_t s = 0;
};

// 0/1 design matrix X_A (n x s_A); X_G is the all-ones column.
IntMatrix design_matrix(const Design& d, FactorRef a);

// Incidence matrix X_A' X_B between two distinct factors. With A = V and B a
// block factor this is the treatment-versus-block incidence N_B.
IntMatrix incidence_matrix(const Design& d, FactorRef a, FactorRef b);

IntVector replication_vector(const Design& d);
bool is_equireplicate(const Design& d);

SettingClass classify_setting(const Setting& st);

// H = sum of the treatment-versus-factor incidences; requires all block
// factors to share one level count.
IntMatrix total_incidence_H(const Design& d);
bool is_totally_binary(const Design& d);

// Permutations carrying H onto 1_h (x) (J_s - I_s), found by matching the
// unique zero entry of each row. Deterministic: the rows sharing a zero
// column are placed in increasing treatment-encoding order.
HNormalization normalize_H(const Design& d);

Design dual_of_mep(const MainEffectPlan& plan);

}  // namespace mwd
