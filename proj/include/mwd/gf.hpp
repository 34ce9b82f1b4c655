#pragma once

#include <cstdint>
#include <vector>

#include "mwd/errors.hpp"

namespace mwd {

// GF(p^m), elements encoded as the integers 0..s-1 whose base-p digits are
// the coefficients of the residue polynomial. For a prime field the encoding
// of an element is therefore its value mod p. The modulus polynomial and the
// primitive element are the smallest ones in encoding order, so every field
// instance (and everything built on it) is reproducible bit for bit.
class FiniteField {
 public:
  static constexpr std::int64_t kOrderCap = std::int64_t(1) << 16;

  FiniteField(std::int64_t p, int m);

  std::int64_t p() const noexcept { return p_; }
  int m() const noexcept { return m_; }
  std::int64_t order() const noexcept { return s_; }
  std::int64_t primitive_element() const noexcept { return g_; }
  // Encoding of the monic modulus minus x^m, i.e. its low-degree coefficient
  // part; 0 for prime fields (no modulus needed).
  std::int64_t modulus_tail() const noexcept { return modulus_tail_; }

  std::int64_t add(std::int64_t a, std::int64_t b) const;
  std::int64_t sub(std::int64_t a, std::int64_t b) const { return add(a, neg(b)); }
  std::int64_t neg(std::int64_t a) const;
  std::int64_t mul(std::int64_t a, std::int64_t b) const;
  std::int64_t inv(std::int64_t a) const;
  std::int64_t div(std::int64_t a, std::int64_t b) const { return mul(a, inv(b)); }
  // a^e with e any integer (negative allowed for nonzero a).
  std::int64_t pow(std::int64_t a, std::int64_t e) const;

  // Discrete exp/log with respect to the fixed primitive element.
  std::int64_t exp(std::int64_t k) const;
  std::int64_t log(std::int64_t a) const;

  std::int64_t one() const noexcept { return 1 % s_; }

  // Absolute trace into the prime subfield; the result encoding is in 0..p-1.
  std::int64_t trace(std::int64_t a) const;

  void check_element(std::int64_t a) const;

 private:
  std::int64_t p_ = 0;
  int m_ = 0;
  std::int64_t s_ = 0;
  std::int64_t g_ = 0;
  std::int64_t modulus_tail_ = 0;
  std::vector<std::int64_t> exp_;  // exp_[k] = enc(g^k), k in 0..s-2
  std::vector<std::int64_t> log_;  // log_[enc] for enc != 0
};

// The h cyclotomic classes of GF(s): C_0 is the subgroup of t-th powers of
// the unit group (t = (s-1)/h) and C_i = g^i C_0, so C_i C_j = C_{i+j mod h}.
class Cyclotomy {
 public:
  Cyclotomy(const FiniteField& field, int h);

  const FiniteField& field() const noexcept { return *field_; }
  int h() const noexcept { return h_; }
  std::int64_t t() const noexcept { return t_; }
  // Elements of C_i in increasing encoding order.
  const std::vector<std::int64_t>& coset(int i) const { return cosets_.at(i); }
  int coset_of(std::int64_t x) const;

 private:
  const FiniteField* field_;
  int h_ = 0;
  std::int64_t t_ = 0;
  std::vector<std::vector<std::int64_t>> cosets_;
};

// For s = 3 (mod 4): W = {x in C_0 : 1 - x^2 in C_0} paired with
// f(x) = -1/x in C_1. The three defining properties are re-checked
// exhaustively at construction time.
struct ResiduePairing {
  std::vector<std::int64_t> w;        // increasing encoding order
  std::vector<std::int64_t> f_of_w;   // f_of_w[i] = f(w[i])

  std::int64_t f(std::int64_t xi) const;
};

FiniteField build_field(std::int64_t p, int m);
Cyclotomy build_cyclotomy(const FiniteField& field, int h);
ResiduePairing build_residue_pairing(const FiniteField& field);

bool is_prime(std::int64_t n);
std::vector<std::int64_t> prime_factors(std::int64_t n);
// Decomposes a prime power as (p, m); throws BadParameters otherwise.
std::pair<std::int64_t, int> factor_prime_power(std::int64_t s);

}  // namespace mwd
