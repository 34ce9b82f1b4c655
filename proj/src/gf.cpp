#include "mwd/gf.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mwd {

namespace {

// Dense polynomial over F_p, coefficient of x^i at index i. Only used while
// setting a field up; all later arithmetic goes through the exp/log tables.
using Poly = std::vector<std::int64_t>;

Poly poly_from_encoding(std::int64_t enc, std::int64_t p) {
  Poly c;
  while (enc > 0) {
    c.push_back(enc % p);
    enc /= p;
  }
  return c;
}

std::int64_t poly_to_encoding(const Poly& a, std::int64_t p) {
  std::int64_t enc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) enc = enc * p + *it;
  return enc;
}

void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& mod, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  // reduce by the monic modulus
  const std::size_t deg = mod.size() - 1;
  for (std::size_t i = prod.size(); i-- > deg;) {
    const std::int64_t c = prod[i];
    if (c == 0) continue;
    prod[i] = 0;
    for (std::size_t j = 0; j < deg; ++j) {
      prod[i - deg + j] = ((prod[i - deg + j] - c * mod[j]) % p + p) % p;
    }
  }
  prod.resize(deg);
  poly_trim(prod);
  return prod;
}

Poly poly_pow_mod(Poly base, std::int64_t e, const Poly& mod, std::int64_t p) {
  Poly result{1};
  while (e > 0) {
    if (e & 1) result = poly_mul_mod(result, base, mod, p);
    base = poly_mul_mod(base, base, mod, p);
    e >>= 1;
  }
  return result;
}

Poly poly_mod(Poly a, const Poly& b, std::int64_t p) {
  poly_trim(a);
  const std::size_t deg = b.size() - 1;
  std::int64_t lead_inv = 1;
  // b is monic everywhere we call this, but handle a general leading coeff.
  for (std::int64_t k = 1; k < p; ++k) {
    if (b.back() * k % p == 1) {
      lead_inv = k;
      break;
    }
  }
  while (a.size() > deg) {
    const std::int64_t c = a.back() * lead_inv % p;
    if (c != 0) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const std::size_t idx = a.size() - b.size() + j;
        a[idx] = ((a[idx] - c * b[j]) % p + p) % p;
      }
    }
    a.pop_back();
    poly_trim(a);
    if (a.empty()) break;
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin test: monic f of degree m is irreducible over F_p iff x^{p^m} = x
// mod f and gcd(x^{p^{m/q}} - x, f) = 1 for every prime q | m.
bool poly_irreducible(const Poly& f, std::int64_t p, int m) {
  const Poly x{0, 1};
  Poly xp = x;  // x^{p^k} mod f, advanced one Frobenius step at a time
  std::vector<int> checkpoints;
  for (std::int64_t q : prime_factors(m)) checkpoints.push_back(m / static_cast<int>(q));
  std::sort(checkpoints.begin(), checkpoints.end());
  std::size_t next = 0;
  for (int k = 1; k <= m; ++k) {
    xp = poly_pow_mod(xp, p, f, p);
    if (next < checkpoints.size() && k == checkpoints[next]) {
      ++next;
      Poly diff = xp;
      diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
      diff[1] = ((diff[1] - 1) % p + p) % p;
      poly_trim(diff);
      Poly g = poly_gcd(f, diff, p);
      if (g.size() != 1) return false;
    }
  }
  Poly diff = xp;
  diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
  diff[1] = ((diff[1] - 1) % p + p) % p;
  poly_trim(diff);
  return diff.empty();
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::pair<std::int64_t, int> factor_prime_power(std::int64_t s) {
  if (s < 2) throw_param("bad_parameters", "order must be at least 2, got " + std::to_string(s));
  auto ps = prime_factors(s);
  if (ps.size() != 1) throw_param("bad_parameters", std::to_string(s) + " is not a prime power");
  const std::int64_t p = ps.front();
  int m = 0;
  std::int64_t q = s;
  while (q > 1) {
    q /= p;
    ++m;
  }
  std::int64_t check = 1;
  for (int i = 0; i < m; ++i) check *= p;
  if (check != s) throw_param("bad_parameters", std::to_string(s) + " is not a prime power");
  return {p, m};
}

FiniteField::FiniteField(std::int64_t p, int m) : p_(p), m_(m) {
  if (!is_prime(p)) throw_param("not_prime", std::to_string(p) + " is not prime");
  if (m < 1) throw_param("bad_parameters", "exponent must be positive, got " + std::to_string(m));
  s_ = 1;
  for (int i = 0; i < m; ++i) {
    s_ *= p;
    if (s_ > kOrderCap) {
      throw_param("cap_exceeded", "field order " + std::to_string(p) + "^" + std::to_string(m) +
                                      " exceeds the cap " + std::to_string(kOrderCap));
    }
  }

  Poly modulus;
  if (m_ > 1) {
    // Smallest monic irreducible x^m + tail in tail-encoding order.
    std::int64_t cap = 1;
    for (int i = 0; i < m_; ++i) cap *= p_;
    for (std::int64_t tail = 0; tail < cap; ++tail) {
      Poly f = poly_from_encoding(tail, p_);
      f.resize(m_ + 1, 0);
      f[m_] = 1;
      if (poly_irreducible(f, p_, m_)) {
        modulus = f;
        modulus_tail_ = tail;
        break;
      }
    }
    if (modulus.empty()) throw_internal("invariant_violated", "no irreducible modulus found");
  } else {
    modulus = {0, 1};  // placeholder; arithmetic is plain mod p
  }

  auto mul_enc = [&](std::int64_t a, std::int64_t b) -> std::int64_t {
    if (m_ == 1) return a * b % p_;
    return poly_to_encoding(poly_mul_mod(poly_from_encoding(a, p_), poly_from_encoding(b, p_), modulus, p_), p_);
  };

  // Smallest primitive element in encoding order.
  const auto factors = prime_factors(s_ - 1);
  auto order_is_full = [&](std::int64_t a) {
    for (std::int64_t q : factors) {
      std::int64_t e = (s_ - 1) / q;
      std::int64_t acc = 1, base = a;
      while (e > 0) {
        if (e & 1) acc = mul_enc(acc, base);
        base = mul_enc(base, base);
        e >>= 1;
      }
      if (acc == 1) return false;
    }
    return true;
  };
  g_ = 0;
  for (std::int64_t a = 2; a < s_; ++a) {
    if (order_is_full(a)) {
      g_ = a;
      break;
    }
  }
  if (g_ == 0 && s_ == 2) g_ = 1;
  if (g_ == 0) throw_internal("invariant_violated", "no primitive element found");

  exp_.assign(s_ - 1, 0);
  log_.assign(s_, -1);
  std::int64_t cur = 1;
  for (std::int64_t k = 0; k < s_ - 1; ++k) {
    exp_[k] = cur;
    log_[cur] = k;
    cur = mul_enc(cur, g_);
  }
  if (cur != 1) throw_internal("invariant_violated", "primitive element does not have order s-1");
}

void FiniteField::check_element(std::int64_t a) const {
  if (a < 0 || a >= s_) {
    throw_param("bad_parameters", "element encoding " + std::to_string(a) + " outside field of order " + std::to_string(s_));
  }
}

std::int64_t FiniteField::add(std::int64_t a, std::int64_t b) const {
  check_element(a);
  check_element(b);
  if (m_ == 1) return (a + b) % p_;
  std::int64_t out = 0, mult = 1;
  while (a > 0 || b > 0) {
    out += (a % p_ + b % p_) % p_ * mult;
    a /= p_;
    b /= p_;
    mult *= p_;
  }
  return out;
}

std::int64_t FiniteField::neg(std::int64_t a) const {
  check_element(a);
  if (m_ == 1) return (p_ - a) % p_;
  std::int64_t out = 0, mult = 1;
  while (a > 0) {
    out += (p_ - a % p_) % p_ * mult;
    a /= p_;
    mult *= p_;
  }
  return out;
}

std::int64_t FiniteField::mul(std::int64_t a, std::int64_t b) const {
  check_element(a);
  check_element(b);
  if (a == 0 || b == 0) return 0;
  return exp_[(log_[a] + log_[b]) % (s_ - 1)];
}

std::int64_t FiniteField::inv(std::int64_t a) const {
  check_element(a);
  if (a == 0) throw_param("bad_parameters", "zero has no multiplicative inverse");
  return exp_[(s_ - 1 - log_[a]) % (s_ - 1)];
}

std::int64_t FiniteField::pow(std::int64_t a, std::int64_t e) const {
  check_element(a);
  if (a == 0) {
    if (e <= 0) throw_param("bad_parameters", "0^e undefined for e <= 0");
    return 0;
  }
  const std::int64_t n = s_ - 1;
  std::int64_t k = (log_[a] % n) * (e % n) % n;
  k = ((k % n) + n) % n;
  return exp_[k];
}

std::int64_t FiniteField::exp(std::int64_t k) const {
  const std::int64_t n = s_ - 1;
  return exp_[((k % n) + n) % n];
}

std::int64_t FiniteField::log(std::int64_t a) const {
  check_element(a);
  if (a == 0) throw_param("bad_parameters", "log(0) undefined");
  return log_[a];
}

std::int64_t FiniteField::trace(std::int64_t a) const {
  check_element(a);
  // Frobenius orbit sum; x^{p^m} = x makes the 1..m and 0..m-1 index ranges
  // give the same value.
  std::int64_t acc = 0, cur = a;
  for (int i = 0; i < m_; ++i) {
    acc = add(acc, cur);
    cur = pow(cur, p_);
  }
  if (acc >= p_) throw_internal("invariant_violated", "trace left the prime subfield");
  return acc;
}

FiniteField build_field(std::int64_t p, int m) { return FiniteField(p, m); }

Cyclotomy::Cyclotomy(const FiniteField& field, int h) : field_(&field), h_(h) {
  const std::int64_t s = field.order();
  if (h < 2) throw_param("bad_parameters", "need h >= 2, got " + std::to_string(h));
  if ((s - 1) % h != 0) {
    throw_param("does_not_divide", std::to_string(h) + " does not divide " + std::to_string(s - 1));
  }
  t_ = (s - 1) / h;
  cosets_.assign(h, {});
  for (std::int64_t k = 0; k < s - 1; ++k) cosets_[k % h].push_back(field.exp(k));
  for (auto& c : cosets_) std::sort(c.begin(), c.end());
}

int Cyclotomy::coset_of(std::int64_t x) const {
  return static_cast<int>(field_->log(x) % h_);
}

Cyclotomy build_cyclotomy(const FiniteField& field, int h) { return Cyclotomy(field, h); }

std::int64_t ResiduePairing::f(std::int64_t xi) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == xi) return f_of_w[i];
  }
  throw_param("bad_parameters", "element " + std::to_string(xi) + " not in W");
}

ResiduePairing build_residue_pairing(const FiniteField& field) {
  const std::int64_t s = field.order();
  if (s % 4 != 3) {
    throw_param("bad_residue_class", "need s = 3 (mod 4), got s = " + std::to_string(s));
  }
  Cyclotomy cy(field, 2);

  ResiduePairing rp;
  const std::int64_t one = 1;
  for (std::int64_t x : cy.coset(0)) {
    const std::int64_t y = field.sub(one, field.mul(x, x));  // 1 - x^2
    if (y != 0 && cy.coset_of(y) == 0) {
      rp.w.push_back(x);
      rp.f_of_w.push_back(field.neg(field.inv(x)));
    }
  }

  if (static_cast<std::int64_t>(rp.w.size()) != (s - 3) / 4) {
    throw_internal("invariant_violated", "|W| != (s-3)/4 for s = " + std::to_string(s));
  }
  for (std::size_t i = 0; i < rp.w.size(); ++i) {
    if (cy.coset_of(rp.f_of_w[i]) != 1) {
      throw_internal("invariant_violated", "f(xi) escaped C_1");
    }
    // (xi - 1)(f(xi) - 1) must be a nonzero square
    const std::int64_t a = field.sub(rp.w[i], one);
    const std::int64_t b = field.sub(rp.f_of_w[i], one);
    const std::int64_t prod = field.mul(a, b);
    if (prod == 0 || cy.coset_of(prod) != 0) {
      throw_internal("invariant_violated", "pairing property against 1 failed");
    }
    for (std::size_t j = i + 1; j < rp.w.size(); ++j) {
      const std::int64_t d1 = field.sub(rp.w[i], rp.w[j]);
      const std::int64_t d2 = field.sub(rp.f_of_w[i], rp.f_of_w[j]);
      const std::int64_t q = field.mul(d1, d2);
      if (q == 0 || cy.coset_of(q) != 0) {
        throw_internal("invariant_violated", "pairwise pairing property failed");
      }
    }
  }
  return rp;
}

}  // namespace mwd
