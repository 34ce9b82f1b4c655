#include "mwd/claims.hpp"

namespace mwd {

Spectrum d1_spectrum(std::int64_t s, int h) {
  const std::int64_t t = (s - 1) / h;
  const Rational r(t);
  return Spectrum::exact_lines({
      {Rational(0), 1},
      {r - Rational(1), (h - 1) * (s - 1)},
      {r - Rational(1, s - h), s - 1},
      {r, h - 1},
  });
}

Spectrum d2_spectrum(std::int64_t s, int h) {
  const std::int64_t t = (s - 1) / h;
  const std::int64_t u = s + (h - 1) * t;
  const std::int64_t v = h * s;
  return Spectrum::exact_lines({
      {Rational(0), 1},
      {Rational(s * (t + 1), u), s - 1},
      {Rational(t + 1), v - s},
  });
}

std::vector<std::pair<Rational, Eigen::Index>> d2_stated_spectrum_lines(std::int64_t s, int h) {
  const std::int64_t t = (s - 1) / h;
  const std::int64_t u = s + (h - 1) * t;
  const Rational r(t + 1);
  return {
      {Rational(0), 1},
      {r - Rational(t, u) * Rational(t + 1), s - 1},
      {r, (h - 1) * (s - 1)},
  };
}

Spectrum d3_spectrum(std::int64_t s) {
  const std::int64_t r = (s + 1) / 2;
  const std::int64_t w = (s - 3) / 4;
  const std::int64_t u = s + w;
  return Spectrum::exact_lines({
      {Rational(0), 1},
      {Rational(r * (s - 1), s), s},
      {Rational(r * s, u), s - 1},
  });
}

}  // namespace mwd
