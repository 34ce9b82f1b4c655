#include "mwd/rational.hpp"

#include <ostream>
#include <sstream>

#include "mwd/errors.hpp"

namespace mwd {

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.rep(); }

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r.rep();
  return os.str();
}

Rational rational_from_string(const std::string& text) {
  BigInt num, den = 1;
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      num = BigInt(text);
    } else {
      num = BigInt(text.substr(0, slash));
      den = BigInt(text.substr(slash + 1));
    }
  } catch (const std::runtime_error&) {
    throw ParameterError("bad_parameters", "cannot parse rational '" + text + "'");
  }
  if (den == 0) throw_param("bad_parameters", "zero denominator in '" + text + "'");
  return Rational(num, den);
}

}  // namespace mwd
