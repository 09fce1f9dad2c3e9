#include "commlb/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <limits>

#include "commlb/errors.hpp"

namespace commlb {

namespace {

bool is_integer_literal(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) {
    i = 1;
    if (s.size() == 1) return false;
  }
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

// RAII holder for an mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(value_, prec); }
  ~Mpfr() { mpfr_clear(value_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return value_; }

 private:
  mpfr_t value_;
};

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string quoted = "'" + std::string(text) + "'";
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num, true) || !is_integer_literal(den, false)) {
    throw ParseError("malformed rational " + quoted);
  }
  std::string num_str(num);
  if (num_str[0] == '+') num_str.erase(0, 1);
  mpz_class n(num_str, 10);
  mpz_class d{std::string(den), 10};
  if (d == 0) throw ParseError("malformed rational " + quoted + ": zero denominator");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

double to_double(const Rational& value) {
  Mpfr x(53);
  mpfr_set_q(x.get(), value.get_mpq_t(), MPFR_RNDN);
  return mpfr_get_d(x.get(), MPFR_RNDN);
}

double to_double_down(const Rational& value) {
  Mpfr x(53);
  mpfr_set_q(x.get(), value.get_mpq_t(), MPFR_RNDD);
  return mpfr_get_d(x.get(), MPFR_RNDD);
}

double log2_of(const Rational& value) {
  if (sgn(value) < 0) throw PreconditionError("log2 of negative rational " + to_string(value));
  if (sgn(value) == 0) return -std::numeric_limits<double>::infinity();
  if (value == 1) return 0.0;
  // Exact powers of two (common for probabilities) short-circuit.
  if (value.get_num() == 1 || value.get_den() == 1) {
    const mpz_class& part = value.get_num() == 1 ? value.get_den() : value.get_num();
    if (mpz_popcount(part.get_mpz_t()) == 1) {
      const double e = static_cast<double>(mpz_sizeinbase(part.get_mpz_t(), 2) - 1);
      return value.get_num() == 1 ? -e : e;
    }
  }
  const mpfr_prec_t prec =
      128 + static_cast<mpfr_prec_t>(mpz_sizeinbase(value.get_num_mpz_t(), 2) +
                                     mpz_sizeinbase(value.get_den_mpz_t(), 2));
  Mpfr x(prec);
  mpfr_set_q(x.get(), value.get_mpq_t(), MPFR_RNDN);
  Mpfr out(53);
  mpfr_log2(out.get(), x.get(), MPFR_RNDN);
  return mpfr_get_d(out.get(), MPFR_RNDN);
}

}  // namespace commlb
