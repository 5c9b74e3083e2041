#include "varkit/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "varkit/errors.hpp"
#include "varkit/ext_real.hpp"

namespace varkit {
namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

cpp_int pow10(long e) {
  cpp_int r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(Errc::SpecParseError, "not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad(text);

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    std::string_view den_s = s.substr(slash + 1);
    if (!all_digits(den_s)) bad(text);
    const auto nz = den_s.find_first_not_of('0');
    if (nz == std::string_view::npos) bad(text);
    const cpp_int den{std::string(den_s.substr(nz))};
    if (den == 0) bad(text);
    return num / Rational(den);
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_s = s.substr(e + 1);
    long ev = 0;
    auto [ptr, ec] = std::from_chars(exp_s.data(), exp_s.data() + exp_s.size(), ev);
    if (ec != std::errc() || ptr != exp_s.data() + exp_s.size() || exp_s.empty()) bad(text);
    if (ev > 4000 || ev < -4000) bad(text);
    exponent = ev;
    s = s.substr(0, e);
  }
  std::string digits;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      bad(text);
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) bad(text);
    digits = std::string(s);
  }
  // A leading zero would make the text octal.
  const auto nz = digits.find_first_not_of('0');
  digits = nz == std::string::npos ? "0" : digits.substr(nz);
  Rational value{cpp_int(digits)};
  if (exponent > 0) value *= Rational(pow10(exponent));
  if (exponent < 0) value /= Rational(pow10(-exponent));
  return negative ? Rational(-value) : value;
}

Rational rational_from_double_exact(double x) {
  if (!std::isfinite(x)) throw Error(Errc::InvalidArgument, "rational from non-finite double");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer for every double.
  const auto m = static_cast<long long>(std::ldexp(mant, 53));
  Rational r{cpp_int(m)};
  exp -= 53;
  cpp_int two_pow = 1;
  two_pow <<= std::abs(exp);
  if (exp >= 0) return r * Rational(two_pow);
  return r / Rational(two_pow);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(Errc::InvalidArgument, "rational from non-finite double");
  return parse_rational(format_double(x));
}

std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace varkit
