#include "clinch/core.hpp"

#include <cctype>
#include <sstream>

namespace clinch {

std::vector<int> members(Subset s) {
  std::vector<int> out;
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

Subset subset_of(const std::vector<int>& agents) {
  Subset s = 0;
  for (int i : agents) s |= singleton(i);
  return s;
}

std::string format_subset(Subset s) {
  std::string out = "{";
  bool first = true;
  for (int i : members(s)) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

namespace {

bool is_integer_literal(std::string_view text) {
  if (text.empty()) return false;
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) return false;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw ParseError("not an exact rational: \"" + std::string(text) + "\"");
  }
  std::string num_str(num[0] == '+' ? num.substr(1) : num);
  boost::multiprecision::mpz_int p(num_str);
  boost::multiprecision::mpz_int q{std::string(den)};
  if (q == 0) throw ParseError("zero denominator: \"" + std::string(text) + "\"");
  return Rational(p, q);
}

std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool is_multiple_of(const Rational& q, const Rational& step) {
  if (step <= 0) throw PreconditionViolation("grid step must be positive");
  return boost::multiprecision::denominator(Rational(q / step)) == 1;
}

Rational floor_rational(const Rational& q) {
  using boost::multiprecision::mpz_int;
  const mpz_int num = boost::multiprecision::numerator(q);
  const mpz_int den = boost::multiprecision::denominator(q);
  mpz_int quotient = num / den;  // truncates toward zero
  if (num < 0 && quotient * den != num) quotient -= 1;
  return Rational(quotient);
}

Rational ceil_rational(const Rational& q) { return -floor_rational(-q); }

Vector zeros(Eigen::Index n) { return Vector::Constant(n, Rational(0)); }

Vector from_list(std::initializer_list<Rational> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& q : values) v(i++) = q;
  return v;
}

std::vector<std::string> to_strings(const Vector& v) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_string(v(i)));
  return out;
}

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << to_string(v(i));
  }
  os << ")";
  return os.str();
}

}  // namespace clinch
