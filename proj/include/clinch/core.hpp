#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clinch {

/// Exact rational scalar used for every quantity in the library.
using Rational = boost::multiprecision::mpq_rational;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense per-agent vector (allocations, payments, prices, demands, caps).
using Vector = VectorX<Rational>;
using Matrix = MatrixX<Rational>;

/// Subset of agents {0..n-1} as a little-endian bitmask: bit i set <=> agent i in S.
using Subset = std::uint32_t;

inline constexpr int kMaxAgents = 30;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Set function that cannot be evaluated (e.g. missing table entry).
class MalformedFunction : public Error {
 public:
  using Error::Error;
};

/// Request outside what the implementation handles (e.g. off-grid input).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Input exceeds an exhaustive-enumeration guard.
class UnsupportedSize : public Unsupported {
 public:
  using Unsupported::Unsupported;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// A structural invariant of the auction failed at runtime.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Subsets

constexpr Subset full_set(int n) {
  return n >= 32 ? ~Subset{0} : (Subset{1} << n) - 1;
}
constexpr Subset singleton(int i) { return Subset{1} << i; }
constexpr bool contains(Subset s, int i) { return ((s >> i) & 1u) != 0; }
constexpr int cardinality(Subset s) { return std::popcount(s); }
constexpr bool is_subset(Subset s, Subset t) { return (s & ~t) == 0; }

std::vector<int> members(Subset s);
Subset subset_of(const std::vector<int>& agents);
/// "{0,2}" style rendering.
std::string format_subset(Subset s);

/// x(S) = sum of x_i over i in S.
template <typename Derived>
typename Derived::Scalar subset_sum(const Eigen::MatrixBase<Derived>& x, Subset s) {
  typename Derived::Scalar total(0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (contains(s, static_cast<int>(i))) total += x(i);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Rationals

/// Parses "p/q", "p", or "-p/q" exactly. Decimal points are rejected.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// True iff q is an integer multiple of step (step > 0).
bool is_multiple_of(const Rational& q, const Rational& step);

/// Largest integer k with k <= q.
Rational floor_rational(const Rational& q);
Rational ceil_rational(const Rational& q);

Vector zeros(Eigen::Index n);
Vector from_list(std::initializer_list<Rational> values);
std::vector<std::string> to_strings(const Vector& v);
/// "(1, 2/3)" style rendering.
std::string format_vector(const Vector& v);

}  // namespace clinch
