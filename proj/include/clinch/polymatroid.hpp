#pragma once

#include "clinch/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace clinch {

/**
 * Monotone submodular set function f : 2^[n] -> Q_+ defining the polymatroid
 * P = { x >= 0 : x(S) <= f(S) for all S }.
 *
 * Three representations are supported: a multi-unit supply (f(S) = supply for
 * every nonempty S), sponsored-search click-through rates (f(S) = sum of the
 * |S| largest rates), and an explicit table keyed by subset bitmask.
 */
class SubmodularFunction {
 public:
  struct MultiUnit {
    Rational supply;
  };
  struct SponsoredSearch {
    std::vector<Rational> ctrs;  // nonincreasing, positive
  };
  struct ExplicitTable {
    std::vector<std::optional<Rational>> values;  // indexed by mask, size 2^n
  };
  using Form = std::variant<MultiUnit, SponsoredSearch, ExplicitTable>;

  static SubmodularFunction multi_unit(int n, Rational supply);
  static SubmodularFunction sponsored_search(std::vector<Rational> ctrs);
  /// Entries absent from `values` stay missing; eval on them throws MalformedFunction.
  static SubmodularFunction explicit_table(int n, const std::vector<std::pair<Subset, Rational>>& values);
  static SubmodularFunction explicit_table(int n, std::vector<std::optional<Rational>> values);

  int size() const { return n_; }
  Subset ground_set() const { return full_set(n_); }
  const Form& form() const { return form_; }
  bool is_multi_unit() const { return std::holds_alternative<MultiUnit>(form_); }

  Rational eval(Subset s) const;
  Rational operator()(Subset s) const { return eval(s); }
  /// f([n]).
  Rational total() const { return eval(ground_set()); }

  friend bool operator==(const SubmodularFunction& a, const SubmodularFunction& b);

 private:
  SubmodularFunction(int n, Form form);

  int n_;
  Form form_;
  std::vector<Rational> prefix_;  // sponsored search: prefix sums of ctrs
};

struct Violation {
  enum class Kind { NonzeroEmptySet, MissingEntry, NegativeValue, NotMonotone, NotSubmodular };
  Kind kind;
  Subset s = 0;
  Subset t = 0;
  std::string describe() const;
};

inline constexpr int kMaxValidateAgents = 16;
inline constexpr int kMaxCappedAgents = 20;

/**
 * Exhaustive check of f(empty) = 0, monotonicity and submodularity.
 *
 * Submodularity is checked in its local form
 * f(S+i) + f(S+j) >= f(S+i+j) + f(S), which is equivalent to the pairwise
 * lattice inequality; a violation reports the pair (S+i, S+j).
 * Closed forms are submodular by construction and return no violations.
 * Throws UnsupportedSize for explicit tables with n > 16.
 */
std::vector<Violation> validate(const SubmodularFunction& f);

namespace detail {

void check_capped_size(Subset s);

/// min_{T subset of S} f(T) + psi(S \ T), lowest mask wins ties.
std::pair<Rational, Subset> capped_argmin_enumerate(const SubmodularFunction& f, const Vector& psi, Subset s);

}  // namespace detail

/// f_psi(S) by exhaustive enumeration of T subset of S, with the minimizing T (lowest mask on ties).
template <typename Derived>
std::pair<Rational, Subset> capped_argmin(const SubmodularFunction& f, const Eigen::MatrixBase<Derived>& psi, Subset s) {
  const Vector cap = psi;
  return detail::capped_argmin_enumerate(f, cap, s);
}

/// f_psi(S) = min_{T subset of S} f(T) + psi(S \ T), always by enumeration.
template <typename Derived>
Rational capped_eval_enumerate(const SubmodularFunction& f, const Eigen::MatrixBase<Derived>& psi, Subset s) {
  return capped_argmin(f, psi, s).first;
}

/**
 * Capped function f_psi(S) = min_{T subset of S} f(T) + psi(S \ T); the
 * polymatroid function of P_{0,psi}. Multi-unit oracles use the closed form
 * min(supply, psi(S)); other forms enumerate (|S| <= 20).
 */
template <typename Derived>
Rational capped_eval(const SubmodularFunction& f, const Eigen::MatrixBase<Derived>& psi, Subset s) {
  detail::check_capped_size(s);
  if (s == 0) return Rational(0);
  if (const auto* mu = std::get_if<SubmodularFunction::MultiUnit>(&f.form())) {
    const Rational capped = subset_sum(psi, s);
    return capped < mu->supply ? capped : mu->supply;
  }
  return capped_eval_enumerate(f, psi, s);
}

/**
 * Greedy maximizer of 1'y over P_{0,psi}: coordinates are raised in `order`,
 * each by its largest feasible increment min(psi_i - y_i, min_{S contains i} f(S) - y(S)).
 */
Vector greedy_max(const SubmodularFunction& f, const Vector& psi, std::span<const int> order);
Vector greedy_max(const SubmodularFunction& f, const Vector& psi);

/// First S with x(S) > f(S) (or a negative coordinate, reported as its singleton), if any.
std::optional<Subset> find_violated_set(const SubmodularFunction& f, const Vector& x);
bool is_feasible(const SubmodularFunction& f, const Vector& x);

/// x(S) == f(S) exactly; throws PreconditionViolation if x is not in P.
bool is_tight(const SubmodularFunction& f, const Vector& x, Subset s);

/// Every tight subset of a feasible x, in increasing mask order.
std::vector<Subset> tight_sets(const SubmodularFunction& f, const Vector& x);

std::string describe(const SubmodularFunction& f);

}  // namespace clinch
