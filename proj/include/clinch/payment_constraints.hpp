#pragma once

#include "clinch/core.hpp"

#include <optional>
#include <vector>

namespace clinch {

/// One affine piece a + b*x of an ability-to-pay envelope.
struct Piece {
  Rational intercept;
  Rational slope;
  friend bool operator==(const Piece&, const Piece&) = default;
};

/**
 * Concave nondecreasing ability-to-pay function
 *   alpha(x) = min_j (a_j + b_j x) for x > 0,   alpha(0) = 0,
 * stored as the lower envelope of its affine pieces. Dominated pieces are
 * dropped at construction and the remainder is sorted by slope, so equal
 * envelopes built from the same non-dominated pieces compare equal.
 *
 * A hard budget B is the single piece (B, 0); an average budget beta is the
 * single piece (0, beta).
 */
class AbilityToPay {
 public:
  explicit AbilityToPay(std::vector<Piece> pieces);

  static AbilityToPay hard_budget(Rational budget);
  static AbilityToPay average_budget(Rational beta);
  static AbilityToPay combined(Rational beta, Rational budget);

  const std::vector<Piece>& pieces() const { return pieces_; }

  friend bool operator==(const AbilityToPay&, const AbilityToPay&) = default;

 private:
  std::vector<Piece> pieces_;
};

struct Agent {
  Rational value;
  AbilityToPay alpha;
  friend bool operator==(const Agent&, const Agent&) = default;
};

Rational alpha_eval(const AbilityToPay& alpha, const Rational& x);

/// lim_{x -> 0} alpha(x)/x; std::nullopt stands for +infinity (no zero-intercept piece).
std::optional<Rational> beta(const AbilityToPay& alpha);

/// (x, payment) lies in the admissible set { payment <= alpha(x) }.
bool is_admissible(const AbilityToPay& alpha, const Rational& x, const Rational& payment);

/**
 * Largest extra quantity z with (x + z, payment + price*z) admissible,
 * truncated at `cap`; zero once price >= value.
 *
 * Pieces with slope >= price never bind, so an agent with no piece below the
 * price has unbounded demand and receives `cap` (the caller passes f([n])).
 * Throws PreconditionViolation if (x, payment) is itself inadmissible.
 */
Rational demand(const Agent& agent, const Rational& x, const Rational& payment, const Rational& price,
                const Rational& cap);

}  // namespace clinch
