#include "clinch/payment_constraints.hpp"

#include <algorithm>

namespace clinch {

namespace {

// Piece k is removed when another piece is pointwise no larger and differs.
bool dominates(const Piece& lower, const Piece& upper) {
  return lower.intercept <= upper.intercept && lower.slope <= upper.slope && !(lower == upper);
}

}  // namespace

AbilityToPay::AbilityToPay(std::vector<Piece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("ability-to-pay needs at least one piece");
  for (const auto& p : pieces) {
    if (p.intercept < 0 || p.slope < 0) throw std::invalid_argument("ability-to-pay pieces must be nonnegative");
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    return a.slope != b.slope ? a.slope < b.slope : a.intercept < b.intercept;
  });
  pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
  for (const auto& candidate : pieces) {
    const bool dominated =
        std::any_of(pieces.begin(), pieces.end(), [&](const Piece& other) { return dominates(other, candidate); });
    if (!dominated) pieces_.push_back(candidate);
  }
}

AbilityToPay AbilityToPay::hard_budget(Rational budget) { return AbilityToPay({{std::move(budget), Rational(0)}}); }

AbilityToPay AbilityToPay::average_budget(Rational beta) { return AbilityToPay({{Rational(0), std::move(beta)}}); }

AbilityToPay AbilityToPay::combined(Rational beta, Rational budget) {
  return AbilityToPay({{Rational(0), std::move(beta)}, {std::move(budget), Rational(0)}});
}

Rational alpha_eval(const AbilityToPay& alpha, const Rational& x) {
  if (x < 0) throw PreconditionViolation("alpha evaluated at negative quantity");
  if (x == 0) return Rational(0);
  const auto& pieces = alpha.pieces();
  Rational best = pieces.front().intercept + pieces.front().slope * x;
  for (std::size_t j = 1; j < pieces.size(); ++j) {
    Rational v = pieces[j].intercept + pieces[j].slope * x;
    if (v < best) best = std::move(v);
  }
  return best;
}

std::optional<Rational> beta(const AbilityToPay& alpha) {
  std::optional<Rational> out;
  for (const auto& p : alpha.pieces()) {
    if (p.intercept == 0 && (!out || p.slope < *out)) out = p.slope;
  }
  return out;
}

bool is_admissible(const AbilityToPay& alpha, const Rational& x, const Rational& payment) {
  if (x < 0 || payment < 0) return false;
  return payment <= alpha_eval(alpha, x);
}

Rational demand(const Agent& agent, const Rational& x, const Rational& payment, const Rational& price,
                const Rational& cap) {
  if (!is_admissible(agent.alpha, x, payment)) {
    throw PreconditionViolation("demand queried at inadmissible state (x=" + to_string(x) +
                                ", payment=" + to_string(payment) + ")");
  }
  if (price >= agent.value) return Rational(0);
  // payment + price*z <= a_j + b_j*(x + z)  <=>  z*(price - b_j) <= a_j + b_j*x - payment
  std::optional<Rational> bound;
  for (const auto& p : agent.alpha.pieces()) {
    if (p.slope >= price) continue;
    Rational z = (p.intercept + p.slope * x - payment) / (price - p.slope);
    if (!bound || z < *bound) bound = std::move(z);
  }
  if (!bound || *bound > cap) return cap;
  return *bound;
}

}  // namespace clinch
