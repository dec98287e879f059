#pragma once

#include "clinch/core.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace clinch {

enum class Sense { LessEqual, GreaterEqual, Equal };

template <typename Scalar>
struct LinearConstraint {
  VectorX<Scalar> row;
  Sense sense = Sense::LessEqual;
  Scalar rhs;
};

/**
 * maximize c'y  subject to  A y (<=|>=|=) b,  y >= 0.
 *
 * Rows are dense; the intended instances are small (tens of variables,
 * a few thousand rows at most).
 */
template <typename Scalar>
class LinearProgram {
 public:
  explicit LinearProgram(Eigen::Index num_vars)
      : objective_(VectorX<Scalar>::Constant(num_vars, Scalar(0))), names_(static_cast<std::size_t>(num_vars)) {
    for (Eigen::Index j = 0; j < num_vars; ++j) names_[static_cast<std::size_t>(j)] = "y" + std::to_string(j);
  }

  Eigen::Index num_vars() const { return objective_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  template <typename Derived>
  void set_objective(const Eigen::MatrixBase<Derived>& c) {
    if (c.size() != num_vars()) throw PreconditionViolation("objective length differs from variable count");
    objective_ = c;
  }

  template <typename Derived>
  void add_constraint(const Eigen::MatrixBase<Derived>& row, Sense sense, Scalar rhs) {
    if (row.size() != num_vars()) throw PreconditionViolation("constraint row length differs from variable count");
    constraints_.push_back({row, sense, std::move(rhs)});
  }

  void set_name(Eigen::Index j, std::string name) { names_.at(static_cast<std::size_t>(j)) = std::move(name); }

  const VectorX<Scalar>& objective() const { return objective_; }
  const std::vector<LinearConstraint<Scalar>>& constraints() const { return constraints_; }
  const std::string& name(Eigen::Index j) const { return names_.at(static_cast<std::size_t>(j)); }

 private:
  VectorX<Scalar> objective_;
  std::vector<LinearConstraint<Scalar>> constraints_;
  std::vector<std::string> names_;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

template <typename Scalar>
struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Scalar value{0};
  VectorX<Scalar> point;  // set when Optimal
};

inline constexpr Eigen::Index kMaxLpVariables = 64;
inline constexpr std::size_t kMaxLpConstraints = 4096;

namespace detail {

/// Dense tableau simplex with Bland's smallest-index rule. Column layout:
/// [structural | slack/surplus | artificial | rhs]; the last row is the
/// objective row holding reduced costs (maximization, entering on > 0).
template <typename Scalar>
class Tableau {
 public:
  Tableau(MatrixX<Scalar> body, std::vector<Eigen::Index> basis) : t_(std::move(body)), basis_(std::move(basis)) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index rhs_col() const { return t_.cols() - 1; }
  MatrixX<Scalar>& matrix() { return t_; }
  const MatrixX<Scalar>& matrix() const { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }

  /// Loads objective coefficients `cost` (length = rhs_col) and prices out the basis.
  void set_objective(const VectorX<Scalar>& cost) {
    const Eigen::Index obj = rows();
    t_.row(obj).setZero();
    t_.row(obj).head(cost.size()) = cost.transpose();
    for (Eigen::Index r = 0; r < rows(); ++r) {
      const Scalar coef = t_(obj, basis_[static_cast<std::size_t>(r)]);
      if (coef != 0) t_.row(obj) -= coef * t_.row(r);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    const Scalar piv = t_(r, c);
    t_.row(r) /= piv;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const Scalar factor = t_(i, c);
      if (factor != 0) t_.row(i) -= factor * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Runs Bland pivots over columns [0, allowed). Returns false if unbounded.
  bool optimize(Eigen::Index allowed) {
    const Eigen::Index obj = rows();
    for (;;) {
      Eigen::Index entering = -1;
      for (Eigen::Index c = 0; c < allowed; ++c) {
        if (t_(obj, c) > 0) {
          entering = c;
          break;
        }
      }
      if (entering < 0) return true;
      Eigen::Index leaving = -1;
      Scalar best_ratio(0);
      for (Eigen::Index r = 0; r < rows(); ++r) {
        if (t_(r, entering) <= 0) continue;
        Scalar ratio = t_(r, rhs_col()) / t_(r, entering);
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leaving)])) {
          leaving = r;
          best_ratio = std::move(ratio);
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  void drop_row(Eigen::Index r) {
    MatrixX<Scalar> next(t_.rows() - 1, t_.cols());
    next.topRows(r) = t_.topRows(r);
    next.bottomRows(t_.rows() - 1 - r) = t_.bottomRows(t_.rows() - 1 - r);
    t_ = std::move(next);
    basis_.erase(basis_.begin() + r);
  }

 private:
  MatrixX<Scalar> t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/**
 * Two-phase primal simplex. Exact when Scalar is exact (Rational); the
 * returned point is a basic feasible solution, i.e. a vertex.
 * Throws UnsupportedSize beyond 64 variables or 4096 constraints.
 */
template <typename Scalar>
LPSolution<Scalar> solve(const LinearProgram<Scalar>& lp) {
  const Eigen::Index n = lp.num_vars();
  const auto& cons = lp.constraints();
  if (n > kMaxLpVariables || cons.size() > kMaxLpConstraints) {
    throw UnsupportedSize("linear program exceeds solver size guard");
  }
  const auto m = static_cast<Eigen::Index>(cons.size());

  // Normalize to nonnegative right-hand sides.
  std::vector<LinearConstraint<Scalar>> rows(cons.begin(), cons.end());
  for (auto& c : rows) {
    if (c.rhs < 0) {
      c.row = -c.row;
      c.rhs = -c.rhs;
      if (c.sense == Sense::LessEqual) {
        c.sense = Sense::GreaterEqual;
      } else if (c.sense == Sense::GreaterEqual) {
        c.sense = Sense::LessEqual;
      }
    }
  }

  Eigen::Index num_slack = 0;
  Eigen::Index num_art = 0;
  for (const auto& c : rows) {
    if (c.sense != Sense::Equal) ++num_slack;
    if (c.sense != Sense::LessEqual) ++num_art;
  }
  const Eigen::Index art_begin = n + num_slack;
  const Eigen::Index cols = art_begin + num_art + 1;

  MatrixX<Scalar> body = MatrixX<Scalar>::Constant(m + 1, cols, Scalar(0));
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  Eigen::Index slack = n;
  Eigen::Index art = art_begin;
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& c = rows[static_cast<std::size_t>(r)];
    body.row(r).head(n) = c.row.transpose();
    body(r, cols - 1) = c.rhs;
    if (c.sense == Sense::LessEqual) {
      body(r, slack) = Scalar(1);
      basis[static_cast<std::size_t>(r)] = slack++;
    } else {
      if (c.sense == Sense::GreaterEqual) body(r, slack++) = Scalar(-1);
      body(r, art) = Scalar(1);
      basis[static_cast<std::size_t>(r)] = art++;
    }
  }
  detail::Tableau<Scalar> tab(std::move(body), std::move(basis));

  LPSolution<Scalar> out;
  if (num_art > 0) {
    // Phase one: maximize -(sum of artificials).
    VectorX<Scalar> phase1 = VectorX<Scalar>::Constant(cols - 1, Scalar(0));
    phase1.segment(art_begin, num_art).setConstant(Scalar(-1));
    tab.set_objective(phase1);
    tab.optimize(cols - 1);
    if (tab.matrix()(tab.rows(), tab.rhs_col()) != 0) {
      out.status = LPStatus::Infeasible;
      return out;
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    for (Eigen::Index r = 0; r < tab.rows();) {
      if (tab.basis()[static_cast<std::size_t>(r)] < art_begin) {
        ++r;
        continue;
      }
      Eigen::Index c = 0;
      while (c < art_begin && tab.matrix()(r, c) == 0) ++c;
      if (c < art_begin) {
        tab.pivot(r, c);
        ++r;
      } else {
        tab.drop_row(r);  // redundant equality
      }
    }
  }

  VectorX<Scalar> cost = VectorX<Scalar>::Constant(cols - 1, Scalar(0));
  cost.head(n) = lp.objective();
  tab.set_objective(cost);
  if (!tab.optimize(art_begin)) {
    out.status = LPStatus::Unbounded;
    return out;
  }

  out.status = LPStatus::Optimal;
  out.point = VectorX<Scalar>::Constant(n, Scalar(0));
  for (Eigen::Index r = 0; r < tab.rows(); ++r) {
    const Eigen::Index b = tab.basis()[static_cast<std::size_t>(r)];
    if (b < n) out.point(b) = tab.matrix()(r, tab.rhs_col());
  }
  out.value = lp.objective().dot(out.point);
  return out;
}

/// Every constraint and y >= 0 hold (exactly, for exact Scalar).
template <typename Scalar>
bool satisfies(const LinearProgram<Scalar>& lp, const VectorX<Scalar>& point) {
  if (point.size() != lp.num_vars()) return false;
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    if (point(j) < 0) return false;
  }
  for (const auto& c : lp.constraints()) {
    const Scalar lhs = c.row.dot(point);
    const bool ok = c.sense == Sense::LessEqual      ? lhs <= c.rhs
                    : c.sense == Sense::GreaterEqual ? lhs >= c.rhs
                                                     : lhs == c.rhs;
    if (!ok) return false;
  }
  return true;
}

}  // namespace clinch
