#pragma once

#include "clinch/clinching_auction.hpp"
#include "clinch/core.hpp"
#include "clinch/payment_constraints.hpp"
#include "clinch/polymatroid.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace clinch {

enum class Status { Pass, Fail, Warn };
std::string to_string(Status status);

struct CheckResult {
  std::string name;
  Status status = Status::Pass;
  std::string detail;
};

/// Alternative outcome that weakly improves every agent and the revenue and strictly improves welfare.
struct ParetoImprovement {
  Vector allocation;
  Vector payment;
  Rational welfare_gain;
};

struct ParetoResult {
  bool efficient = false;
  Rational welfare;     // sum v_i x_i of the tested outcome
  Rational lp_optimum;  // max welfare over weak improvements
  std::optional<ParetoImprovement> improvement;
};

inline constexpr int kMaxParetoAgents = 10;

/**
 * Decides Pareto-efficiency of an admissible, individually rational outcome
 * by maximizing sum v_i x'_i over x' in P, pi' >= 0, pi'_i <= a_j + b_j x'_i
 * for every piece, v_i x'_i - pi'_i >= v_i x_i - pi_i, and
 * sum pi' >= sum pi. Efficient iff the optimum equals the outcome's welfare;
 * otherwise the optimal vertex is returned as a checked improvement.
 *
 * Individual rationality makes the LP exact: it forces pi'_i = 0 whenever
 * x'_i = 0, so the relaxed alpha(0) never matters.
 */
ParetoResult pareto_check(const SubmodularFunction& f, std::span<const Agent> agents, const Outcome& outcome);

/// VCG (Clarke pivot) on min(v_i, beta_i) with greedy polymatroid allocation, ties by index.
Outcome vcg_baseline(const SubmodularFunction& f, std::span<const Agent> agents);

/// Checks that x is feasible, every (x_i, pi_i) admissible, pi_i <= v_i x_i, and, if requested, x([n]) = f([n]).
std::vector<CheckResult> basic_checks(const SubmodularFunction& f, std::span<const Agent> agents,
                                      const Outcome& outcome, bool require_all_sold);

struct IcWitness {
  int agent = 0;
  Rational misreport;
  Rational gain;              // utility gain over truthful reporting (Fail if > 0)
  bool monotonicity = false;  // true if the witness is an allocation decrease instead
};

struct IcResult {
  bool pass = true;
  std::optional<IcWitness> witness;
  std::size_t reruns = 0;
};

/// Multiples of epsilon in [0, max_i v_i + epsilon].
std::vector<Rational> misreport_grid(const Scenario& scenario);

/**
 * Reruns the auction with agent i reporting each grid value; utility is
 * always measured with the true value. Passes iff no report beats the truth
 * and x_i is nondecreasing along the grid.
 */
IcResult ic_grid_check(const Scenario& scenario, int agent, std::span<const Rational> grid);
IcResult ic_grid_check(const Scenario& scenario, int agent);

inline constexpr int kMaxBruteForceAgents = 5;

/**
 * Clinched amounts straight from the definition: delta_i is the largest
 * multiple of grid_step such that every greedy vertex of the others' remnant
 * polytope P^i_{x,d}(0) stays feasible after giving agent i that amount.
 * Throws Unsupported if x, d or f are off the grid, UnsupportedSize for n > 5.
 */
Vector brute_force_clinch(const SubmodularFunction& f, const Vector& x, const Vector& d, const Rational& grid_step);

/// Finest grid 1/L with L the lcm of all denominators in x, d and f.
Rational common_grid(const SubmodularFunction& f, const Vector& x, const Vector& d);

/// One block of the nested tight-set family read off a trace.
struct TightBlock {
  Subset set = 0;    // S_j: agents with positive demand before the drop
  Subset block = 0;  // T_j = S_j \ S_{j-1}
  long iteration = 0;
  std::vector<int> pivots;  // members that dropped without clinching their full demand
  std::optional<Rational> pivot_price;
};

/// Blocks ordered from S = [n] downwards.
std::vector<TightBlock> tight_family(const AuctionTrace& trace, int n);

/**
 * Structural properties of a finished run: dropping-price bounds, nested and
 * tight positive-demand sets, the tight-set family with block prices,
 * drops accompanying full clinches, all goods sold, and, for multi-unit
 * environments, the low/pivot/high partition. Properties that rely on values
 * and budgets lying on the price grid are reported as Warn when they fail
 * on an off-grid scenario.
 */
std::vector<CheckResult> check_structure(const Scenario& scenario, const AuctionResult& result);

struct VerifyOptions {
  bool pareto = true;
  bool ic = true;
  bool oracle = true;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::optional<ParetoResult> pareto;
  std::vector<IcResult> ic;
  bool values_on_grid = true;
  std::string grid_note;

  bool passed() const;
};

/// Full certification of a run: basic and structural checks plus the requested extras.
VerificationReport verify(const Scenario& scenario, const AuctionResult& result, const VerifyOptions& options);

struct VcgGap {
  Rational allocation;  // sum_i |x_i - x^vcg_i|
  Rational payment;     // sum_i |pi_i - pi^vcg_i|
};

/// Distance between the clinching outcome and VCG on min(v, beta).
VcgGap vcg_gap(const Scenario& scenario);

}  // namespace clinch
