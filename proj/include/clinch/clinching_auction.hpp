#pragma once

#include "clinch/core.hpp"
#include "clinch/payment_constraints.hpp"
#include "clinch/polymatroid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace clinch {

/// Auction input: environment, agents, price increment and round-robin order.
struct Scenario {
  SubmodularFunction f;
  std::vector<Agent> agents;
  Rational epsilon;
  std::vector<int> price_order;  // permutation of agents; empty means 0..n-1
  std::optional<std::uint64_t> seed;

  int size() const { return f.size(); }
  /// price_order, or the identity when unset.
  std::vector<int> effective_order() const;
};

/// Throws std::invalid_argument on structural problems (sizes, eps <= 0, bad order, invalid f).
void validate_scenario(const Scenario& scenario);

/// Agents whose value or finite beta is not a multiple of epsilon.
std::vector<int> off_grid_agents(const Scenario& scenario);

struct AuctionState {
  Vector allocation;
  Vector payment;
  Vector price;
  Vector demand;
  friend bool operator==(const AuctionState&, const AuctionState&) = default;
};

struct Outcome {
  Vector allocation;
  Vector payment;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Reasons an agent's demand reaches zero; a drop may carry several.
enum DropReason : unsigned {
  kClinchedFullDemand = 1u << 0,
  kPriceReachedValue = 1u << 1,
  kAverageBudgetBinding = 1u << 2,
};

std::vector<std::string> drop_reason_names(unsigned reasons);

struct InvariantReport {
  bool maximality = true;      // f_{x+d}([n]) == f_{x+(0,d_-i)}([n]) for all i
  bool all_goods_sold = true;  // f_{x+d}([n]) == f([n])
  bool self_unsaturated = true;  // f_{x+(0,d_-i)}([n]) == f_{x+(0,d_-i)}([n] \ i) + x_i
  std::vector<std::string> witnesses;

  bool ok() const { return maximality && all_goods_sold && self_unsaturated; }
  friend bool operator==(const InvariantReport&, const InvariantReport&) = default;
};

/// State at the checkpoint after clinching and demand recomputation.
struct Checkpoint {
  long iteration = 0;
  int price_agent = 0;  // agent whose price rises right after this point
  Subset positive_demand = 0;
  std::optional<InvariantReport> invariants;
  // Full traces only:
  std::optional<AuctionState> state;
  std::optional<Vector> pre_clinch_demand;
  std::optional<Vector> clinched;
  std::optional<Subset> unsaturated;  // price_agent-unsaturated agents
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct ClinchEvent {
  long iteration = 0;
  int agent = 0;
  Rational amount;
  Rational price;
  friend bool operator==(const ClinchEvent&, const ClinchEvent&) = default;
};

struct AuctionTrace {
  std::vector<int> price_order;
  std::vector<Checkpoint> checkpoints;
  std::vector<ClinchEvent> clinch_events;
  std::vector<std::optional<Rational>> dropping_prices;  // phi_i
  std::vector<unsigned> dropping_reasons;
  std::vector<long> dropping_iterations;
  long iterations = 0;
  friend bool operator==(const AuctionTrace&, const AuctionTrace&) = default;
};

struct AuctionResult {
  Outcome outcome;
  AuctionTrace trace;
};

enum class TraceMode { Summary, Full };
enum class ClinchRule { Auto, Polyhedral, MultiUnit };

struct RunOptions {
  bool check_invariants = false;
  TraceMode trace = TraceMode::Full;
  ClinchRule rule = ClinchRule::Auto;
};

/**
 * Clinched amounts delta_i = [f_{x+d}([n]) - f_{x+(0,d_-i)}([n])]^+ for the
 * polymatroid of f. Throws PreconditionViolation when x is not in P.
 */
Vector clinch_amounts(const SubmodularFunction& f, const Vector& x, const Vector& d);

/// delta_i = [supply - sum_j x_j - sum_{j != i} d_j]^+ for a single divisible good.
Vector clinch_amounts_multiunit(const Rational& supply, const Vector& x, const Vector& d);

/**
 * Ascending-clock clinching auction. Demands are capped at f([n]).
 *
 * Each iteration: compute demands, clinch, charge the current prices,
 * recompute demands (checkpoint), raise the price of the round-robin agent
 * by epsilon; stop once every demand is zero. Multi-unit environments use
 * the closed-form clinch under ClinchRule::Auto.
 *
 * Throws InvariantViolation if the iteration bound is exceeded, or, with
 * check_invariants, if an invariant fails at a checkpoint.
 */
AuctionResult run(const Scenario& scenario, const RunOptions& options = {});

/// (k-unsaturated, k-saturated) partition for psi = (x_k, x_-k + d_-k).
std::pair<Subset, Subset> saturation_partition(const SubmodularFunction& f, const Vector& x, const Vector& d, int k);

/// Exact check of the three checkpoint invariants at state (x, d).
InvariantReport check_invariants(const SubmodularFunction& f, const Vector& x, const Vector& d);

/// Upper bound on loop iterations: n * (ceil(max v / eps) + 2).
long iteration_bound(const Scenario& scenario);

}  // namespace clinch
