#include "clinch/clinching_auction.hpp"

#include <algorithm>
#include <numeric>

namespace clinch {

std::vector<int> Scenario::effective_order() const {
  if (!price_order.empty()) return price_order;
  std::vector<int> order(static_cast<std::size_t>(size()));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

void validate_scenario(const Scenario& scenario) {
  const int n = scenario.size();
  if (static_cast<int>(scenario.agents.size()) != n) {
    throw std::invalid_argument("scenario has " + std::to_string(scenario.agents.size()) + " agents but f is over " +
                                std::to_string(n));
  }
  if (scenario.epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  for (int i = 0; i < n; ++i) {
    if (scenario.agents[static_cast<std::size_t>(i)].value < 0) {
      throw std::invalid_argument("agent " + std::to_string(i) + " has a negative value");
    }
  }
  if (!scenario.price_order.empty()) {
    std::vector<int> sorted = scenario.price_order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> identity(static_cast<std::size_t>(n));
    std::iota(identity.begin(), identity.end(), 0);
    if (sorted != identity) throw std::invalid_argument("price_order must be a permutation of 0..n-1");
  }
  const auto violations = validate(scenario.f);
  if (!violations.empty()) {
    throw std::invalid_argument("environment is not a polymatroid: " + violations.front().describe());
  }
}

std::vector<int> off_grid_agents(const Scenario& scenario) {
  std::vector<int> out;
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    const auto& agent = scenario.agents[i];
    const auto b = beta(agent.alpha);
    if (!is_multiple_of(agent.value, scenario.epsilon) || (b && !is_multiple_of(*b, scenario.epsilon))) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

std::vector<std::string> drop_reason_names(unsigned reasons) {
  std::vector<std::string> out;
  if (reasons & kClinchedFullDemand) out.emplace_back("clinched_full_demand");
  if (reasons & kPriceReachedValue) out.emplace_back("price_reached_value");
  if (reasons & kAverageBudgetBinding) out.emplace_back("average_budget_binding");
  return out;
}

namespace {

void require_feasible(const SubmodularFunction& f, const Vector& x) {
  if (auto bad = find_violated_set(f, x)) {
    throw PreconditionViolation("allocation " + format_vector(x) + " is not in P: violates " + format_subset(*bad));
  }
}

// x + (0, d_-i)
Vector cap_without(const Vector& x, const Vector& d, int i) {
  Vector psi = x + d;
  psi(i) = x(i);
  return psi;
}

}  // namespace

Vector clinch_amounts(const SubmodularFunction& f, const Vector& x, const Vector& d) {
  const int n = f.size();
  if (x.size() != n || d.size() != n) throw PreconditionViolation("allocation/demand length differs from ground set");
  require_feasible(f, x);
  const Subset all = f.ground_set();
  const Rational with_all = capped_eval(f, x + d, all);
  Vector delta = zeros(n);
  for (int i = 0; i < n; ++i) {
    if (d(i) == 0) continue;  // zeroing a zero coordinate changes nothing
    const Rational gap = with_all - capped_eval(f, cap_without(x, d, i), all);
    if (gap > 0) delta(i) = gap;
  }
  return delta;
}

Vector clinch_amounts_multiunit(const Rational& supply, const Vector& x, const Vector& d) {
  if (x.size() != d.size()) throw PreconditionViolation("allocation/demand length mismatch");
  const Rational remnant = supply - x.sum();
  if (remnant < 0) throw PreconditionViolation("allocation exceeds supply");
  const Rational total_demand = d.sum();
  const Rational sellable = std::min(remnant, total_demand);
  Vector delta = zeros(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    delta(i) = sellable - std::min(remnant, Rational(total_demand - d(i)));
  }
  return delta;
}

std::pair<Subset, Subset> saturation_partition(const SubmodularFunction& f, const Vector& x, const Vector& d, int k) {
  const int n = f.size();
  if (k < 0 || k >= n) throw PreconditionViolation("agent index out of range");
  const Vector psi = cap_without(x, d, k);
  const Subset all = f.ground_set();
  const Rational total = capped_eval(f, psi, all);
  Subset unsaturated = 0;
  for (int i = 0; i < n; ++i) {
    if (psi(i) == total - capped_eval(f, psi, all & ~singleton(i))) unsaturated |= singleton(i);
  }
  return {unsaturated, all & ~unsaturated};
}

InvariantReport check_invariants(const SubmodularFunction& f, const Vector& x, const Vector& d) {
  const int n = f.size();
  const Subset all = f.ground_set();
  InvariantReport report;
  const Rational with_all = capped_eval(f, x + d, all);
  const Rational f_all = f.total();
  if (with_all != f_all) {
    report.all_goods_sold = false;
    report.witnesses.push_back("II: f_{x+d}([n]) = " + to_string(with_all) + " != f([n]) = " + to_string(f_all));
  }
  for (int i = 0; i < n; ++i) {
    const Vector psi = cap_without(x, d, i);
    const Rational without_i = capped_eval(f, psi, all);
    if (without_i != with_all) {
      report.maximality = false;
      report.witnesses.push_back("I: agent " + std::to_string(i) + ": f_{x+(0,d_-i)}([n]) = " + to_string(without_i) +
                                 " != f_{x+d}([n]) = " + to_string(with_all));
    }
    const Rational rest = capped_eval(f, psi, all & ~singleton(i));
    if (without_i != rest + x(i)) {
      report.self_unsaturated = false;
      report.witnesses.push_back("III: agent " + std::to_string(i) + ": " + to_string(without_i) +
                                 " != " + to_string(rest) + " + " + to_string(x(i)));
    }
  }
  return report;
}

long iteration_bound(const Scenario& scenario) {
  Rational vmax(0);
  for (const auto& a : scenario.agents) vmax = std::max(vmax, a.value);
  const Rational steps = ceil_rational(vmax / scenario.epsilon);
  return static_cast<long>(scenario.size()) * (steps.convert_to<long>() + 2);
}

AuctionResult run(const Scenario& scenario, const RunOptions& options) {
  validate_scenario(scenario);
  const SubmodularFunction& f = scenario.f;
  const int n = f.size();
  const Rational cap = f.total();
  const std::vector<int> order = scenario.effective_order();
  const bool closed_form = options.rule == ClinchRule::MultiUnit ||
                           (options.rule == ClinchRule::Auto && f.is_multi_unit());
  if (closed_form && !f.is_multi_unit()) {
    throw PreconditionViolation("the multi-unit clinch rule needs a multi-unit environment");
  }
  const bool full = options.trace == TraceMode::Full;

  AuctionState s{zeros(n), zeros(n), zeros(n), zeros(n)};
  AuctionTrace trace;
  trace.price_order = order;
  trace.dropping_prices.assign(static_cast<std::size_t>(n), std::nullopt);
  trace.dropping_reasons.assign(static_cast<std::size_t>(n), 0u);
  trace.dropping_iterations.assign(static_cast<std::size_t>(n), -1);

  auto refresh_demands = [&] {
    for (int i = 0; i < n; ++i) {
      s.demand(i) = demand(scenario.agents[static_cast<std::size_t>(i)], s.allocation(i), s.payment(i), s.price(i), cap);
    }
  };

  const long bound = iteration_bound(scenario);
  std::size_t turn = 0;
  for (long iter = 0;; ++iter) {
    if (iter > bound) throw InvariantViolation("auction exceeded its iteration bound of " + std::to_string(bound));
    const int hat = order[turn];

    refresh_demands();
    const Vector before = s.demand;
    const Vector delta = closed_form ? clinch_amounts_multiunit(std::get<SubmodularFunction::MultiUnit>(f.form()).supply,
                                                                s.allocation, s.demand)
                                     : clinch_amounts(f, s.allocation, s.demand);
    s.allocation += delta;
    s.payment += s.price.cwiseProduct(delta);
    refresh_demands();

    for (int i = 0; i < n; ++i) {
      if (delta(i) > 0) trace.clinch_events.push_back({iter, i, delta(i), s.price(i)});
    }

    // Dropping prices: first checkpoint with zero demand.
    for (int i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (s.demand(i) != 0 || trace.dropping_prices[idx]) continue;
      const auto& agent = scenario.agents[idx];
      unsigned reasons = 0;
      if (before(i) > 0 && delta(i) == before(i)) reasons |= kClinchedFullDemand;
      if (s.price(i) >= agent.value) reasons |= kPriceReachedValue;
      if (const auto b = beta(agent.alpha); b && s.payment(i) == *b * s.allocation(i) && s.price(i) > *b) {
        reasons |= kAverageBudgetBinding;
      }
      trace.dropping_prices[idx] = s.price(i);
      trace.dropping_reasons[idx] = reasons;
      trace.dropping_iterations[idx] = iter;
    }

    Checkpoint cp;
    cp.iteration = iter;
    cp.price_agent = hat;
    for (int i = 0; i < n; ++i) {
      if (s.demand(i) > 0) cp.positive_demand |= singleton(i);
    }
    if (options.check_invariants) {
      cp.invariants = check_invariants(f, s.allocation, s.demand);
      if (!cp.invariants->ok()) {
        throw InvariantViolation("invariant failure at checkpoint " + std::to_string(iter) + ": " +
                                 cp.invariants->witnesses.front());
      }
    }
    if (full) {
      cp.state = s;
      cp.pre_clinch_demand = before;
      cp.clinched = delta;
      cp.unsaturated = saturation_partition(f, s.allocation, s.demand, hat).first;
    }
    trace.checkpoints.push_back(std::move(cp));

    if (trace.checkpoints.back().positive_demand == 0) {
      trace.iterations = iter + 1;
      break;
    }
    s.price(hat) += scenario.epsilon;
    turn = (turn + 1) % order.size();
  }

  return {Outcome{s.allocation, s.payment}, std::move(trace)};
}

}  // namespace clinch
