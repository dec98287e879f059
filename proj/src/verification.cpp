#include "clinch/verification.hpp"

#include "clinch/rational_lp.hpp"

#include <algorithm>
#include <numeric>

namespace clinch {

std::string to_string(Status status) {
  switch (status) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Warn:
      return "warn";
  }
  return "unknown";
}

namespace {

Rational welfare_of(std::span<const Agent> agents, const Vector& x) {
  Rational w(0);
  for (std::size_t i = 0; i < agents.size(); ++i) w += agents[i].value * x(static_cast<Eigen::Index>(i));
  return w;
}

Rational effective_value(const Agent& agent) {
  const auto b = beta(agent.alpha);
  return b && *b < agent.value ? *b : agent.value;
}

void require_outcome_shape(const SubmodularFunction& f, std::span<const Agent> agents, const Outcome& outcome) {
  const auto n = static_cast<Eigen::Index>(f.size());
  if (static_cast<Eigen::Index>(agents.size()) != n || outcome.allocation.size() != n || outcome.payment.size() != n) {
    throw PreconditionViolation("outcome, agents and environment sizes differ");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

ParetoResult pareto_check(const SubmodularFunction& f, std::span<const Agent> agents, const Outcome& outcome) {
  require_outcome_shape(f, agents, outcome);
  const int n = f.size();
  if (n > kMaxParetoAgents) throw UnsupportedSize("Pareto LP enumerates 2^n constraints; n must be <= 10");
  const Vector& x = outcome.allocation;
  const Vector& pi = outcome.payment;
  if (auto bad = find_violated_set(f, x)) {
    throw PreconditionViolation("outcome allocation violates " + format_subset(*bad));
  }
  for (int i = 0; i < n; ++i) {
    const auto& agent = agents[static_cast<std::size_t>(i)];
    if (!is_admissible(agent.alpha, x(i), pi(i))) {
      throw PreconditionViolation("outcome is inadmissible for agent " + std::to_string(i));
    }
    if (pi(i) > agent.value * x(i)) {
      throw PreconditionViolation("outcome is not individually rational for agent " + std::to_string(i));
    }
  }

  // Variables: x'_0..x'_{n-1}, pi'_0..pi'_{n-1}.
  LinearProgram<Rational> lp(2 * n);
  Vector objective = zeros(2 * n);
  for (int i = 0; i < n; ++i) {
    objective(i) = agents[static_cast<std::size_t>(i)].value;
    lp.set_name(i, "x" + std::to_string(i));
    lp.set_name(n + i, "pi" + std::to_string(i));
  }
  lp.set_objective(objective);
  for (Subset s = 1; s <= f.ground_set(); ++s) {
    Vector row = zeros(2 * n);
    for (int i : members(s)) row(i) = Rational(1);
    lp.add_constraint(row, Sense::LessEqual, f.eval(s));
  }
  Vector revenue = zeros(2 * n);
  for (int i = 0; i < n; ++i) {
    const auto& agent = agents[static_cast<std::size_t>(i)];
    for (const auto& piece : agent.alpha.pieces()) {
      Vector row = zeros(2 * n);
      row(n + i) = Rational(1);
      row(i) = -piece.slope;
      lp.add_constraint(row, Sense::LessEqual, piece.intercept);
    }
    Vector utility = zeros(2 * n);
    utility(i) = agent.value;
    utility(n + i) = Rational(-1);
    lp.add_constraint(utility, Sense::GreaterEqual, agent.value * x(i) - pi(i));
    revenue(n + i) = Rational(1);
  }
  lp.add_constraint(revenue, Sense::GreaterEqual, pi.sum());

  const auto sol = solve(lp);
  if (sol.status != LPStatus::Optimal) {
    throw Error("Pareto LP did not reach an optimum although the outcome itself is feasible");
  }

  ParetoResult result;
  result.welfare = welfare_of(agents, x);
  result.lp_optimum = sol.value;
  result.efficient = sol.value == result.welfare;
  if (!result.efficient) {
    ParetoImprovement imp{sol.point.head(n), sol.point.tail(n), sol.value - result.welfare};
    if (!is_feasible(f, imp.allocation)) throw Error("LP improvement is not in P");
    for (int i = 0; i < n; ++i) {
      const auto& agent = agents[static_cast<std::size_t>(i)];
      if (!is_admissible(agent.alpha, imp.allocation(i), imp.payment(i))) {
        throw Error("LP improvement is inadmissible for agent " + std::to_string(i));
      }
      if (agent.value * imp.allocation(i) - imp.payment(i) < agent.value * x(i) - pi(i)) {
        throw Error("LP improvement lowers the utility of agent " + std::to_string(i));
      }
    }
    if (imp.payment.sum() < pi.sum()) throw Error("LP improvement lowers revenue");
    result.improvement = std::move(imp);
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

// Greedy polymatroid allocation over `order` (weights assumed positive).
Vector greedy_allocation(const SubmodularFunction& f, const std::vector<int>& order) {
  Vector x = zeros(f.size());
  Subset prefix = 0;
  Rational previous(0);
  for (int i : order) {
    prefix |= singleton(i);
    Rational current = f.eval(prefix);
    x(i) = current - previous;
    previous = std::move(current);
  }
  return x;
}

Rational weighted(const std::vector<Rational>& w, const Vector& x) {
  Rational total(0);
  for (std::size_t i = 0; i < w.size(); ++i) total += w[i] * x(static_cast<Eigen::Index>(i));
  return total;
}

}  // namespace

Outcome vcg_baseline(const SubmodularFunction& f, std::span<const Agent> agents) {
  const int n = f.size();
  if (static_cast<int>(agents.size()) != n) throw PreconditionViolation("agent count differs from ground set");
  std::vector<Rational> tilde;
  for (const auto& a : agents) tilde.push_back(effective_value(a));
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (tilde[static_cast<std::size_t>(i)] > 0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return tilde[static_cast<std::size_t>(a)] > tilde[static_cast<std::size_t>(b)]; });

  Outcome out{greedy_allocation(f, order), zeros(n)};
  const Rational welfare = weighted(tilde, out.allocation);
  for (int i : order) {
    std::vector<int> without;
    std::copy_if(order.begin(), order.end(), std::back_inserter(without), [i](int j) { return j != i; });
    const Rational welfare_without = weighted(tilde, greedy_allocation(f, without));
    out.payment(i) = welfare_without - (welfare - tilde[static_cast<std::size_t>(i)] * out.allocation(i));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> basic_checks(const SubmodularFunction& f, std::span<const Agent> agents,
                                      const Outcome& outcome, bool require_all_sold) {
  require_outcome_shape(f, agents, outcome);
  std::vector<CheckResult> out;
  const Vector& x = outcome.allocation;
  const Vector& pi = outcome.payment;

  if (auto bad = find_violated_set(f, x)) {
    out.push_back({"feasible", Status::Fail, "x(" + format_subset(*bad) + ") exceeds f"});
  } else {
    out.push_back({"feasible", Status::Pass, ""});
  }

  CheckResult admissible{"admissible", Status::Pass, ""};
  CheckResult rational{"individually_rational", Status::Pass, ""};
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    if (!is_admissible(agents[i].alpha, x(idx), pi(idx))) {
      admissible.status = Status::Fail;
      admissible.detail += "agent " + std::to_string(i) + " pays " + to_string(pi(idx)) + " > alpha(" +
                           to_string(x(idx)) + "); ";
    }
    if (pi(idx) > agents[i].value * x(idx)) {
      rational.status = Status::Fail;
      rational.detail += "agent " + std::to_string(i) + " pays " + to_string(pi(idx)) + " > v*x = " +
                         to_string(agents[i].value * x(idx)) + "; ";
    }
  }
  out.push_back(std::move(admissible));
  out.push_back(std::move(rational));

  if (require_all_sold) {
    const Rational sold = x.sum();
    const Rational total = f.total();
    if (sold == total) {
      out.push_back({"all_goods_sold", Status::Pass, ""});
    } else {
      out.push_back({"all_goods_sold", Status::Fail, "x([n]) = " + to_string(sold) + " != f([n]) = " + to_string(total)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Rational> misreport_grid(const Scenario& scenario) {
  Rational vmax(0);
  for (const auto& a : scenario.agents) vmax = std::max(vmax, a.value);
  std::vector<Rational> grid;
  for (Rational v(0); v <= vmax + scenario.epsilon; v += scenario.epsilon) grid.push_back(v);
  return grid;
}

IcResult ic_grid_check(const Scenario& scenario, int agent, std::span<const Rational> grid) {
  if (agent < 0 || agent >= scenario.size()) throw PreconditionViolation("agent index out of range");
  const auto idx = static_cast<std::size_t>(agent);
  const Rational truth = scenario.agents[idx].value;
  const RunOptions options{false, TraceMode::Summary, ClinchRule::Auto};

  const auto truthful = run(scenario, options).outcome;
  const Rational truthful_utility = truth * truthful.allocation(agent) - truthful.payment(agent);

  IcResult result;
  result.reruns = 1;
  std::optional<Rational> last_allocation;
  for (const auto& report : grid) {
    Scenario deviated = scenario;
    deviated.agents[idx].value = report;
    const auto outcome = run(deviated, options).outcome;
    ++result.reruns;
    const Rational utility = truth * outcome.allocation(agent) - outcome.payment(agent);
    if (utility > truthful_utility) {
      result.pass = false;
      result.witness = IcWitness{agent, report, utility - truthful_utility, false};
      return result;
    }
    if (last_allocation && outcome.allocation(agent) < *last_allocation) {
      result.pass = false;
      result.witness = IcWitness{agent, report, outcome.allocation(agent) - *last_allocation, true};
      return result;
    }
    last_allocation = outcome.allocation(agent);
  }
  return result;
}

IcResult ic_grid_check(const Scenario& scenario, int agent) {
  const auto grid = misreport_grid(scenario);
  return ic_grid_check(scenario, agent, grid);
}

// ---------------------------------------------------------------------------

namespace {

bool on_grid(const Rational& q, const Rational& step) { return is_multiple_of(q, step); }

// Greedy vertex of { z_-i : 0 <= z <= d, z_i = 0, x + z in P } for one order of the others.
Vector greedy_remnant_vertex(const SubmodularFunction& f, const Vector& x, const Vector& d, const std::vector<int>& order) {
  const int n = f.size();
  Vector z = zeros(n);
  const Subset all = f.ground_set();
  for (int j : order) {
    Rational inc = d(j);
    for (Subset s = 1; s <= all; ++s) {
      if (!contains(s, j)) continue;
      const Rational slack = f.eval(s) - subset_sum(x, s) - subset_sum(z, s);
      if (slack < inc) inc = slack;
    }
    z(j) = inc > 0 ? inc : Rational(0);
  }
  return z;
}

}  // namespace

Rational common_grid(const SubmodularFunction& f, const Vector& x, const Vector& d) {
  using boost::multiprecision::mpz_int;
  mpz_int l = 1;
  auto absorb = [&](const Rational& q) {
    const mpz_int den = boost::multiprecision::denominator(q);
    l = boost::multiprecision::lcm(l, den);
  };
  for (Eigen::Index i = 0; i < x.size(); ++i) absorb(x(i));
  for (Eigen::Index i = 0; i < d.size(); ++i) absorb(d(i));
  for (Subset s = 0; s <= f.ground_set(); ++s) absorb(f.eval(s));
  return Rational(mpz_int(1), l);
}

Vector brute_force_clinch(const SubmodularFunction& f, const Vector& x, const Vector& d, const Rational& grid_step) {
  const int n = f.size();
  if (n > kMaxBruteForceAgents) throw UnsupportedSize("brute-force clinching supports at most 5 agents");
  if (x.size() != n || d.size() != n) throw PreconditionViolation("allocation/demand length differs from ground set");
  if (grid_step <= 0) throw PreconditionViolation("grid step must be positive");
  for (int i = 0; i < n; ++i) {
    if (!on_grid(x(i), grid_step) || !on_grid(d(i), grid_step)) {
      throw Unsupported("state is not aligned to grid step " + to_string(grid_step));
    }
  }
  for (Subset s = 0; s <= f.ground_set(); ++s) {
    if (!on_grid(f.eval(s), grid_step)) throw Unsupported("f is not aligned to grid step " + to_string(grid_step));
  }
  if (auto bad = find_violated_set(f, x)) {
    throw PreconditionViolation("allocation violates " + format_subset(*bad));
  }

  Vector delta = zeros(n);
  const Subset all = f.ground_set();
  for (int i = 0; i < n; ++i) {
    std::vector<int> others;
    for (int j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    std::vector<Vector> vertices;
    do {
      vertices.push_back(greedy_remnant_vertex(f, x, d, others));
    } while (std::next_permutation(others.begin(), others.end()));

    auto keeps_all = [&](const Rational& amount) {
      for (const auto& z : vertices) {
        Vector y = x + z;
        y(i) += amount;
        for (Subset s = 1; s <= all; ++s) {
          if (contains(s, i) && subset_sum(y, s) > f.eval(s)) return false;
        }
      }
      return true;
    };
    // Feasible amounts are downward closed, so bisect over multiples of the step.
    using boost::multiprecision::mpz_int;
    mpz_int lo = 0;
    mpz_int hi = boost::multiprecision::numerator(Rational(d(i) / grid_step));
    while (lo < hi) {
      const mpz_int mid = (lo + hi + 1) / 2;
      if (keeps_all(Rational(mid) * grid_step)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    delta(i) = Rational(lo) * grid_step;
  }
  return delta;
}

// ---------------------------------------------------------------------------

std::vector<TightBlock> tight_family(const AuctionTrace& trace, int n) {
  std::vector<TightBlock> out;
  Subset previous = full_set(n);
  for (const auto& cp : trace.checkpoints) {
    if (cp.positive_demand == previous) continue;
    TightBlock block;
    block.set = previous;
    block.block = previous & ~cp.positive_demand;
    block.iteration = cp.iteration;
    for (int i : members(block.block)) {
      const auto idx = static_cast<std::size_t>(i);
      if ((trace.dropping_reasons[idx] & kClinchedFullDemand) == 0) {
        block.pivots.push_back(i);
        if (!block.pivot_price) block.pivot_price = trace.dropping_prices[idx];
      }
    }
    out.push_back(std::move(block));
    previous = cp.positive_demand;
  }
  return out;
}

namespace {

struct CheckBuilder {
  std::vector<CheckResult>& out;
  bool grid_ok;

  void add(std::string name, const std::string& failure, bool grid_dependent) {
    if (failure.empty()) {
      out.push_back({std::move(name), Status::Pass, ""});
    } else {
      const Status s = grid_dependent && !grid_ok ? Status::Warn : Status::Fail;
      out.push_back({std::move(name), s, failure});
    }
  }
};

std::string check_dropping_prices(const Scenario& sc, const AuctionResult& r) {
  std::string fail;
  const auto& tr = r.trace;
  for (int i = 0; i < sc.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto& agent = sc.agents[idx];
    if (!tr.dropping_prices[idx]) {
      fail += "agent " + std::to_string(i) + " never dropped; ";
      continue;
    }
    const Rational& phi = *tr.dropping_prices[idx];
    if (phi > agent.value) fail += "agent " + std::to_string(i) + ": phi " + to_string(phi) + " > v; ";
    if (tr.dropping_reasons[idx] == 0) fail += "agent " + std::to_string(i) + ": drop has no recognised reason; ";
    if (r.outcome.allocation(i) == 0 && r.outcome.payment(i) == 0) {
      const auto b = beta(agent.alpha);
      const Rational expected = b ? std::min(Rational(*b + sc.epsilon), agent.value) : agent.value;
      if (phi != expected) {
        fail += "agent " + std::to_string(i) + ": unallocated with phi " + to_string(phi) + " != " +
                to_string(expected) + "; ";
      }
    }
  }
  return fail;
}

std::string check_nested_and_tight(const Scenario& sc, const AuctionResult& r) {
  std::string fail;
  Subset previous = sc.f.ground_set();
  for (const auto& cp : r.trace.checkpoints) {
    if (!is_subset(cp.positive_demand, previous)) {
      fail += "iteration " + std::to_string(cp.iteration) + ": positive-demand set grew; ";
    }
    previous = cp.positive_demand;
  }
  return fail;
}

std::string check_final_tightness(const Scenario& sc, const AuctionResult& r) {
  std::string fail;
  Subset last = ~Subset{0};
  for (const auto& cp : r.trace.checkpoints) {
    if (cp.positive_demand == last) continue;
    last = cp.positive_demand;
    if (subset_sum(r.outcome.allocation, cp.positive_demand) != sc.f.eval(cp.positive_demand)) {
      fail += format_subset(cp.positive_demand) + " (iteration " + std::to_string(cp.iteration) + ") not tight; ";
    }
  }
  return fail;
}

std::string check_full_clinch_companions(const Scenario& sc, const AuctionResult& r) {
  std::string fail;
  const auto& tr = r.trace;
  std::vector<long> iterations;
  for (int i = 0; i < sc.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (tr.dropping_reasons[idx] & kClinchedFullDemand) iterations.push_back(tr.dropping_iterations[idx]);
  }
  for (long it : iterations) {
    bool companion = false;
    for (int i = 0; i < sc.size(); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (tr.dropping_iterations[idx] == it && (tr.dropping_reasons[idx] & kClinchedFullDemand) == 0) companion = true;
    }
    if (!companion) fail += "iteration " + std::to_string(it) + ": full clinch without a non-clinching drop; ";
  }
  return fail;
}

std::string check_family(const Scenario& sc, const AuctionResult& r, const std::vector<TightBlock>& family) {
  std::string fail;
  const auto& tr = r.trace;
  for (const auto& block : family) {
    const std::string where = "block " + format_subset(block.block) + ": ";
    if (subset_sum(r.outcome.allocation, block.set) != sc.f.eval(block.set)) {
      fail += where + "S = " + format_subset(block.set) + " not tight; ";
    }
    if (block.pivots.empty()) {
      fail += where + "no member dropped without a full clinch; ";
      continue;
    }
    const Rational& pivot_price = *block.pivot_price;
    for (int i : members(block.block)) {
      const auto idx = static_cast<std::size_t>(i);
      const Rational& phi = *tr.dropping_prices[idx];
      const bool is_pivot = std::find(block.pivots.begin(), block.pivots.end(), i) != block.pivots.end();
      if (is_pivot && phi != pivot_price) {
        fail += where + "simultaneous pivots at different prices; ";
      }
      if (!is_pivot && phi != pivot_price && phi != pivot_price - sc.epsilon) {
        fail += where + "agent " + std::to_string(i) + " phi " + to_string(phi) + " not in {" +
                to_string(pivot_price - sc.epsilon) + ", " + to_string(pivot_price) + "}; ";
      }
    }
  }
  return fail;
}

std::string check_multi_unit_partition(const Scenario& sc, const AuctionResult& r) {
  const int n = sc.size();
  const auto& tr = r.trace;
  const Vector& x = r.outcome.allocation;
  const Vector& pi = r.outcome.payment;
  std::string fail;
  if (x.sum() != sc.f.total()) fail += "sum x != supply; ";

  std::string last_reason = "no agent qualifies as the pivot k";
  for (int k = 0; k < n; ++k) {
    const auto kx = static_cast<std::size_t>(k);
    if (tr.dropping_reasons[kx] & kClinchedFullDemand) continue;
    const Rational& phi_k = *tr.dropping_prices[kx];
    const auto& agent_k = sc.agents[kx];
    const auto beta_k = beta(agent_k.alpha);
    const bool k_ok = phi_k == agent_k.value ||
                      (beta_k && pi(k) == *beta_k * x(k) && phi_k == *beta_k + sc.epsilon);
    if (!k_ok) {
      last_reason = "candidate " + std::to_string(k) + " fails the pivot condition";
      continue;
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (i == k) continue;
      const auto idx = static_cast<std::size_t>(i);
      const Rational& phi = *tr.dropping_prices[idx];
      const bool low = x(i) == 0 && pi(i) == 0 && phi <= phi_k;
      const bool high = sc.agents[idx].value > phi && (phi == phi_k || phi == phi_k - sc.epsilon) &&
                        pi(i) == alpha_eval(sc.agents[idx].alpha, x(i));
      if (!low && !high) {
        ok = false;
        last_reason = "with k=" + std::to_string(k) + ", agent " + std::to_string(i) + " is neither low nor high";
      }
    }
    if (ok) return fail;
  }
  return fail + last_reason;
}

}  // namespace

std::vector<CheckResult> check_structure(const Scenario& scenario, const AuctionResult& result) {
  std::vector<CheckResult> out;
  CheckBuilder b{out, off_grid_agents(scenario).empty()};
  const int n = scenario.size();
  b.add("dropping_price_bounds", check_dropping_prices(scenario, result), true);
  b.add("nested_positive_demand", check_nested_and_tight(scenario, result), false);
  b.add("positive_demand_sets_tight", check_final_tightness(scenario, result), false);
  b.add("full_clinch_has_companion_drop", check_full_clinch_companions(scenario, result), false);
  b.add("tight_family_prices", check_family(scenario, result, tight_family(result.trace, n)), true);
  if (scenario.f.is_multi_unit()) {
    b.add("multi_unit_partition", check_multi_unit_partition(scenario, result), true);
  }
  return out;
}

// ---------------------------------------------------------------------------

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == Status::Fail; });
}

VerificationReport verify(const Scenario& scenario, const AuctionResult& result, const VerifyOptions& options) {
  VerificationReport report;
  const auto violations = off_grid_agents(scenario);
  report.values_on_grid = violations.empty();
  if (violations.empty()) {
    report.grid_note = "all values and finite average budgets are multiples of epsilon";
  } else {
    report.grid_note = "agents off the epsilon grid:";
    for (int i : violations) report.grid_note += " " + std::to_string(i);
    report.grid_note += "; grid-dependent properties downgraded to warnings";
  }

  for (auto& c : basic_checks(scenario.f, scenario.agents, result.outcome, true)) report.checks.push_back(std::move(c));
  for (auto& c : check_structure(scenario, result)) report.checks.push_back(std::move(c));

  for (const auto& cp : result.trace.checkpoints) {
    if (cp.invariants && !cp.invariants->ok()) {
      report.checks.push_back({"invariants", Status::Fail,
                               "iteration " + std::to_string(cp.iteration) + ": " + cp.invariants->witnesses.front()});
    }
  }

  if (options.pareto) {
    if (scenario.size() > kMaxParetoAgents) {
      report.checks.push_back({"pareto", Status::Warn, "skipped: more than 10 agents"});
    } else {
      auto pareto = pareto_check(scenario.f, scenario.agents, result.outcome);
      const Status s = pareto.efficient ? Status::Pass : (report.values_on_grid ? Status::Fail : Status::Warn);
      report.checks.push_back({"pareto", s,
                               pareto.efficient ? "LP optimum " + to_string(pareto.lp_optimum)
                                                : "improvement raises welfare by " +
                                                      to_string(pareto.improvement->welfare_gain)});
      report.pareto = std::move(pareto);
    }
  }

  if (options.ic) {
    const auto grid = misreport_grid(scenario);
    CheckResult ic{"incentive_compatibility", Status::Pass, ""};
    for (int i = 0; i < scenario.size(); ++i) {
      auto res = ic_grid_check(scenario, i, grid);
      if (!res.pass) {
        ic.status = Status::Fail;
        const auto& w = *res.witness;
        ic.detail += "agent " + std::to_string(i) + (w.monotonicity ? " allocation drops at report " : " gains ") +
                     (w.monotonicity ? to_string(w.misreport) : to_string(w.gain) + " by reporting " + to_string(w.misreport)) +
                     "; ";
      }
      report.ic.push_back(std::move(res));
    }
    report.checks.push_back(std::move(ic));
  }

  if (options.oracle) {
    if (scenario.size() > kMaxBruteForceAgents) {
      report.checks.push_back({"clinch_oracle", Status::Warn, "skipped: more than 5 agents"});
    } else {
      CheckResult oracle{"clinch_oracle", Status::Pass, ""};
      std::size_t compared = 0;
      for (const auto& cp : result.trace.checkpoints) {
        if (!cp.state || !cp.pre_clinch_demand || !cp.clinched) continue;
        const Vector x_before = cp.state->allocation - *cp.clinched;
        const Rational grid = common_grid(scenario.f, x_before, *cp.pre_clinch_demand);
        const Vector expected = brute_force_clinch(scenario.f, x_before, *cp.pre_clinch_demand, grid);
        ++compared;
        if (expected != *cp.clinched) {
          oracle.status = Status::Fail;
          oracle.detail += "iteration " + std::to_string(cp.iteration) + ": oracle " + format_vector(expected) +
                           " vs " + format_vector(*cp.clinched) + "; ";
        }
      }
      if (compared == 0) {
        oracle.status = Status::Warn;
        oracle.detail = "no full checkpoints to compare (summary trace)";
      }
      report.checks.push_back(std::move(oracle));
    }
  }
  return report;
}

VcgGap vcg_gap(const Scenario& scenario) {
  const auto clinching = run(scenario, {false, TraceMode::Summary, ClinchRule::Auto}).outcome;
  const auto vcg = vcg_baseline(scenario.f, scenario.agents);
  VcgGap gap{Rational(0), Rational(0)};
  for (Eigen::Index i = 0; i < clinching.allocation.size(); ++i) {
    gap.allocation += abs(clinching.allocation(i) - vcg.allocation(i));
    gap.payment += abs(clinching.payment(i) - vcg.payment(i));
  }
  return gap;
}

}  // namespace clinch
