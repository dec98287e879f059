// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "clinch/cli_io.hpp"
#include "clinch/verification.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace clinch;

namespace {

// Pinned limits. All comparisons below are exact rational equalities.
constexpr double kTwoSlotSeconds = 1.0;
constexpr double kParetoSuiteSeconds = 600.0;
constexpr int kMinParetoScenarios = 500;
constexpr int kMinOracleStates = 200;
constexpr int kMinAlgebraStates = 200;
constexpr int kMaxAgents = 5;
constexpr int kValueMax = 6;
constexpr int kGapScenarios = 200;
constexpr int kDeterminismScenarios = 60;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void report(int id, const char* name, const Verdict& v, double secs) {
  std::printf("[%s] %2d %-32s %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string describe_scenario(const Scenario& s) { return "seed " + std::to_string(s.seed.value_or(0)) + " " + describe(s.f); }

const CheckResult* find_check(const std::vector<CheckResult>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

/// The randomized population shared by criteria 2 to 6 and 10.
std::vector<Scenario> pareto_population() {
  const Rational eps[] = {Rational(1), Rational(1, 2), Rational(1, 4)};
  const ConstraintMix mixes[] = {ConstraintMix::Mixed, ConstraintMix::Mixed, ConstraintMix::HardOnly,
                                 ConstraintMix::AverageOnly, ConstraintMix::TwoPiece};
  std::vector<Scenario> out;
  for (int k = 0; k < 540; ++k) {
    GeneratorParams p;
    p.n = 1 + k % kMaxAgents;
    p.kind = static_cast<EnvironmentKind>(k % 3);
    p.epsilon = eps[(k / 3) % 3];
    p.v_max = kValueMax;
    p.mix = mixes[(k / 9) % 5];
    p.shuffle_order = (k / 45) % 2 == 1;
    out.push_back(generate(10'000 + static_cast<std::uint64_t>(k), p));
  }
  return out;
}

struct PopulationRun {
  Scenario scenario;
  AuctionResult result;
  std::string error;
};

// ---------------------------------------------------------------------------

void criterion1() {
  const auto t = Clock::now();
  Verdict v;
  const auto f = SubmodularFunction::sponsored_search({Rational(2), Rational(1)});
  const std::vector<Agent> agents{{Rational(10), AbilityToPay::average_budget(Rational(1))},
                                  {Rational(2), AbilityToPay::average_budget(Rational(2))}};
  const Outcome vcg = vcg_baseline(f, agents);
  if (vcg.allocation != from_list({Rational(1), Rational(2)})) v.fail("VCG allocation " + format_vector(vcg.allocation));
  if (vcg.payment != from_list({Rational(0), Rational(1)})) v.fail("VCG payment " + format_vector(vcg.payment));
  const auto po = pareto_check(f, agents, vcg);
  if (po.efficient || !po.improvement) v.fail("VCG outcome not refuted");
  if (po.welfare != 14 || po.lp_optimum != 18) v.fail("welfare " + to_string(po.welfare) + " vs optimum " + to_string(po.lp_optimum));
  if (po.improvement) {
    const auto& imp = *po.improvement;
    Rational revenue = 0, welfare = 0;
    if (!oracle::feasible(f, imp.allocation)) v.fail("improvement infeasible");
    for (int i = 0; i < 2; ++i) {
      const auto& a = agents[static_cast<std::size_t>(i)];
      if (!is_admissible(a.alpha, imp.allocation(i), imp.payment(i))) v.fail("improvement inadmissible");
      if (a.value * imp.allocation(i) - imp.payment(i) < a.value * vcg.allocation(i) - vcg.payment(i)) {
        v.fail("improvement hurts agent " + std::to_string(i));
      }
      revenue += imp.payment(i);
      welfare += a.value * imp.allocation(i);
    }
    if (revenue < vcg.payment.sum()) v.fail("improvement lowers revenue");
    if (welfare != 18) v.fail("improvement welfare " + to_string(welfare));
    if (v.pass) {
      v.detail = "VCG (1, 2)/(0, 1); improvement " + format_vector(imp.allocation) + "/" + format_vector(imp.payment) +
                 " welfare 18 > 14";
    }
  }
  const double secs = seconds_since(t);
  if (secs >= kTwoSlotSeconds) v.fail("took " + std::to_string(secs) + "s");
  report(1, "two_slot_vcg_refutation", v, secs);
}

std::vector<PopulationRun> criterion2(const std::vector<Scenario>& population) {
  const auto t = Clock::now();
  Verdict v;
  std::vector<PopulationRun> runs;
  int compliant = 0, checked = 0;
  std::set<int> kinds;
  for (const auto& s : population) {
    PopulationRun pr{s, {}, {}};
    try {
      pr.result = run(s, {true, TraceMode::Full, ClinchRule::Auto});
    } catch (const std::exception& e) {
      pr.error = e.what();
    }
    runs.push_back(pr);
    if (!off_grid_agents(s).empty()) continue;
    ++compliant;
    if (!pr.error.empty()) {
      v.fail(describe_scenario(s) + ": " + pr.error);
      continue;
    }
    const auto po = pareto_check(s.f, s.agents, pr.result.outcome);
    ++checked;
    kinds.insert(static_cast<int>(s.f.form().index()));
    if (!po.efficient || po.lp_optimum != po.welfare) {
      v.fail(describe_scenario(s) + ": LP optimum " + to_string(po.lp_optimum) + " > welfare " + to_string(po.welfare));
    }
  }
  const double secs = seconds_since(t);
  if (compliant < kMinParetoScenarios) v.fail("only " + std::to_string(compliant) + " compliant scenarios");
  if (kinds.size() != 3) v.fail("not all environment kinds covered");
  if (secs >= kParetoSuiteSeconds) v.fail("took " + std::to_string(secs) + "s");
  if (v.pass) v.detail = std::to_string(checked) + " scenarios, LP optimum == welfare in every one";
  report(2, "pareto_polyhedral", v, secs);
  return runs;
}

void criterion3(const std::vector<PopulationRun>& runs) {
  const auto t = Clock::now();
  Verdict v;
  long checkpoints = 0;
  for (const auto& r : runs) {
    if (!r.error.empty()) {
      v.fail(describe_scenario(r.scenario) + ": " + r.error);
      continue;
    }
    for (const auto& cp : r.result.trace.checkpoints) {
      // Independent recomputation from the stored state.
      const auto inv = check_invariants(r.scenario.f, cp.state->allocation, cp.state->demand);
      const bool recorded = cp.invariants && cp.invariants->ok();
      if (!inv.ok() || !recorded) {
        v.fail(describe_scenario(r.scenario) + " iteration " + std::to_string(cp.iteration));
        continue;
      }
      // Invariant II directly against the oracle's capped function.
      const Vector psi = cp.state->allocation + cp.state->demand;
      if (oracle::capped(r.scenario.f, psi, r.scenario.f.ground_set()) != r.scenario.f.total()) {
        v.fail(describe_scenario(r.scenario) + " iteration " + std::to_string(cp.iteration) + ": oracle disagrees on II");
      }
      ++checkpoints;
    }
  }
  if (v.pass) v.detail = "I, II, III exact at " + std::to_string(checkpoints) + " checkpoints";
  report(3, "invariants_at_checkpoints", v, seconds_since(t));
}

void criterion4(const std::vector<PopulationRun>& runs) {
  const auto t = Clock::now();
  Verdict v;
  long blocks = 0;
  for (const auto& r : runs) {
    if (!r.error.empty()) continue;
    const auto checks = check_structure(r.scenario, r.result);
    for (const char* name : {"nested_positive_demand", "positive_demand_sets_tight", "tight_family_prices",
                             "full_clinch_has_companion_drop", "dropping_price_bounds"}) {
      const auto* c = find_check(checks, name);
      if (c == nullptr || c->status != Status::Pass) {
        v.fail(describe_scenario(r.scenario) + ": " + name + (c ? " " + c->detail : ""));
      }
    }
    // Tightness of each recorded set, straight from the final outcome.
    const Vector& x = r.result.outcome.allocation;
    for (const auto& cp : r.result.trace.checkpoints) {
      if (subset_sum(x, cp.positive_demand) != r.scenario.f.eval(cp.positive_demand)) {
        v.fail(describe_scenario(r.scenario) + ": set " + format_subset(cp.positive_demand) + " not tight");
      }
    }
    blocks += static_cast<long>(tight_family(r.result.trace, r.scenario.size()).size());
  }
  if (v.pass) v.detail = std::to_string(blocks) + " tight blocks, nested, block prices within one step";
  report(4, "tight_set_structure", v, seconds_since(t));
}

void criterion5(const std::vector<PopulationRun>& runs) {
  const auto t = Clock::now();
  Verdict v;
  int scenarios = 0;
  for (const auto& r : runs) {
    if (!r.error.empty() || !r.scenario.f.is_multi_unit()) continue;
    ++scenarios;
    const auto checks = check_structure(r.scenario, r.result);
    const auto* part = find_check(checks, "multi_unit_partition");
    if (part == nullptr || part->status != Status::Pass) {
      v.fail(describe_scenario(r.scenario) + ": partition " + (part ? part->detail : "missing"));
    }
    if (r.result.outcome.allocation.sum() != r.scenario.f.total()) v.fail(describe_scenario(r.scenario) + ": supply not sold");
    const auto closed = run(r.scenario, {true, TraceMode::Full, ClinchRule::MultiUnit});
    const auto poly = run(r.scenario, {true, TraceMode::Full, ClinchRule::Polyhedral});
    const VerificationReport empty;
    const ReportOptions full{TraceMode::Full, std::nullopt};
    if (!(closed.outcome == poly.outcome) || !(closed.trace == poly.trace) ||
        run_report(r.scenario, closed, empty, full).dump() != run_report(r.scenario, poly, empty, full).dump()) {
      v.fail(describe_scenario(r.scenario) + ": closed-form and polyhedral traces differ");
    }
  }
  if (v.pass) v.detail = std::to_string(scenarios) + " multi-unit scenarios, identical traces under both rules";
  report(5, "multi_unit_structure", v, seconds_since(t));
}

void criterion6(const std::vector<PopulationRun>& runs) {
  const auto t = Clock::now();
  Verdict v;
  std::size_t reruns = 0;
  int outcomes = 0;
  for (const auto& r : runs) {
    if (!r.error.empty()) continue;
    for (const auto& c : basic_checks(r.scenario.f, r.scenario.agents, r.result.outcome, true)) {
      if (c.status != Status::Pass) v.fail(describe_scenario(r.scenario) + ": " + c.name + " " + c.detail);
    }
    ++outcomes;
    if (!off_grid_agents(r.scenario).empty()) continue;
    const auto grid = misreport_grid(r.scenario);
    for (int i = 0; i < r.scenario.size(); ++i) {
      const auto ic = ic_grid_check(r.scenario, i, grid);
      reruns += ic.reruns;
      if (!ic.pass) {
        v.fail(describe_scenario(r.scenario) + ": agent " + std::to_string(i) + " gains " +
               (ic.witness ? to_string(ic.witness->gain) : "?") + " by reporting " +
               (ic.witness ? to_string(ic.witness->misreport) : "?"));
      }
    }
  }
  if (v.pass) {
    v.detail = std::to_string(reruns) + " misreport reruns with zero gain; IR and admissibility on " +
               std::to_string(outcomes) + " outcomes";
  }
  report(6, "incentive_compatibility_ir", v, seconds_since(t));
}

void criterion7(const std::vector<PopulationRun>& runs) {
  const auto t = Clock::now();
  Verdict v;
  int states = 0;
  // States reached by the auction itself.
  for (const auto& r : runs) {
    if (!r.error.empty() || r.scenario.size() > kMaxBruteForceAgents) continue;
    for (const auto& cp : r.result.trace.checkpoints) {
      const Vector x_before = cp.state->allocation - *cp.clinched;
      const Vector& d = *cp.pre_clinch_demand;
      const Vector expected = brute_force_clinch(r.scenario.f, x_before, d, common_grid(r.scenario.f, x_before, d));
      if (expected != clinch_amounts(r.scenario.f, x_before, d)) {
        v.fail(describe_scenario(r.scenario) + " iteration " + std::to_string(cp.iteration));
      }
      ++states;
    }
  }
  // Random grid-aligned states.
  std::mt19937_64 rng(7);
  int random_states = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 4;
    const auto f = trial % 2 == 0 ? oracle::random_table(n, rng) : SubmodularFunction::multi_unit(n, Rational(3, 2));
    Vector x = oracle::random_feasible_point(f, rng);
    for (int i = 0; i < n; ++i) x(i) = floor_rational(x(i) * 4) / 4;
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = oracle::random_rational(rng, 8, 4);
    if (brute_force_clinch(f, x, d, Rational(1, 4)) != clinch_amounts(f, x, d)) {
      v.fail("random state " + format_vector(x) + " / " + format_vector(d));
    }
    ++random_states;
  }
  if (random_states < kMinOracleStates) v.fail("only " + std::to_string(random_states) + " random states");
  if (v.pass) {
    v.detail = std::to_string(random_states) + " random and " + std::to_string(states) + " auction states agree";
  }
  report(7, "clinch_oracle_agreement", v, seconds_since(t));
}

void criterion8(const std::vector<PopulationRun>& runs) {
  const auto t = Clock::now();
  Verdict v;
  std::mt19937_64 rng(8);

  int aux = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const int n = 2 + trial % 4;
    const auto f = trial % 2 == 0 ? oracle::random_table(n, rng) : SubmodularFunction::multi_unit(n, Rational(2));
    Vector psi(n);
    for (int i = 0; i < n; ++i) psi(i) = oracle::random_rational(rng, 12, 4) + Rational(1, 4);
    const int i = trial % n;
    Vector lowered = psi;
    lowered(i) = psi(i) * oracle::random_rational(rng, 3, 4);
    for (Subset s = 0; s <= f.ground_set(); ++s) {
      if (!contains(s, i)) continue;
      const Rational rhs = std::min(capped_eval(f, psi, s), Rational(capped_eval(f, psi, s & ~singleton(i)) + lowered(i)));
      if (capped_eval(f, lowered, s) != rhs || oracle::capped(f, lowered, s) != rhs) v.fail("auxiliary identity");
    }
    ++aux;
  }

  int decomposition = 0;
  for (const auto& r : runs) {
    if (!r.error.empty() || decomposition >= 400) continue;
    const auto& f = r.scenario.f;
    for (const auto& cp : r.result.trace.checkpoints) {
      const Vector& x = cp.state->allocation;
      const Vector& d = cp.state->demand;
      const int k = cp.price_agent;
      Vector psi = x + d;
      psi(k) = x(k);
      const auto [unsat, sat] = saturation_partition(f, x, d, k);
      for (Subset big = 0; big <= f.ground_set(); ++big) {
        if (!is_subset(sat, big)) continue;
        if (oracle::capped(f, psi, big) != f.eval(sat) + subset_sum(psi, big & unsat)) {
          v.fail(describe_scenario(r.scenario) + ": decomposition at iteration " + std::to_string(cp.iteration));
        }
      }
      ++decomposition;
    }
  }

  int uncrossing = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const int n = 2 + trial % 5;
    const auto f = trial % 2 == 0 ? oracle::random_table(n, rng) : SubmodularFunction::multi_unit(n, Rational(5, 2));
    const Vector x = oracle::random_feasible_point(f, rng);
    const auto tight = tight_sets(f, x);
    for (Subset a : tight) {
      for (Subset b : tight) {
        if (subset_sum(x, a & b) != f.eval(a & b) || subset_sum(x, a | b) != f.eval(a | b)) v.fail("uncrossing");
      }
    }
    ++uncrossing;
  }

  int shift = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<Rational> ctrs;
    for (int i = 0; i < n; ++i) ctrs.emplace_back(n - i, 2);
    const auto f = trial % 3 == 0   ? oracle::random_table(n, rng)
                   : trial % 3 == 1 ? SubmodularFunction::sponsored_search(ctrs)
                                    : SubmodularFunction::multi_unit(n, Rational(3, 2));
    const Vector x = oracle::random_feasible_point(f, rng) / 2;
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = oracle::random_rational(rng, 10, 4);
    const Vector psi = x + d;
    if (oracle::remnant_lp_max(f, x, d) != capped_eval(f, psi, f.ground_set()) - x.sum()) v.fail("shift identity");
    ++shift;
  }

  if (aux < kMinAlgebraStates || decomposition < kMinAlgebraStates || uncrossing < kMinAlgebraStates) {
    v.fail("too few states");
  }
  if (v.pass) {
    v.detail = "auxiliary " + std::to_string(aux) + ", decomposition " + std::to_string(decomposition) + ", uncrossing " +
               std::to_string(uncrossing) + ", shift-vs-LP " + std::to_string(shift);
  }
  report(8, "capped_function_algebra", v, seconds_since(t));
}

void criterion9() {
  const auto t = Clock::now();
  Verdict v;
  const Rational eps[] = {Rational(1), Rational(1, 2), Rational(1, 4), Rational(1, 8)};
  Rational alloc_total[4], pay_total[4];
  int per_scenario_increases = 0;
  for (int k = 0; k < kGapScenarios; ++k) {
    GeneratorParams p;
    p.n = 2 + k % 4;
    p.kind = EnvironmentKind::MultiUnit;
    p.mix = ConstraintMix::AverageOnly;
    p.epsilon = Rational(1);  // integer values and budgets stay on every finer grid
    p.v_max = kValueMax;
    const Scenario base = generate(50'000 + static_cast<std::uint64_t>(k), p);
    bool increased = false;
    for (int e = 0; e < 4; ++e) {
      Scenario s = base;
      s.epsilon = eps[e];
      const auto gap = vcg_gap(s);
      alloc_total[e] += gap.allocation;
      pay_total[e] += gap.payment;
      if (e > 0) {
        Scenario prev = base;
        prev.epsilon = eps[e - 1];
        const auto before = vcg_gap(prev);
        increased |= gap.allocation > before.allocation || gap.payment > before.payment;
      }
    }
    per_scenario_increases += increased ? 1 : 0;
  }
  std::ostringstream detail;
  detail << "mean gap (alloc, pay) over " << kGapScenarios << ":";
  for (int e = 0; e < 4; ++e) {
    detail << " eps=" << to_string(eps[e]) << " (" << to_string(alloc_total[e] / kGapScenarios) << ", "
           << to_string(pay_total[e] / kGapScenarios) << ")";
    if (e > 0 && (alloc_total[e] > alloc_total[e - 1] || pay_total[e] > pay_total[e - 1])) v.pass = false;
  }
  detail << "; scenarios with a local increase: " << per_scenario_increases;
  v.detail = detail.str();
  report(9, "vcg_proximity_gap", v, seconds_since(t));
}

void criterion10(const std::vector<PopulationRun>& runs) {
  const auto t = Clock::now();
  Verdict v;
  int compared = 0;
  for (std::size_t k = 0; k < runs.size() && compared < kDeterminismScenarios; k += runs.size() / kDeterminismScenarios) {
    const auto& r = runs[k];
    if (!r.error.empty()) continue;
    auto render = [](const Scenario& s) {
      const auto result = run(s, {true, TraceMode::Full, ClinchRule::Auto});
      const auto rep = verify(s, result, {true, false, s.size() <= kMaxBruteForceAgents});
      return run_report(s, result, rep, {TraceMode::Full, std::nullopt}).dump(2);
    };
    const std::string first = render(r.scenario);
    const Scenario reparsed = parse_scenario(emit_scenario(r.scenario));
    if (render(reparsed) != first) v.fail(describe_scenario(r.scenario) + ": report differs after reparse");
    if (render(r.scenario) != first) v.fail(describe_scenario(r.scenario) + ": report differs on rerun");
    ++compared;
  }
  GeneratorParams p;
  p.n = 4;
  p.kind = EnvironmentKind::ExplicitTable;
  p.shuffle_order = true;
  if (emit_scenario(generate(123, p)) != emit_scenario(generate(123, p))) v.fail("generator not reproducible");
  if (v.pass) v.detail = std::to_string(compared) + " scenarios produce byte-identical reports on rerun";
  report(10, "determinism", v, seconds_since(t));
}

}  // namespace

int main() {
  try {
    criterion1();
    const auto population = pareto_population();
    const auto runs = criterion2(population);
    criterion3(runs);
    criterion4(runs);
    criterion5(runs);
    criterion6(runs);
    criterion7(runs);
    criterion8(runs);
    criterion9();
    criterion10(runs);
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
