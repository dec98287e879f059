#include "clinch/cli_io.hpp"
#include "clinch/verification.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace clinch;

namespace {

Rational q(long p, long r = 1) { return Rational(p, r); }

std::vector<Agent> example_agents() {
  return {{q(10), AbilityToPay::average_budget(q(1))}, {q(2), AbilityToPay::average_budget(q(2))}};
}

SubmodularFunction example_env() { return SubmodularFunction::sponsored_search({q(2), q(1)}); }

Scenario two_agent_multi_unit() {
  return {SubmodularFunction::multi_unit(2, q(1)),
          {{q(3), AbilityToPay::average_budget(q(100))}, {q(2), AbilityToPay::average_budget(q(100))}},
          q(1),
          {},
          {}};
}

/// Utility v x - pi for admissible outcomes.
Rational utility(const Agent& a, const Rational& x, const Rational& pi) { return a.value * x - pi; }

const CheckResult* find(const std::vector<CheckResult>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST(Vcg, TwoSlotOutcome) {
  const auto out = vcg_baseline(example_env(), example_agents());
  EXPECT_EQ(out.allocation, from_list({q(1), q(2)}));
  EXPECT_EQ(out.payment, from_list({q(0), q(1)}));
}

TEST(Vcg, MultiUnitWinnerPaysSecondValue) {
  const auto f = SubmodularFunction::multi_unit(3, q(5, 2));
  const std::vector<Agent> agents{{q(4), AbilityToPay::average_budget(q(3))},
                                  {q(9), AbilityToPay::hard_budget(q(1))},
                                  {q(2), AbilityToPay::average_budget(q(6))}};
  // Effective values 3, 9, 2.
  const auto out = vcg_baseline(f, agents);
  EXPECT_EQ(out.allocation, from_list({q(0), q(5, 2), q(0)}));
  EXPECT_EQ(out.payment, from_list({q(0), q(15, 2), q(0)}));
}

TEST(Vcg, SingleAgentAndTies) {
  const auto one = vcg_baseline(SubmodularFunction::multi_unit(1, q(2)), std::vector<Agent>{{q(3), AbilityToPay::hard_budget(q(1))}});
  EXPECT_EQ(one.allocation, from_list({q(2)}));
  EXPECT_EQ(one.payment, from_list({q(0)}));

  const std::vector<Agent> tied{{q(2), AbilityToPay::average_budget(q(5))}, {q(5), AbilityToPay::average_budget(q(2))}};
  const auto out = vcg_baseline(SubmodularFunction::multi_unit(2, q(1)), tied);
  EXPECT_EQ(out.allocation, from_list({q(1), q(0)}));
  EXPECT_EQ(out.payment, from_list({q(2), q(0)}));
}

TEST(Pareto, TwoSlotVcgIsRefuted) {
  const auto agents = example_agents();
  const Outcome vcg{from_list({q(1), q(2)}), from_list({q(0), q(1)})};
  const auto res = pareto_check(example_env(), agents, vcg);
  EXPECT_FALSE(res.efficient);
  EXPECT_EQ(res.welfare, 14);
  EXPECT_EQ(res.lp_optimum, 18);
  ASSERT_TRUE(res.improvement.has_value());
  const auto& imp = *res.improvement;
  EXPECT_EQ(imp.welfare_gain, 4);
  EXPECT_TRUE(oracle::feasible(example_env(), imp.allocation));
  Rational revenue = 0;
  for (int i = 0; i < 2; ++i) {
    EXPECT_TRUE(is_admissible(agents[i].alpha, imp.allocation(i), imp.payment(i)));
    EXPECT_GE(utility(agents[i], imp.allocation(i), imp.payment(i)), utility(agents[i], vcg.allocation(i), vcg.payment(i)));
    revenue += imp.payment(i);
  }
  EXPECT_GE(revenue, vcg.payment.sum());
}

TEST(Pareto, HandImprovementIsValid) {
  // x' = (3/2, 3/2), pi' = (1, 0) reaches the optimum 18.
  const auto agents = example_agents();
  const Vector x = from_list({q(3, 2), q(3, 2)}), pi = from_list({q(1), q(0)});
  EXPECT_TRUE(oracle::feasible(example_env(), x));
  EXPECT_TRUE(is_admissible(agents[0].alpha, x(0), pi(0)));
  EXPECT_EQ(agents[0].value * x(0) + agents[1].value * x(1), 18);
  EXPECT_EQ(utility(agents[1], x(1), pi(1)), 3);
}

TEST(Pareto, SingleAgentFullAllocationPasses) {
  const std::vector<Agent> agents{{q(1), AbilityToPay::average_budget(q(1))}};
  const auto res = pareto_check(SubmodularFunction::multi_unit(1, q(1)), agents, {from_list({q(1)}), from_list({q(0)})});
  EXPECT_TRUE(res.efficient);
  EXPECT_EQ(res.lp_optimum, 1);
}

TEST(Pareto, RejectsBadOutcomes) {
  const auto agents = example_agents();
  EXPECT_THROW(pareto_check(example_env(), agents, {from_list({q(3), q(0)}), zeros(2)}), PreconditionViolation);
  EXPECT_THROW(pareto_check(example_env(), agents, {from_list({q(1), q(0)}), from_list({q(2), q(0)})}),
               PreconditionViolation);
}

TEST(Pareto, ClinchingOutcomesAreEfficient) {
  const Rational eps[] = {q(1), q(1, 2), q(1, 4)};
  for (int k = 0; k < 90; ++k) {
    GeneratorParams p;
    p.n = 1 + k % 5;
    p.kind = static_cast<EnvironmentKind>(k % 3);
    p.epsilon = eps[(k / 3) % 3];
    const auto s = generate(2000 + static_cast<std::uint64_t>(k), p);
    const auto r = run(s, {false, TraceMode::Summary, ClinchRule::Auto});
    const auto res = pareto_check(s.f, s.agents, r.outcome);
    ASSERT_TRUE(res.efficient) << emit_scenario(s);
    ASSERT_EQ(res.lp_optimum, res.welfare);
  }
}

TEST(BasicChecks, Cases) {
  const auto s = two_agent_multi_unit();
  const auto good = basic_checks(s.f, s.agents, {from_list({q(1), q(0)}), from_list({q(2), q(0)})}, true);
  for (const auto& c : good) EXPECT_EQ(c.status, Status::Pass) << c.name;

  const auto overpay = basic_checks(s.f, s.agents, {from_list({q(1), q(0)}), from_list({q(4), q(0)})}, true);
  ASSERT_NE(find(overpay, "individually_rational"), nullptr);
  EXPECT_EQ(find(overpay, "individually_rational")->status, Status::Fail);
  EXPECT_NE(find(overpay, "individually_rational")->detail.find("agent 0"), std::string::npos);

  const auto empty = basic_checks(s.f, s.agents, {zeros(2), zeros(2)}, true);
  EXPECT_EQ(find(empty, "all_goods_sold")->status, Status::Fail);
  EXPECT_EQ(find(empty, "individually_rational")->status, Status::Pass);
  EXPECT_EQ(find(basic_checks(s.f, s.agents, {zeros(2), zeros(2)}, false), "all_goods_sold"), nullptr);
}

TEST(Ic, TwoAgentScenarioPasses) {
  const auto s = two_agent_multi_unit();
  for (int i = 0; i < 2; ++i) {
    const auto r = ic_grid_check(s, i);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.reruns, misreport_grid(s).size() + 1);
  }
  EXPECT_EQ(misreport_grid(s).size(), 5u);
}

TEST(Ic, RandomCompliantScenariosPass) {
  for (int k = 0; k < 20; ++k) {
    GeneratorParams p;
    p.n = 2 + k % 3;
    p.kind = static_cast<EnvironmentKind>(k % 3);
    p.epsilon = q(1, 2);
    const auto s = generate(3000 + static_cast<std::uint64_t>(k), p);
    for (int i = 0; i < s.size(); ++i) ASSERT_TRUE(ic_grid_check(s, i).pass) << emit_scenario(s);
  }
}

TEST(BruteForce, Examples) {
  const auto mu = SubmodularFunction::multi_unit(2, q(1));
  EXPECT_EQ(brute_force_clinch(mu, zeros(2), from_list({q(1), q(0)}), q(1, 4)), from_list({q(1), q(0)}));
  EXPECT_EQ(brute_force_clinch(mu, zeros(2), zeros(2), q(1, 4)), zeros(2));

  const auto ss = example_env();
  const Vector d = from_list({q(2), q(1)});
  const Vector oracle_delta = brute_force_clinch(ss, zeros(2), d, q(1, 4));
  EXPECT_EQ(oracle_delta, clinch_amounts(ss, zeros(2), d));
  EXPECT_EQ(oracle_delta, from_list({q(2), q(1)}));
}

TEST(BruteForce, Guards) {
  const auto mu = SubmodularFunction::multi_unit(2, q(1));
  EXPECT_THROW(brute_force_clinch(mu, zeros(2), from_list({q(1, 3), q(0)}), q(1, 4)), Unsupported);
  EXPECT_THROW(brute_force_clinch(SubmodularFunction::multi_unit(6, q(1)), zeros(6), zeros(6), q(1)), UnsupportedSize);
  EXPECT_EQ(common_grid(mu, from_list({q(1, 3), q(0)}), from_list({q(1, 4), q(1, 2)})), q(1, 12));
}

TEST(BruteForce, AgreesWithClinchAmountsOnRandomStates) {
  std::mt19937_64 rng(47);
  int states = 0;
  for (int trial = 0; trial < 220; ++trial) {
    const int n = 2 + trial % 4;
    const auto f = trial % 2 == 0 ? oracle::random_table(n, rng) : SubmodularFunction::multi_unit(n, q(3, 2));
    Vector x = oracle::random_feasible_point(f, rng);
    for (int i = 0; i < n; ++i) x(i) = floor_rational(x(i) * 4) / 4;
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = oracle::random_rational(rng, 8, 4);
    const Rational grid = common_grid(f, x, d);
    ASSERT_EQ(brute_force_clinch(f, x, d, grid), clinch_amounts(f, x, d));
    ++states;
  }
  EXPECT_GE(states, 200);
}

TEST(TightFamily, TwoAgentRun) {
  const auto r = run(two_agent_multi_unit());
  const auto family = tight_family(r.trace, 2);
  ASSERT_EQ(family.size(), 2u);
  EXPECT_EQ(family[0].set, 0b11u);
  EXPECT_EQ(family[0].block, 0b10u);
  EXPECT_EQ(family[0].pivots, (std::vector<int>{1}));
  EXPECT_EQ(family[0].pivot_price, std::optional<Rational>(q(2)));
  EXPECT_EQ(family[1].set, 0b01u);
  EXPECT_EQ(family[1].pivot_price, std::optional<Rational>(q(3)));
}

TEST(TightFamily, HardBudgetFullClinch) {
  // Agent 0 spends its whole budget on the unit it clinches, dropping together with agent 1.
  const Scenario s{SubmodularFunction::multi_unit(2, q(1)),
                   {{q(5), AbilityToPay::hard_budget(q(2))}, {q(2), AbilityToPay::average_budget(q(4))}},
                   q(1),
                   {},
                   {}};
  const auto r = run(s);
  EXPECT_EQ(r.outcome.allocation, from_list({q(1), q(0)}));
  EXPECT_EQ(r.outcome.payment, from_list({q(2), q(0)}));
  EXPECT_TRUE(r.trace.dropping_reasons[0] & kClinchedFullDemand);
  const auto family = tight_family(r.trace, 2);
  ASSERT_EQ(family.size(), 1u);
  EXPECT_EQ(family[0].block, 0b11u);
  EXPECT_EQ(family[0].pivots, (std::vector<int>{1}));
  for (const auto& c : check_structure(s, r)) EXPECT_EQ(c.status, Status::Pass) << c.name << ": " << c.detail;
}

TEST(Structure, GeneratedRunsPassAllChecks) {
  const Rational eps[] = {q(1), q(1, 2), q(1, 4)};
  for (int k = 0; k < 120; ++k) {
    GeneratorParams p;
    p.n = 1 + k % 5;
    p.kind = static_cast<EnvironmentKind>(k % 3);
    p.epsilon = eps[(k / 3) % 3];
    p.mix = static_cast<ConstraintMix>((k / 9) % 4);
    const auto s = generate(4000 + static_cast<std::uint64_t>(k), p);
    const auto r = run(s, {true, TraceMode::Full, ClinchRule::Auto});
    for (const auto& c : check_structure(s, r)) ASSERT_EQ(c.status, Status::Pass) << c.name << ": " << c.detail << "\n" << emit_scenario(s);
  }
}

TEST(Structure, OffGridScenarioDowngradesToWarn) {
  // Value 5/2 with epsilon 1: the pivot no longer drops at its value.
  const Scenario s{SubmodularFunction::multi_unit(2, q(1)),
                   {{q(3), AbilityToPay::average_budget(q(100))}, {q(5, 2), AbilityToPay::average_budget(q(100))}},
                   q(1),
                   {},
                   {}};
  const auto r = run(s);
  const auto rep = verify(s, r, {true, false, true});
  EXPECT_FALSE(rep.values_on_grid);
  EXPECT_FALSE(rep.grid_note.empty());
  bool warned = false;
  for (const auto& c : rep.checks) {
    EXPECT_NE(c.status, Status::Fail) << c.name << ": " << c.detail;
    warned |= c.status == Status::Warn;
  }
  EXPECT_TRUE(warned);
  EXPECT_TRUE(rep.passed());
}

TEST(Verify, FullReportOnTwoAgentScenario) {
  const auto s = two_agent_multi_unit();
  const auto rep = verify(s, run(s), {});
  EXPECT_TRUE(rep.passed());
  ASSERT_TRUE(rep.pareto.has_value());
  EXPECT_TRUE(rep.pareto->efficient);
  EXPECT_EQ(rep.ic.size(), 2u);
  EXPECT_NE(find(rep.checks, "clinch_oracle"), nullptr);
}

TEST(Verify, TwoSlotClinchingIsEfficientWhereVcgIsNot) {
  const Scenario s{example_env(), example_agents(), q(1, 4), {}, {}};
  const auto r = run(s);
  EXPECT_TRUE(pareto_check(s.f, s.agents, r.outcome).efficient);
  EXPECT_FALSE(pareto_check(s.f, s.agents, vcg_baseline(s.f, s.agents)).efficient);
}

TEST(VcgGap, ZeroWhenClinchingMatches) {
  const auto gap = vcg_gap(two_agent_multi_unit());
  EXPECT_EQ(gap.allocation, 0);
  EXPECT_EQ(gap.payment, 0);
}
