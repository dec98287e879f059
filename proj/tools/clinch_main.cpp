#include "clinch/cli_io.hpp"
#include "clinch/verification.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace clinch;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

Scenario two_slot_scenario() {
  return {SubmodularFunction::sponsored_search({Rational(2), Rational(1)}),
          {{Rational(10), AbilityToPay::average_budget(Rational(1))}, {Rational(2), AbilityToPay::average_budget(Rational(2))}},
          Rational(1, 4),
          {},
          {}};
}

json outcome_json(const Outcome& o) {
  return {{"allocation", vector_to_json(o.allocation)}, {"payment", vector_to_json(o.payment)}};
}

struct RunArgs {
  std::string scenario;
  bool check_invariants = false;
  std::string trace = "summary";
  std::string rule = "auto";
  std::string out;
  bool timing = false;
};

int cmd_run(const RunArgs& a) {
  const Scenario s = load_scenario(a.scenario);
  RunOptions opts;
  opts.check_invariants = a.check_invariants;
  opts.trace = a.trace == "full" ? TraceMode::Full : TraceMode::Summary;
  opts.rule = a.rule == "polyhedral" ? ClinchRule::Polyhedral : a.rule == "multi_unit" ? ClinchRule::MultiUnit : ClinchRule::Auto;

  const auto start = std::chrono::steady_clock::now();
  AuctionResult result;
  try {
    result = run(s, opts);
  } catch (const InvariantViolation& e) {
    std::cerr << "clinch: " << e.what() << "\n";
    return kExitFail;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  VerificationReport report;
  report.checks = basic_checks(s.f, s.agents, result.outcome, true);
  for (auto& c : check_structure(s, result)) report.checks.push_back(std::move(c));
  report.values_on_grid = off_grid_agents(s).empty();

  ReportOptions ro{opts.trace, std::nullopt};
  if (a.timing) ro.elapsed_ms = ms;
  write_output(a.out, run_report(s, result, report, ro).dump(2) + "\n");
  return report.passed() ? kExitPass : kExitFail;
}

struct VerifyArgs {
  std::string scenario;
  bool pareto = false;
  bool ic = false;
  bool oracle = false;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  const Scenario s = load_scenario(a.scenario);
  const bool all = !a.pareto && !a.ic && !a.oracle;
  const VerifyOptions vo{all || a.pareto, all || a.ic, (all || a.oracle) && s.size() <= kMaxBruteForceAgents};
  const auto result = run(s, {true, vo.oracle ? TraceMode::Full : TraceMode::Summary, ClinchRule::Auto});
  const auto report = verify(s, result, vo);
  json out{{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
           {"scenario_hash", scenario_hash(s)},
           {"outcome", outcome_json(result.outcome)},
           {"verification", verification_to_json(report)}};
  write_output(a.out, out.dump(2) + "\n");
  for (const auto& c : report.checks) {
    if (c.status != Status::Pass) std::cerr << "clinch: " << c.name << " " << to_string(c.status) << ": " << c.detail << "\n";
  }
  return report.passed() ? kExitPass : kExitFail;
}

struct GenerateArgs {
  std::optional<std::uint64_t> seed;
  int n = 3;
  std::string kind = "multi_unit";
  std::string v_max = "6";
  std::string epsilon = "1/2";
  std::string mix = "mixed";
  bool shuffle = false;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  std::uint64_t seed = 0;
  if (a.seed) {
    seed = *a.seed;
  } else if (const char* env = std::getenv("CLINCH_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError("CLINCH_SEED is not an unsigned integer");
    }
  } else {
    throw ParseError("generate needs --seed or CLINCH_SEED");
  }
  GeneratorParams p;
  p.n = a.n;
  p.kind = parse_environment_kind(a.kind);
  p.v_max = parse_rational(a.v_max);
  p.epsilon = parse_rational(a.epsilon);
  p.mix = parse_constraint_mix(a.mix);
  p.shuffle_order = a.shuffle;
  write_output(a.out, emit_scenario(generate(seed, p)));
  return kExitPass;
}

int cmd_example1(const std::string& out_path) {
  const Scenario s = two_slot_scenario();
  const Outcome vcg = vcg_baseline(s.f, s.agents);
  const ParetoResult refutation = pareto_check(s.f, s.agents, vcg);
  const AuctionResult clinching = run(s, {true, TraceMode::Summary, ClinchRule::Auto});
  const ParetoResult clinching_po = pareto_check(s.f, s.agents, clinching.outcome);

  json pareto{{"efficient", refutation.efficient},
              {"welfare", rational_to_json(refutation.welfare)},
              {"lp_optimum", rational_to_json(refutation.lp_optimum)}};
  if (refutation.improvement) {
    pareto["improvement"] = {{"allocation", vector_to_json(refutation.improvement->allocation)},
                             {"payment", vector_to_json(refutation.improvement->payment)},
                             {"welfare_gain", rational_to_json(refutation.improvement->welfare_gain)}};
  }
  json out{{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
           {"scenario", scenario_to_json(s)},
           {"vcg", {{"outcome", outcome_json(vcg)}, {"pareto", pareto}}},
           {"clinching",
            {{"outcome", outcome_json(clinching.outcome)},
             {"pareto", {{"efficient", clinching_po.efficient}, {"welfare", rational_to_json(clinching_po.welfare)}}}}}};
  write_output(out_path, out.dump(2) + "\n");
  const bool expected = !refutation.efficient && refutation.improvement && clinching_po.efficient;
  return expected ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clinching auctions over polymatroids with budget-style payment constraints"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run the auction and write a report");
  run_cmd->add_option("scenario", run_args.scenario, "Scenario file")->required();
  run_cmd->add_flag("--check-invariants", run_args.check_invariants, "Assert the checkpoint invariants");
  run_cmd->add_option("--trace", run_args.trace, "Trace detail")->check(CLI::IsMember({"full", "summary"}));
  run_cmd->add_option("--rule", run_args.rule, "Clinch rule")->check(CLI::IsMember({"auto", "polyhedral", "multi_unit"}));
  run_cmd->add_flag("--timing", run_args.timing, "Include wall-clock time in the report");
  run_cmd->add_option("--out", run_args.out, "Output path (default stdout)");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Run the verification suite on a scenario");
  verify_cmd->add_option("scenario", verify_args.scenario, "Scenario file")->required();
  verify_cmd->add_flag("--pareto", verify_args.pareto, "Pareto-efficiency LP");
  verify_cmd->add_flag("--ic", verify_args.ic, "Misreport sweep on the price grid");
  verify_cmd->add_flag("--oracle", verify_args.oracle, "Brute-force clinch comparison");
  verify_cmd->add_option("--out", verify_args.out, "Output path (default stdout)");

  GenerateArgs gen_args;
  std::uint64_t seed_value = 0;
  auto* gen_cmd = app.add_subcommand("generate", "Emit a random scenario");
  auto* seed_opt = gen_cmd->add_option("--seed", seed_value, "Random seed (falls back to CLINCH_SEED)");
  gen_cmd->add_option("--n", gen_args.n, "Number of agents")->check(CLI::Range(1, kMaxAgents));
  gen_cmd->add_option("--kind", gen_args.kind, "multi_unit | sponsored_search | explicit_table");
  gen_cmd->add_option("--v-max", gen_args.v_max, "Largest value");
  gen_cmd->add_option("--epsilon", gen_args.epsilon, "Price increment");
  gen_cmd->add_option("--mix", gen_args.mix, "mixed | hard_only | average_only | two_piece");
  gen_cmd->add_flag("--shuffle", gen_args.shuffle, "Random round-robin order");
  gen_cmd->add_option("--out", gen_args.out, "Output path (default stdout)");

  std::string example_out;
  auto* ex_cmd = app.add_subcommand("example1", "Two-agent sponsored-search example: VCG refutation and clinching outcome");
  ex_cmd->add_option("--out", example_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*verify_cmd) return cmd_verify(verify_args);
    if (*gen_cmd) {
      if (*seed_opt) gen_args.seed = seed_value;
      return cmd_generate(gen_args);
    }
    if (*ex_cmd) return cmd_example1(example_out);
  } catch (const ParseError& e) {
    std::cerr << "clinch: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "clinch: invalid scenario: " << e.what() << "\n";
    return kExitInput;
  } catch (const Unsupported& e) {
    std::cerr << "clinch: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "clinch: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitInput;
}
