#include "clinch/cli_io.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

namespace clinch {

using nlohmann::json;

json rational_to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j, const std::string& field) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(field + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw ParseError(field + ": expected an exact rational string or an integer");
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(rational_to_json(v(i)));
  return out;
}

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(path + ": missing field \"" + key + "\"");
  return obj.at(key);
}

int require_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ParseError(field + ": expected an integer");
  return j.get<int>();
}

SubmodularFunction environment_from_json(const json& env) {
  const std::string path = "environment";
  const json& kind_json = require(env, "kind", path);
  if (!kind_json.is_string()) throw ParseError("environment.kind: expected a string");
  const auto kind = parse_environment_kind(kind_json.get<std::string>());
  switch (kind) {
    case EnvironmentKind::MultiUnit: {
      const int n = require_int(require(env, "n", path), "environment.n");
      return SubmodularFunction::multi_unit(n, rational_from_json(require(env, "supply", path), "environment.supply"));
    }
    case EnvironmentKind::SponsoredSearch: {
      const json& ctrs = require(env, "ctrs", path);
      if (!ctrs.is_array()) throw ParseError("environment.ctrs: expected an array");
      std::vector<Rational> values;
      for (std::size_t k = 0; k < ctrs.size(); ++k) {
        values.push_back(rational_from_json(ctrs[k], "environment.ctrs[" + std::to_string(k) + "]"));
      }
      return SubmodularFunction::sponsored_search(std::move(values));
    }
    case EnvironmentKind::ExplicitTable: {
      const int n = require_int(require(env, "n", path), "environment.n");
      const json& values = require(env, "values", path);
      if (!values.is_object()) throw ParseError("environment.values: expected an object keyed by subset bitmask");
      std::vector<std::pair<Subset, Rational>> entries;
      for (const auto& [key, value] : values.items()) {
        const std::string field = "environment.values[" + key + "]";
        Subset mask = 0;
        try {
          std::size_t used = 0;
          const unsigned long parsed = std::stoul(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
          mask = static_cast<Subset>(parsed);
        } catch (const std::exception&) {
          throw ParseError(field + ": key is not a subset bitmask");
        }
        entries.emplace_back(mask, rational_from_json(value, field));
      }
      return SubmodularFunction::explicit_table(n, entries);
    }
  }
  throw ParseError("environment.kind: unknown");
}

json environment_to_json(const SubmodularFunction& f) {
  return std::visit(
      [&](const auto& form) -> json {
        using T = std::decay_t<decltype(form)>;
        json out;
        if constexpr (std::is_same_v<T, SubmodularFunction::MultiUnit>) {
          out["kind"] = "multi_unit";
          out["n"] = f.size();
          out["supply"] = rational_to_json(form.supply);
        } else if constexpr (std::is_same_v<T, SubmodularFunction::SponsoredSearch>) {
          out["kind"] = "sponsored_search";
          out["ctrs"] = json::array();
          for (const auto& c : form.ctrs) out["ctrs"].push_back(rational_to_json(c));
        } else {
          out["kind"] = "explicit_table";
          out["n"] = f.size();
          json values = json::object();
          for (std::size_t mask = 0; mask < form.values.size(); ++mask) {
            if (form.values[mask]) values[std::to_string(mask)] = rational_to_json(*form.values[mask]);
          }
          out["values"] = std::move(values);
        }
        return out;
      },
      f.form());
}

}  // namespace

EnvironmentKind parse_environment_kind(std::string_view text) {
  if (text == "multi_unit") return EnvironmentKind::MultiUnit;
  if (text == "sponsored_search") return EnvironmentKind::SponsoredSearch;
  if (text == "explicit_table") return EnvironmentKind::ExplicitTable;
  throw ParseError("unknown environment kind \"" + std::string(text) + "\"");
}

ConstraintMix parse_constraint_mix(std::string_view text) {
  if (text == "mixed") return ConstraintMix::Mixed;
  if (text == "hard_only") return ConstraintMix::HardOnly;
  if (text == "average_only") return ConstraintMix::AverageOnly;
  if (text == "two_piece") return ConstraintMix::TwoPiece;
  throw ParseError("unknown constraint mix \"" + std::string(text) + "\"");
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("scenario: expected a JSON object");
  SubmodularFunction f = environment_from_json(require(doc, "environment", "scenario"));

  const json& agents_json = require(doc, "agents", "scenario");
  if (!agents_json.is_array()) throw ParseError("agents: expected an array");
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < agents_json.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const json& a = agents_json[i];
    Rational value = rational_from_json(require(a, "value", path), path + ".value");
    const json& pieces_json = require(a, "ability_to_pay", path);
    if (!pieces_json.is_array()) throw ParseError(path + ".ability_to_pay: expected an array of [intercept, slope]");
    std::vector<Piece> pieces;
    for (std::size_t j = 0; j < pieces_json.size(); ++j) {
      const std::string pp = path + ".ability_to_pay[" + std::to_string(j) + "]";
      const json& p = pieces_json[j];
      if (!p.is_array() || p.size() != 2) throw ParseError(pp + ": expected [intercept, slope]");
      pieces.push_back({rational_from_json(p[0], pp + "[0]"), rational_from_json(p[1], pp + "[1]")});
    }
    try {
      agents.push_back({std::move(value), AbilityToPay(std::move(pieces))});
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ": " + e.what());
    }
  }

  Scenario s{std::move(f), std::move(agents), rational_from_json(require(doc, "epsilon", "scenario"), "epsilon"), {}, {}};
  if (doc.contains("price_order")) {
    const json& order = doc.at("price_order");
    if (!order.is_array()) throw ParseError("price_order: expected an array");
    for (std::size_t k = 0; k < order.size(); ++k) {
      s.price_order.push_back(require_int(order[k], "price_order[" + std::to_string(k) + "]"));
    }
  }
  if (doc.contains("seed")) {
    const json& seed = doc.at("seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw ParseError("seed: expected an integer");
    s.seed = seed.get<std::uint64_t>();
  }
  validate_scenario(s);
  return s;
}

Scenario parse_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

json scenario_to_json(const Scenario& s) {
  json out;
  out["environment"] = environment_to_json(s.f);
  out["agents"] = json::array();
  for (const auto& a : s.agents) {
    json pieces = json::array();
    for (const auto& p : a.alpha.pieces()) pieces.push_back({rational_to_json(p.intercept), rational_to_json(p.slope)});
    out["agents"].push_back({{"value", rational_to_json(a.value)}, {"ability_to_pay", std::move(pieces)}});
  }
  out["epsilon"] = rational_to_json(s.epsilon);
  if (!s.price_order.empty()) out["price_order"] = s.price_order;
  if (s.seed) out["seed"] = *s.seed;
  return out;
}

std::string emit_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : emit_scenario(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Generator

namespace {

// Uniform integer in [lo, hi] by rejection; independent of the standard
// library's distribution implementations so output is portable.
std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r = 0;
  do {
    r = rng();
  } while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

SubmodularFunction random_environment(std::mt19937_64& rng, const GeneratorParams& p) {
  const int n = p.n;
  switch (p.kind) {
    case EnvironmentKind::MultiUnit:
      return SubmodularFunction::multi_unit(n, Rational(draw(rng, 1, 6), 2));
    case EnvironmentKind::SponsoredSearch: {
      std::vector<Rational> ctrs;
      for (int i = 0; i < n; ++i) ctrs.emplace_back(draw(rng, 1, 8), 2);
      std::sort(ctrs.begin(), ctrs.end(), std::greater<>());
      return SubmodularFunction::sponsored_search(std::move(ctrs));
    }
    case EnvironmentKind::ExplicitTable: {
      if (n > 8) throw UnsupportedSize("generated explicit tables support at most 8 agents");
      // f(S) = sum_t w_t * min(k_t, |S & A_t|): weighted uniform-matroid ranks.
      struct Term {
        Subset support;
        int rank;
        Rational weight;
      };
      std::vector<Term> terms;
      const int count = static_cast<int>(draw(rng, 1, 3));
      for (int t = 0; t < count; ++t) {
        Subset support = 0;
        while (support == 0) support = static_cast<Subset>(draw(rng, 1, full_set(n)));
        terms.push_back({support, static_cast<int>(draw(rng, 1, cardinality(support))), Rational(draw(rng, 1, 4), 2)});
      }
      // Every agent gets some positive marginal.
      for (int i = 0; i < n; ++i) {
        const bool covered = std::any_of(terms.begin(), terms.end(), [i](const Term& t) { return contains(t.support, i); });
        if (!covered) terms.push_back({singleton(i), 1, Rational(draw(rng, 1, 4), 2)});
      }
      std::vector<std::optional<Rational>> table(std::size_t{1} << n);
      for (Subset s = 0; s <= full_set(n); ++s) {
        Rational v(0);
        for (const auto& t : terms) v += t.weight * std::min(t.rank, cardinality(s & t.support));
        table[s] = v;
      }
      auto f = SubmodularFunction::explicit_table(n, std::move(table));
      if (!validate(f).empty()) throw Error("generated table failed validation");
      return f;
    }
  }
  throw Error("unknown environment kind");
}

AbilityToPay random_constraint(std::mt19937_64& rng, const GeneratorParams& p, const Rational& scale) {
  const std::int64_t grid_steps = (p.v_max / p.epsilon).convert_to<std::int64_t>();
  auto grid_beta = [&] { return p.epsilon * draw(rng, 1, std::max<std::int64_t>(grid_steps, 1)); };
  // Hard budgets need not sit on the grid.
  auto budget = [&] { return Rational(draw(rng, 1, std::max<std::int64_t>(1, (scale * 4).convert_to<std::int64_t>())), 4); };

  ConstraintMix mix = p.mix;
  int shape = 0;  // 0 hard, 1 average, 2 two-piece, 3 three-piece
  switch (mix) {
    case ConstraintMix::HardOnly:
      shape = 0;
      break;
    case ConstraintMix::AverageOnly:
      shape = 1;
      break;
    case ConstraintMix::TwoPiece:
      shape = 2;
      break;
    case ConstraintMix::Mixed:
      shape = static_cast<int>(draw(rng, 0, 3));
      break;
  }
  switch (shape) {
    case 0:
      return AbilityToPay::hard_budget(budget());
    case 1:
      return AbilityToPay::average_budget(grid_beta());
    case 2:
      return AbilityToPay::combined(grid_beta(), budget());
    default: {
      const Rational b = grid_beta();
      const Rational mid_slope = b * Rational(draw(rng, 1, 3), 4);
      return AbilityToPay({{Rational(0), b}, {Rational(draw(rng, 1, 8), 4), mid_slope}, {budget(), Rational(0)}});
    }
  }
}

}  // namespace

Scenario generate(std::uint64_t seed, const GeneratorParams& p) {
  if (p.n < 1) throw std::invalid_argument("generator needs n >= 1");
  if (p.epsilon <= 0 || p.v_max < p.epsilon) throw std::invalid_argument("generator needs 0 < epsilon <= v_max");
  if (!is_multiple_of(p.v_max, p.epsilon)) throw std::invalid_argument("v_max must be a multiple of epsilon");
  std::mt19937_64 rng(seed);
  SubmodularFunction f = random_environment(rng, p);
  const Rational scale = p.v_max * f.total() / 2;
  const std::int64_t grid_steps = (p.v_max / p.epsilon).convert_to<std::int64_t>();

  std::vector<Agent> agents;
  for (int i = 0; i < p.n; ++i) {
    Rational value = p.epsilon * draw(rng, 1, grid_steps);
    agents.push_back({std::move(value), random_constraint(rng, p, scale)});
  }
  Scenario s{std::move(f), std::move(agents), p.epsilon, {}, seed};
  if (p.shuffle_order) {
    s.price_order = s.effective_order();
    for (std::size_t k = s.price_order.size(); k > 1; --k) {
      std::swap(s.price_order[k - 1], s.price_order[static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(k) - 1))]);
    }
  }
  validate_scenario(s);
  return s;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json subset_to_json(Subset s) { return members(s); }

json invariants_to_json(const InvariantReport& r) {
  return {{"maximality", r.maximality},
          {"all_goods_sold", r.all_goods_sold},
          {"self_unsaturation", r.self_unsaturated},
          {"witnesses", r.witnesses}};
}

}  // namespace

json verification_to_json(const VerificationReport& report) {
  json out;
  out["passed"] = report.passed();
  out["checks"] = json::array();
  for (const auto& c : report.checks) {
    json entry{{"name", c.name}, {"status", to_string(c.status)}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    out["checks"].push_back(std::move(entry));
  }
  if (report.pareto) {
    json p{{"efficient", report.pareto->efficient},
           {"welfare", rational_to_json(report.pareto->welfare)},
           {"lp_optimum", rational_to_json(report.pareto->lp_optimum)}};
    if (report.pareto->improvement) {
      const auto& imp = *report.pareto->improvement;
      p["improvement"] = {{"allocation", vector_to_json(imp.allocation)},
                          {"payment", vector_to_json(imp.payment)},
                          {"welfare_gain", rational_to_json(imp.welfare_gain)}};
    }
    out["pareto"] = std::move(p);
  }
  if (!report.ic.empty()) {
    json ic = json::array();
    for (std::size_t i = 0; i < report.ic.size(); ++i) {
      const auto& r = report.ic[i];
      json entry{{"agent", i}, {"pass", r.pass}, {"reruns", r.reruns}};
      if (r.witness) {
        entry["witness"] = {{"misreport", rational_to_json(r.witness->misreport)},
                            {"gain", rational_to_json(r.witness->gain)},
                            {"monotonicity", r.witness->monotonicity}};
      }
      ic.push_back(std::move(entry));
    }
    out["incentive_compatibility"] = std::move(ic);
  }
  out["epsilon_grid"] = {{"compliant", report.values_on_grid}, {"note", report.grid_note}};
  return out;
}

json run_report(const Scenario& scenario, const AuctionResult& result, const VerificationReport& verification,
                const ReportOptions& options) {
  const int n = scenario.size();
  const auto& tr = result.trace;
  json out;
  out["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  out["scenario_hash"] = scenario_hash(scenario);
  out["scenario"] = scenario_to_json(scenario);
  out["trace_mode"] = options.trace == TraceMode::Full ? "full" : "summary";
  out["price_order"] = tr.price_order;
  out["iterations"] = tr.iterations;
  out["outcome"] = {{"allocation", vector_to_json(result.outcome.allocation)},
                    {"payment", vector_to_json(result.outcome.payment)}};

  out["agents"] = json::array();
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    json a{{"index", i}, {"dropping_reasons", drop_reason_names(tr.dropping_reasons[idx])},
           {"dropping_iteration", tr.dropping_iterations[idx]}};
    a["dropping_price"] = tr.dropping_prices[idx] ? rational_to_json(*tr.dropping_prices[idx]) : json(nullptr);
    const auto b = beta(scenario.agents[idx].alpha);
    a["beta"] = b ? rational_to_json(*b) : json("inf");
    out["agents"].push_back(std::move(a));
  }

  out["tight_family"] = json::array();
  for (const auto& block : tight_family(tr, n)) {
    json b{{"set", subset_to_json(block.set)}, {"block", subset_to_json(block.block)}, {"iteration", block.iteration},
           {"pivots", block.pivots}};
    b["pivot_price"] = block.pivot_price ? rational_to_json(*block.pivot_price) : json(nullptr);
    out["tight_family"].push_back(std::move(b));
  }

  out["checkpoints"] = json::array();
  for (const auto& cp : tr.checkpoints) {
    json c{{"iteration", cp.iteration}, {"price_agent", cp.price_agent}, {"positive_demand", subset_to_json(cp.positive_demand)}};
    c["invariants"] = cp.invariants ? invariants_to_json(*cp.invariants) : json(nullptr);
    if (options.trace == TraceMode::Full && cp.state) {
      c["state"] = {{"allocation", vector_to_json(cp.state->allocation)},
                    {"payment", vector_to_json(cp.state->payment)},
                    {"price", vector_to_json(cp.state->price)},
                    {"demand", vector_to_json(cp.state->demand)}};
      if (cp.pre_clinch_demand) c["pre_clinch_demand"] = vector_to_json(*cp.pre_clinch_demand);
      if (cp.clinched) c["clinched"] = vector_to_json(*cp.clinched);
      if (cp.unsaturated) c["unsaturated"] = subset_to_json(*cp.unsaturated);
    }
    out["checkpoints"].push_back(std::move(c));
  }
  if (options.trace == TraceMode::Full) {
    out["clinch_events"] = json::array();
    for (const auto& e : tr.clinch_events) {
      out["clinch_events"].push_back({{"iteration", e.iteration},
                                      {"agent", e.agent},
                                      {"amount", rational_to_json(e.amount)},
                                      {"price", rational_to_json(e.price)}});
    }
  }
  out["verification"] = verification_to_json(verification);
  if (options.elapsed_ms) out["timing"] = {{"elapsed_ms", *options.elapsed_ms}};
  return out;
}

}  // namespace clinch
