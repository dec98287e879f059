#pragma once

#include "clinch/clinching_auction.hpp"
#include "clinch/verification.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace clinch {

inline constexpr std::string_view kToolName = "clinch";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Rationals are written as "p/q" strings (integers as "p"); readers also accept JSON integers.
nlohmann::json rational_to_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json vector_to_json(const Vector& v);

/**
 * Parses a scenario document. Throws ParseError naming the offending field
 * (or the byte offset for malformed JSON) and std::invalid_argument when the
 * parsed scenario fails validation.
 */
Scenario parse_scenario(std::string_view document);
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);
/// Canonical text form (two-space indented JSON, trailing newline).
std::string emit_scenario(const Scenario& scenario);

/// FNV-1a 64-bit hash of the canonical scenario text, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

enum class EnvironmentKind { MultiUnit, SponsoredSearch, ExplicitTable };
enum class ConstraintMix { Mixed, HardOnly, AverageOnly, TwoPiece };

EnvironmentKind parse_environment_kind(std::string_view text);
ConstraintMix parse_constraint_mix(std::string_view text);

struct GeneratorParams {
  int n = 3;
  EnvironmentKind kind = EnvironmentKind::MultiUnit;
  Rational v_max{6};
  Rational epsilon{1, 2};
  ConstraintMix mix = ConstraintMix::Mixed;
  bool shuffle_order = false;
};

/**
 * Deterministic random scenario. Values and finite average budgets are
 * drawn on the epsilon grid; explicit tables are sums of weighted uniform
 * matroid ranks restricted to random supports, validated after
 * construction.
 */
Scenario generate(std::uint64_t seed, const GeneratorParams& params);

struct ReportOptions {
  TraceMode trace = TraceMode::Summary;
  std::optional<double> elapsed_ms;  // emitted only when set, keeps reports reproducible otherwise
};

nlohmann::json run_report(const Scenario& scenario, const AuctionResult& result, const VerificationReport& verification,
                          const ReportOptions& options);

nlohmann::json verification_to_json(const VerificationReport& report);

}  // namespace clinch
