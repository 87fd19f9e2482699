#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bq/estimate.hpp"

namespace bq {

/// A catalogued exact value or interval with its mathematical source.
/// `verified_here` is false for the recorded-but-not-rechecked entries.
struct FixtureRecord {
    std::string space;
    std::string quantity;
    Interval value;
    std::string source;
    bool verified_here = true;
};

/// The complete shipped registry, immutable.
const std::vector<FixtureRecord>& fixtures();

std::optional<Interval> fixture_lookup(const std::string& space, const std::string& quantity);

enum class Flag { Yes, No, Unknown };

/// Structural facts about a catalogued basis, gating rule hypotheses.
struct SpaceFacts {
    std::string family;
    Flag unconditional = Flag::Unknown;
    Flag shrinking = Flag::Unknown;
    Flag boundedly_complete = Flag::Unknown;
    Flag no_l1_copies = Flag::Unknown;
    Flag no_c0_copies = Flag::Unknown;
};

const std::vector<SpaceFacts>& space_facts();
const SpaceFacts* find_space_facts(const std::string& family);

/// coeff * K^a * Ku^b * (K+1)^c * quantity. `quantity` may be empty for a
/// pure constant side.
struct RuleTerm {
    double coeff = 1.0;
    int k_power = 0;
    int ku_power = 0;
    int k_plus_one_power = 0;
    std::string quantity;
};

/// lhs <= rhs, evaluated only in certified directions.
struct InequalityRule {
    std::string name;
    RuleTerm lhs;
    RuleTerm rhs;
    std::vector<std::string> hypotheses; // SpaceFacts flag names
    std::string source;
};

const std::vector<InequalityRule>& rules();

enum class RuleStatus { Verified, Inconclusive, Violated };

std::string to_string(RuleStatus s);

struct CheckResult {
    RuleStatus status = RuleStatus::Inconclusive;
    std::string detail;
    Interval lhs;
    Interval rhs;
    double tolerance = 0.0;
};

using QuantityContext = std::map<std::string, Interval>;

/// Direction-sound comparison: Verified when the certified upper of the
/// left side sits below the certified lower of the right side, Violated
/// only on a certified contradiction (which flags an implementation bug,
/// never a refutation of the underlying theorem), Inconclusive otherwise.
CheckResult evaluate_rule(const InequalityRule& rule, const QuantityContext& context,
                          const SpaceFacts* facts, double tolerance = 1e-9);

/// Internal registry consistency: the two-sided weak-compactness
/// comparison on every co-located pair, the completeness chain wherever
/// all three values exist, and the separability dichotomy. Returns
/// human-readable violation descriptions (empty when healthy).
std::vector<std::string> registry_self_check();

struct SuiteConfig {
    int schema = 1;
    std::uint64_t seed = 0;
    std::vector<std::string> spaces;       // descriptor strings, e.g. "james:8"
    std::vector<std::string> witnesses;    // registered witness names
    std::vector<std::string> rule_names;   // empty = every rule
    int witness_horizon = 12;

    static SuiteConfig parse(const std::string& json_text);
    static SuiteConfig shipped_default();
};

struct ReportEstimateRow {
    std::string family;
    std::string quantity;
    Estimate estimate;
    std::string origin; // descriptor or witness that produced it
};

struct ReportRuleRow {
    std::string rule;
    std::string family;
    CheckResult result;
    std::string source;
};

struct Report {
    std::vector<ReportEstimateRow> estimates;
    std::vector<ReportRuleRow> rule_rows;
    std::vector<std::string> registry_notes; // self-check violations
    std::vector<std::string> errors;         // budget/solver failures, suite continues
    std::map<std::string, double> timings_ms;
    std::uint64_t seed = 0;
    double tolerance_polyhedral = 1e-9;
    double tolerance_james = 1e-6;

    bool any_violated() const;
    std::string to_text() const;
    std::string to_json(bool with_timings = false) const;
    std::string estimates_csv() const;
};

/// Execute every configured computation, merge with the registry, and
/// evaluate every configured rule per catalogued family.
Report run_suite(const SuiteConfig& config);

} // namespace bq
