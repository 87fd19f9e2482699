#include "bq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "bq/bases.hpp"
#include "bq/errors.hpp"
#include "bq/quantities.hpp"
#include "bq/spaces.hpp"

namespace bq {

std::string to_string(RuleStatus s) {
    switch (s) {
        case RuleStatus::Verified: return "verified";
        case RuleStatus::Inconclusive: return "inconclusive";
        case RuleStatus::Violated: return "violated";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<FixtureRecord> build_fixtures() {
    std::vector<FixtureRecord> r;
    auto put = [&](const char* space, const char* quantity, Interval v, const char* source,
                   bool verified = true) {
        r.push_back({space, quantity, v, source, verified});
    };
    const Interval one = Interval::exact(1.0);
    const Interval zero = Interval::exact(0.0);
    const Interval two = Interval::exact(2.0);
    const Interval one_to_two{1.0, 2.0};

    // c0, unit vector basis
    put("c0-unit", "sh", zero, "shrinking: the coordinate functionals span the whole dual l1");
    put("c0-unit", "sh_dual", one, "the biorthogonal sequence is the l1 unit basis; its all-ones dual witness keeps norm one on every tail");
    put("c0-unit", "bc1", one, "all-ones coefficients: every block of unit vectors has sup norm one");
    put("c0-unit", "bc2", one, "completeness chain collapses at basis constant one");
    put("c0-unit", "bc3", one, "completeness chain collapses at basis constant one");
    put("c0-unit", "bc2_dual", zero, "the biorthogonal sequence is the l1 unit basis: boundedly complete");
    put("c0-unit", "K", one, "coordinate projections are sup-norm contractive (monotone basis)");
    put("c0-unit", "Ku", one, "sign flips preserve the sup norm");
    put("c0-unit", "dhat", zero, "shrinking: finite dual combinations are dense in the dual ball");
    put("c0-unit", "sep_ball", zero, "separable space; separability defect dichotomy");
    put("c0-unit", "sep_dual_ball", zero, "dual is l1, separable");
    put("c0-unit", "sep_bidual_ball", one, "bidual ball is the l-infinity ball: nonseparable, so the dichotomy gives one");
    put("c0-unit", "wck_ball", one, "unit ball of a nonreflexive space has weak-noncompactness one");
    put("c0-unit", "wk_ball", one_to_two, "two-sided comparison against the cluster-point measure");
    put("c0-unit", "alpha_l1", zero, "no isomorphic copies of l1: the dual-ball separability defect vanishes");
    put("c0-unit", "alpha_c0", one, "identity embedding");
    put("c0-unit", "alpha_l1_dual", one, "the dual is l1; identity embedding");

    // l1, unit vector basis
    put("l1-unit", "sh", one, "the all-ones dual witness keeps norm one on every tail");
    put("l1-unit", "sh_dual", zero, "boundedly complete basis, so the biorthogonal sequence is shrinking");
    put("l1-unit", "bc1", zero, "boundedly complete: unconditional with no c0 copies");
    put("l1-unit", "bc2", zero, "completeness chain collapses at basis constant one");
    put("l1-unit", "bc3", zero, "completeness chain collapses at basis constant one");
    put("l1-unit", "bc2_dual", one, "the biorthogonal sequence spans an isometric c0; unit blocks give one");
    put("l1-unit", "K", one, "coordinate projections are contractive in the absolute-sum norm");
    put("l1-unit", "Ku", one, "sign flips preserve the absolute-sum norm");
    put("l1-unit", "dhat", one, "tail distance of a bounded sequence to the coordinate span is its limsup, at most one on the ball, and the shrinking defect forces one");
    put("l1-unit", "sep_ball", zero, "separable space");
    put("l1-unit", "sep_dual_ball", one, "dual is l-infinity: nonseparable, dichotomy gives one");
    put("l1-unit", "sep_bidual_ball", one, "bidual of a nonseparable-dual space stays nonseparable");
    put("l1-unit", "wck_ball", one, "unit ball of a nonreflexive space");
    put("l1-unit", "wk_ball", one_to_two, "two-sided comparison against the cluster-point measure");
    put("l1-unit", "alpha_l1", one, "identity embedding");
    put("l1-unit", "alpha_c0", zero, "boundedly complete unconditional basis: no c0 copies, and the embedding chain collapses");
    put("l1-unit", "alpha_l1_dual", one, "l1 embeds isometrically into l-infinity");

    // c0 with the summing basis
    put("summing-c0", "sh", one, "the first underlying coordinate functional has norm one on every summing-basis tail");
    put("summing-c0", "bc1", one, "alternating-sign witness: every window block has norm one");
    put("summing-c0", "sep_ball", zero, "separable space");
    put("summing-c0", "sep_dual_ball", zero, "dual is l1, separable");
    put("summing-c0", "sep_bidual_ball", one, "bidual ball is the l-infinity ball");
    put("summing-c0", "wck_ball", one, "unit ball of a nonreflexive space");
    put("summing-c0", "wk_ball", one_to_two, "two-sided comparison against the cluster-point measure");
    put("summing-c0", "alpha_l1", zero, "separable dual, so no l1 copies");
    put("summing-c0", "alpha_c0", one, "underlying space is c0: identity embedding");

    // c with the constant vector adjoined
    put("c-unit", "bc1", two, "minus-one-then-twos witness: tail blocks have sup norm two");
    put("c-unit", "bc2", two, "completeness chain collapses at basis constant one");
    put("c-unit", "bc3", two, "completeness chain collapses at basis constant one");
    put("c-unit", "K", one, "prefix maxima are nested (monotone basis)");
    put("c-unit", "sep_ball", zero, "separable space");
    put("c-unit", "sep_dual_ball", zero, "dual is l1, separable");
    put("c-unit", "sep_bidual_ball", one, "bidual ball is the l-infinity ball");
    put("c-unit", "wck_ball", one, "unit ball of a nonreflexive space");
    put("c-unit", "wk_ball", one_to_two, "two-sided comparison against the cluster-point measure");
    put("c-unit", "alpha_l1", zero, "separable dual, so no l1 copies");
    put("c-unit", "alpha_c0", one, "coordinate copy of c0");

    // James space, unit vector basis
    put("james-unit", "sh", zero, "monotone shrinking normalised basis");
    put("james-unit", "bc1", one, "segment sums have norm one; ball-constrained sequences admit no larger block");
    put("james-unit", "bc2", one, "completeness chain collapses at basis constant one");
    put("james-unit", "bc3", one, "completeness chain collapses at basis constant one");
    put("james-unit", "bc2_dual", zero, "shrinking basis, so the biorthogonal sequence is boundedly complete");
    put("james-unit", "K", one, "monotone basis");
    put("james-unit", "dhat", zero, "shrinking: finite dual combinations are dense in the dual ball");
    put("james-unit", "sep_ball", zero, "separable space");
    put("james-unit", "sep_dual_ball", zero, "shrinking basis: the dual is separable");
    put("james-unit", "sep_bidual_ball", zero, "quasi-reflexive of order one: the bidual is separable");
    put("james-unit", "wck_ball", one, "unit ball of a nonreflexive space");
    put("james-unit", "wk_ball", one_to_two, "two-sided comparison against the cluster-point measure");
    put("james-unit", "alpha_l1", zero, "separable dual, so no l1 copies");
    put("james-unit", "alpha_c0", zero, "quasi-reflexive: no isomorphic copies of c0");

    // James space, partial-sum basis
    put("james-partial-sum", "sh", one, "the first coordinate functional evaluates to one on every partial-sum tail");
    put("james-partial-sum", "bc1", zero, "boundedly complete basis");
    put("james-partial-sum", "sep_ball", zero, "separable space");
    put("james-partial-sum", "sep_dual_ball", zero, "separable dual");
    put("james-partial-sum", "sep_bidual_ball", zero, "quasi-reflexive of order one");
    put("james-partial-sum", "wck_ball", one, "unit ball of a nonreflexive space");
    put("james-partial-sum", "wk_ball", one_to_two, "two-sided comparison against the cluster-point measure");

    // The summing basis of c0 as a set, measured inside two ambient
    // spaces. Recorded from a standard argument; not rechecked here.
    put("summing-set-in-c0", "wck_set", one, "standard argument (recorded, not verified by this artifact)", false);
    put("summing-set-in-c0", "wk_set", one, "standard argument (recorded, not verified by this artifact)", false);
    put("summing-set-in-linf", "wck_set", Interval::exact(0.5), "standard argument (recorded, not verified by this artifact)", false);
    put("summing-set-in-linf", "wk_set", Interval::exact(0.5), "standard argument (recorded, not verified by this artifact)", false);

    return r;
}

} // namespace

const std::vector<FixtureRecord>& fixtures() {
    static const std::vector<FixtureRecord> table = build_fixtures();
    return table;
}

std::optional<Interval> fixture_lookup(const std::string& space, const std::string& quantity) {
    for (const FixtureRecord& rec : fixtures())
        if (rec.space == space && rec.quantity == quantity) return rec.value;
    return std::nullopt;
}

const std::vector<SpaceFacts>& space_facts() {
    static const std::vector<SpaceFacts> table = {
        {"c0-unit", Flag::Yes, Flag::Yes, Flag::No, Flag::Yes, Flag::No},
        {"l1-unit", Flag::Yes, Flag::No, Flag::Yes, Flag::No, Flag::Yes},
        {"summing-c0", Flag::No, Flag::No, Flag::No, Flag::Yes, Flag::No},
        {"c-unit", Flag::No, Flag::Unknown, Flag::No, Flag::Yes, Flag::No},
        {"james-unit", Flag::No, Flag::Yes, Flag::No, Flag::Yes, Flag::Yes},
        {"james-partial-sum", Flag::No, Flag::No, Flag::Yes, Flag::Yes, Flag::Yes},
    };
    return table;
}

const SpaceFacts* find_space_facts(const std::string& family) {
    for (const SpaceFacts& f : space_facts())
        if (f.family == family) return &f;
    return nullptr;
}

namespace {

RuleTerm term(double coeff, int k, int ku, int kp1, const char* quantity) {
    return {coeff, k, ku, kp1, quantity};
}

std::vector<InequalityRule> build_rules() {
    std::vector<InequalityRule> r;
    auto put = [&](const char* name, RuleTerm lhs, RuleTerm rhs,
                   std::vector<std::string> hyps, const char* source) {
        r.push_back({name, lhs, rhs, std::move(hyps), source});
    };
    put("dual-distance-lower", term(1, 0, 0, 0, "sh"), term(1, 0, 0, 0, "dhat"), {},
        "shrinking defect below the dual-ball distance to the coordinate span");
    put("dual-distance-upper", term(1, 0, 0, 0, "dhat"), term(1, 0, 0, 1, "sh"), {},
        "dual-ball distance controlled by (K+1) times the shrinking defect");
    put("l1-embedding-vs-dual-separability", term(1, 0, 0, 0, "alpha_l1"),
        term(1, 0, 0, 0, "sep_dual_ball"), {},
        "an l1 copy forces a nonseparable chunk of the dual ball");
    put("dual-separability-vs-distance", term(1, 0, 0, 0, "sep_dual_ball"),
        term(1, 0, 0, 0, "dhat"), {},
        "countable nets built from the coordinate span cover the dual ball");
    put("shrinking-vs-l1-embedding", term(1, 0, 0, 0, "sh"), term(1, 0, 1, 0, "alpha_l1"),
        {"unconditional"},
        "a shrinking defect produces separated blocks carrying an l1 copy");
    put("bc-chain-12", term(1, 0, 0, 0, "bc1"), term(1, 0, 0, 0, "bc2"), {},
        "completeness chain, first link");
    put("bc-chain-23", term(1, 0, 0, 0, "bc2"), term(1, 0, 0, 0, "bc3"), {},
        "completeness chain, second link");
    put("bc-chain-31", term(1, 0, 0, 0, "bc3"), term(1, 1, 0, 0, "bc1"), {},
        "completeness chain closes at K times the first quantity");
    put("dual-shrinking-lower", term(1, 0, 0, 0, "sh_dual"), term(1, 0, 0, 0, "bc2"), {},
        "shrinking defect of the biorthogonals below the dual completeness defect");
    put("dual-shrinking-upper", term(1, 0, 0, 0, "bc2"), term(2, 2, 0, 0, "sh_dual"), {},
        "dual completeness defect controlled by 2K^2 times the biorthogonal shrinking defect");
    put("dual-completeness-lower", term(1, 0, 0, 0, "bc2_dual"), term(2, 1, 0, 0, "sh"), {},
        "dual-sequence completeness defect below 2K times the shrinking defect");
    put("dual-completeness-upper", term(1, 0, 0, 0, "sh"), term(1, 1, 0, 0, "bc2_dual"), {},
        "shrinking defect below K times the dual-sequence completeness defect");
    put("c0-embedding-lower", term(1, 0, 0, 0, "alpha_c0"), term(1, 0, 1, 0, "bc1"),
        {"unconditional"}, "a c0 copy witnesses a completeness defect");
    put("c0-embedding-upper", term(1, 0, 0, 0, "bc1"), term(1, 0, 3, 0, "alpha_c0"),
        {"unconditional"},
        "a completeness defect yields a c0 copy after cubing the unconditional constant");
    put("completeness-vs-weak-compactness", term(1, 0, 0, 0, "bc3"), term(2, 2, 0, 0, "wk_ball"),
        {}, "completeness defect below 2K^2 times the ball's weak-noncompactness");
    put("shrinking-vs-weak-compactness", term(1, 0, 0, 0, "sh"), term(4, 3, 0, 0, "wk_ball"),
        {}, "shrinking defect below 4K^3 times the ball's weak-noncompactness");
    put("weak-compactness-vs-distance", term(1, 0, 0, 0, "wck_ball"), term(1, 0, 0, 1, "dhat"),
        {"boundedly_complete"},
        "for boundedly complete bases the cluster measure is controlled by the dual distance");
    put("weak-compactness-vs-dual-completeness", term(1, 0, 0, 0, "wck_ball"),
        term(1, 0, 0, 2, "bc2"), {"shrinking"},
        "for shrinking bases the cluster measure is controlled by the dual completeness defect");
    put("weak-compactness-vs-c0-embedding", term(1, 0, 0, 0, "wck_ball"),
        term(1, 1, 3, 2, "alpha_c0"), {"unconditional", "no_l1_copies"},
        "without l1 copies the cluster measure forces a c0 copy");
    put("c0-embedding-vs-dual-l1", term(1, 0, 0, 0, "alpha_c0"),
        term(1, 0, 0, 0, "alpha_l1_dual"), {"unconditional", "no_l1_copies"},
        "a complemented c0 copy dualizes to an l1 copy in the dual");
    put("dual-l1-vs-weak-compactness", term(1, 0, 0, 0, "alpha_l1_dual"),
        term(1, 0, 0, 0, "wck_ball"), {"unconditional", "no_l1_copies"},
        "an l1 copy in the dual is measured by the ball's cluster distance");
    put("weak-compactness-vs-l1-embedding", term(1, 0, 0, 0, "wck_ball"),
        term(1, 0, 1, 2, "alpha_l1"), {"unconditional", "no_c0_copies"},
        "without c0 copies the cluster measure forces an l1 copy");
    put("bidual-separability-upper", term(1, 0, 0, 0, "sep_bidual_ball"),
        term(1, 0, 0, 0, "wk_ball"), {"unconditional"},
        "the bidual ball is covered by rational combinations up to the weak-noncompactness radius");
    put("bidual-separability-lower", term(1, 0, 0, 0, "wck_ball"),
        term(1, 1, 3, 2, "sep_bidual_ball"), {"unconditional"},
        "cluster measure below the bidual separability defect with the embedding constants");
    put("ball-separability-monotone", term(1, 0, 0, 0, "sep_ball"),
        term(1, 0, 0, 0, "sep_dual_ball"), {},
        "separability defect never drops when passing to the dual ball");
    put("l1-embedding-vs-weak-compactness", term(1, 0, 0, 0, "alpha_l1"),
        term(1, 0, 0, 0, "wck_ball"), {},
        "an l1 copy inside the ball witnesses cluster distance");
    put("weak-compactness-comparison-lower", term(1, 0, 0, 0, "wck_ball"),
        term(1, 0, 0, 0, "wk_ball"), {}, "cluster measure below the closure measure");
    put("weak-compactness-comparison-upper", term(1, 0, 0, 0, "wk_ball"),
        term(2, 0, 0, 0, "wck_ball"), {}, "closure measure below twice the cluster measure");
    return r;
}

std::optional<Interval> eval_term(const RuleTerm& t, const QuantityContext& ctx) {
    Interval out = Interval::exact(t.coeff);
    if (t.k_power > 0 || t.k_plus_one_power > 0) {
        auto it = ctx.find("K");
        if (it == ctx.end()) return std::nullopt;
        out = out * pow(it->second, t.k_power);
        const Interval kp1{it->second.lo + 1.0, it->second.hi + 1.0};
        out = out * pow(kp1, t.k_plus_one_power);
    }
    if (t.ku_power > 0) {
        auto it = ctx.find("Ku");
        if (it == ctx.end()) return std::nullopt;
        out = out * pow(it->second, t.ku_power);
    }
    if (!t.quantity.empty()) {
        auto it = ctx.find(t.quantity);
        if (it == ctx.end()) return std::nullopt;
        out = out * it->second;
    }
    return out;
}

Flag get_flag(const SpaceFacts& f, const std::string& name) {
    if (name == "unconditional") return f.unconditional;
    if (name == "shrinking") return f.shrinking;
    if (name == "boundedly_complete") return f.boundedly_complete;
    if (name == "no_l1_copies") return f.no_l1_copies;
    if (name == "no_c0_copies") return f.no_c0_copies;
    return Flag::Unknown;
}

} // namespace

const std::vector<InequalityRule>& rules() {
    static const std::vector<InequalityRule> table = build_rules();
    return table;
}

CheckResult evaluate_rule(const InequalityRule& rule, const QuantityContext& context,
                          const SpaceFacts* facts, double tolerance) {
    CheckResult out;
    out.tolerance = tolerance;
    for (const std::string& hyp : rule.hypotheses) {
        const Flag flag = facts ? get_flag(*facts, hyp) : Flag::Unknown;
        if (flag != Flag::Yes) {
            out.status = RuleStatus::Inconclusive;
            out.detail = flag == Flag::No ? "hypothesis '" + hyp + "' fails for this space"
                                          : "hypothesis '" + hyp + "' not established";
            return out;
        }
    }
    const std::optional<Interval> lhs = eval_term(rule.lhs, context);
    const std::optional<Interval> rhs = eval_term(rule.rhs, context);
    if (!lhs || !rhs) {
        out.status = RuleStatus::Inconclusive;
        out.detail = std::string("missing quantity '") +
                     (!lhs ? rule.lhs.quantity : rule.rhs.quantity) + "'";
        return out;
    }
    out.lhs = *lhs;
    out.rhs = *rhs;
    if (lhs->hi <= rhs->lo + tolerance) {
        out.status = RuleStatus::Verified;
        out.detail = "certified";
    } else if (lhs->lo > rhs->hi + tolerance) {
        out.status = RuleStatus::Violated;
        out.detail = "certified contradiction: this flags an implementation bug, never a "
                     "refutation of the proved inequality";
    } else {
        out.status = RuleStatus::Inconclusive;
        out.detail = "direction tags cannot certify either way";
    }
    return out;
}

std::vector<std::string> registry_self_check() {
    std::vector<std::string> notes;
    const double tol = 1e-9;

    std::vector<std::string> families;
    for (const FixtureRecord& rec : fixtures())
        if (std::find(families.begin(), families.end(), rec.space) == families.end())
            families.push_back(rec.space);

    for (const std::string& family : families) {
        const auto wck = fixture_lookup(family, "wck_ball");
        const auto wk = fixture_lookup(family, "wk_ball");
        if (wck && wk) {
            if (wk->hi < wck->lo - tol || wk->lo > 2.0 * wck->hi + tol)
                notes.push_back(family + ": weak-compactness pair breaks the two-sided comparison");
        }
        const auto wck_set = fixture_lookup(family, "wck_set");
        const auto wk_set = fixture_lookup(family, "wk_set");
        if (wck_set && wk_set) {
            if (wk_set->hi < wck_set->lo - tol || wk_set->lo > 2.0 * wck_set->hi + tol)
                notes.push_back(family + ": set weak-compactness pair breaks the two-sided comparison");
        }
        const auto bc1 = fixture_lookup(family, "bc1");
        const auto bc2 = fixture_lookup(family, "bc2");
        const auto bc3 = fixture_lookup(family, "bc3");
        const auto k = fixture_lookup(family, "K");
        if (bc1 && bc2 && bc3 && k) {
            if (bc1->lo > bc2->hi + tol || bc2->lo > bc3->hi + tol ||
                bc3->lo > k->hi * bc1->hi + tol)
                notes.push_back(family + ": completeness chain fails on registry values");
        }
        for (const char* q : {"sep_ball", "sep_dual_ball", "sep_bidual_ball"}) {
            const auto sep = fixture_lookup(family, q);
            if (sep && sep->is_exact() && sep->lo != 0.0 && sep->lo != 1.0)
                notes.push_back(family + ": " + q + " breaks the zero-one dichotomy");
        }
    }
    return notes;
}

SuiteConfig SuiteConfig::parse(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw InputError("config must be a JSON object");
    static const std::vector<std::string> known = {
        "schema", "seed", "spaces", "witnesses", "rules", "witness_horizon", "budgets"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw InputError("unknown config key '" + key + "'");

    SuiteConfig c;
    c.schema = j.value("schema", 1);
    if (c.schema != 1) throw InputError("unsupported config schema");
    c.seed = j.value("seed", 0ull);
    c.witness_horizon = j.value("witness_horizon", 12);
    if (c.witness_horizon < 2) throw InputError("witness_horizon must be at least 2");
    if (j.contains("spaces"))
        for (const auto& s : j.at("spaces")) c.spaces.push_back(s.get<std::string>());
    if (j.contains("witnesses"))
        for (const auto& s : j.at("witnesses")) c.witnesses.push_back(s.get<std::string>());
    if (j.contains("rules"))
        for (const auto& s : j.at("rules")) c.rule_names.push_back(s.get<std::string>());
    return c;
}

SuiteConfig SuiteConfig::shipped_default() {
    SuiteConfig c;
    c.spaces = {"c0:8", "l1:8", "summing:8", "cunit:7", "james:8"};
    for (const std::string& w : bc_witness_names()) c.witnesses.push_back(w);
    for (const std::string& w : sh_witness_names()) c.witnesses.push_back(w);
    c.rule_names = {"all"};
    return c;
}

namespace {

std::string family_of(const SpaceDescriptor& d) {
    switch (d.kind) {
        case SpaceKind::C0: return "c0-unit";
        case SpaceKind::L1: return "l1-unit";
        case SpaceKind::SummingC0: return "summing-c0";
        case SpaceKind::CWithUnit: return "c-unit";
        case SpaceKind::James: return "james-unit";
    }
    return "?";
}

bool is_james_family(const std::string& family) {
    return family.rfind("james", 0) == 0;
}

// Merge a computed space-level enclosure into the context; an empty meet
// (beyond slack) is a certified contradiction with the registry.
void merge_quantity(QuantityContext& ctx, std::vector<ReportRuleRow>& rows,
                    const std::string& family, const std::string& quantity,
                    const Interval& computed, double slack) {
    auto it = ctx.find(quantity);
    if (it == ctx.end()) {
        ctx[quantity] = computed;
        return;
    }
    const Interval met = it->second.meet(computed);
    if (met.empty(slack)) {
        CheckResult res;
        res.status = RuleStatus::Violated;
        res.lhs = computed;
        res.rhs = it->second;
        res.tolerance = slack;
        res.detail = "computed enclosure contradicts the registry value: implementation bug";
        rows.push_back({"fixture-consistency/" + quantity, family, res, "registry cross-check"});
        return; // keep the registry value for rule evaluation
    }
    ctx[quantity] = {met.lo, std::max(met.lo, met.hi)};
}

} // namespace

bool Report::any_violated() const {
    for (const auto& row : rule_rows)
        if (row.result.status == RuleStatus::Violated) return true;
    return !registry_notes.empty();
}

Report run_suite(const SuiteConfig& config) {
    Report report;
    report.seed = config.seed;
    const auto t0 = std::chrono::steady_clock::now();

    std::map<std::string, QuantityContext> contexts;
    for (const FixtureRecord& rec : fixtures()) contexts[rec.space][rec.quantity] = rec.value;

    // Computed evidence from the configured sections.
    for (const std::string& text : config.spaces) {
        try {
            const SpaceDescriptor d = SpaceDescriptor::parse(text);
            const std::string family = family_of(d);
            const double slack = is_james_family(family) ? 1e-6 : 1e-9;
            BasisSection section(d);

            const Estimate k = basis_constant(section);
            report.estimates.push_back({family, "K", k, text});
            merge_quantity(contexts[family], report.rule_rows, family, "K",
                           Interval::at_least(k.value), slack);

            const Estimate ku = unconditional_constant(section);
            report.estimates.push_back({family, "Ku", ku, text});
            merge_quantity(contexts[family], report.rule_rows, family, "Ku",
                           Interval::at_least(ku.value), slack);
        } catch (const BudgetError& e) {
            report.errors.push_back(text + ": budget error: " + e.what());
        } catch (const InputError& e) {
            report.errors.push_back(text + ": input error: " + e.what());
        } catch (const SolverError& e) {
            report.errors.push_back(text + ": solver failure: " + e.what());
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.timings_ms["sections"] =
        std::chrono::duration<double, std::milli>(t1 - t0).count();

    // Witness certificates and profiles.
    for (const std::string& name : config.witnesses) {
        try {
            const auto& bc = bc_witness_names();
            if (std::find(bc.begin(), bc.end(), name) != bc.end()) {
                const WitnessSequence w = make_bc_witness(name, config.witness_horizon);
                const Estimate cert = bc1_certificate(w);
                report.estimates.push_back({w.family, "bc1", cert, name});
                const double slack = is_james_family(w.family) ? 1e-6 : 1e-9;
                if (!cert.heuristic())
                    merge_quantity(contexts[w.family], report.rule_rows, w.family, "bc1",
                                   Interval::at_least(cert.value - slack), slack);
                continue;
            }
            const auto& sh = sh_witness_names();
            if (std::find(sh.begin(), sh.end(), name) != sh.end()) {
                const ShWitness w = make_sh_witness(name, config.witness_horizon);
                BasisSection section(w.space);
                const ShProfile profile = sh_profile(section, w);
                report.estimates.push_back({w.family, "sh", profile.summary, name});
                const double slack = is_james_family(w.family) ? 1e-6 : 1e-9;
                if (!profile.summary.heuristic())
                    merge_quantity(contexts[w.family], report.rule_rows, w.family, "sh",
                                   Interval::at_least(profile.summary.value - slack), slack);
                continue;
            }
            report.errors.push_back("unknown witness '" + name + "'");
        } catch (const BudgetError& e) {
            report.errors.push_back(name + ": budget error: " + e.what());
        } catch (const InputError& e) {
            report.errors.push_back(name + ": input error: " + e.what());
        } catch (const SolverError& e) {
            report.errors.push_back(name + ": solver failure: " + e.what());
        }
    }
    const auto t2 = std::chrono::steady_clock::now();
    report.timings_ms["witnesses"] =
        std::chrono::duration<double, std::milli>(t2 - t1).count();

    report.registry_notes = registry_self_check();

    // Rule evaluation per catalogued family, declaration order. An empty
    // rule list runs nothing; the sentinel "all" selects every rule.
    const bool all_rules =
        config.rule_names.size() == 1 && config.rule_names[0] == "all";
    if (!config.rule_names.empty()) {
        for (const InequalityRule& rule : rules()) {
            if (!all_rules &&
                std::find(config.rule_names.begin(), config.rule_names.end(), rule.name) ==
                    config.rule_names.end())
                continue;
            for (const SpaceFacts& facts : space_facts()) {
                auto ctx_it = contexts.find(facts.family);
                if (ctx_it == contexts.end()) continue;
                const double tol = is_james_family(facts.family)
                                       ? report.tolerance_james
                                       : report.tolerance_polyhedral;
                const CheckResult res = evaluate_rule(rule, ctx_it->second, &facts, tol);
                report.rule_rows.push_back({rule.name, facts.family, res, rule.source});
            }
        }
    }
    const auto t3 = std::chrono::steady_clock::now();
    report.timings_ms["rules"] =
        std::chrono::duration<double, std::milli>(t3 - t2).count();
    return report;
}

namespace {

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::string format_interval(const Interval& iv) {
    if (iv.is_exact()) return format_number(iv.lo);
    return "[" + format_number(iv.lo) + ", " + format_number(iv.hi) + "]";
}

} // namespace

std::string Report::to_text() const {
    std::ostringstream os;
    os << "estimates\n";
    for (const auto& row : estimates) {
        os << "  " << row.family << "  " << row.quantity << " = " << format_number(row.estimate.value)
           << "  (" << to_string(row.estimate.direction) << ", " << row.estimate.method
           << ", via " << row.origin << ")\n";
    }
    os << "rules\n";
    for (const auto& row : rule_rows) {
        os << "  " << row.rule << "  " << row.family << "  "
           << to_string(row.result.status);
        if (row.result.status != RuleStatus::Inconclusive ||
            row.result.detail.rfind("missing", 0) != 0) {
            os << "  lhs=" << format_interval(row.result.lhs)
               << " rhs=" << format_interval(row.result.rhs);
        }
        os << "  tol=" << format_number(row.result.tolerance) << "  " << row.result.detail
           << "\n";
    }
    if (!registry_notes.empty()) {
        os << "registry\n";
        for (const auto& n : registry_notes) os << "  " << n << "\n";
    }
    if (!errors.empty()) {
        os << "errors\n";
        for (const auto& e : errors) os << "  " << e << "\n";
    }
    os << (any_violated() ? "status: VIOLATED\n" : "status: clean\n");
    return os.str();
}

std::string Report::to_json(bool with_timings) const {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["seed"] = seed;
    j["tolerance_polyhedral"] = tolerance_polyhedral;
    j["tolerance_james"] = tolerance_james;
    j["estimates"] = nlohmann::ordered_json::array();
    for (const auto& row : estimates) {
        nlohmann::ordered_json e;
        e["family"] = row.family;
        e["quantity"] = row.quantity;
        e["value"] = row.estimate.value;
        e["direction"] = to_string(row.estimate.direction);
        e["method"] = row.estimate.method;
        e["origin"] = row.origin;
        for (const auto& [k, v] : row.estimate.params) e["params"][k] = v;
        j["estimates"].push_back(e);
    }
    auto bound_json = [](double v) -> nlohmann::ordered_json {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
    };
    j["rules"] = nlohmann::ordered_json::array();
    for (const auto& row : rule_rows) {
        nlohmann::ordered_json e;
        e["rule"] = row.rule;
        e["family"] = row.family;
        e["status"] = to_string(row.result.status);
        e["detail"] = row.result.detail;
        e["lhs"] = {bound_json(row.result.lhs.lo), bound_json(row.result.lhs.hi)};
        e["rhs"] = {bound_json(row.result.rhs.lo), bound_json(row.result.rhs.hi)};
        e["tolerance"] = row.result.tolerance;
        e["source"] = row.source;
        j["rules"].push_back(e);
    }
    j["registry_notes"] = registry_notes;
    j["errors"] = errors;
    j["violated"] = any_violated();
    if (with_timings) {
        for (const auto& [k, v] : timings_ms) j["timings_ms"][k] = v;
    }
    return j.dump(2);
}

std::string Report::estimates_csv() const {
    std::ostringstream os;
    os << "family,quantity,value,direction,method,origin\n";
    for (const auto& row : estimates) {
        os << row.family << ',' << row.quantity << ',' << format_number(row.estimate.value)
           << ',' << to_string(row.estimate.direction) << ',' << row.estimate.method << ','
           << row.origin << "\n";
    }
    return os.str();
}

} // namespace bq
