#include "bq/quantities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "bq/convex.hpp"
#include "bq/errors.hpp"

namespace bq {

std::vector<double> gap_profile(const SpaceDescriptor& space,
                                const std::vector<Coeffs>& partial_sums) {
    const int m = static_cast<int>(partial_sums.size());
    if (m < 2) throw InputError("gap profile needs at least two partial sums");
    // Pairwise gap norms once, then a reverse running max.
    std::vector<double> row_max(m + 1, 0.0); // row_max[k] = max_l ||S_l - S_k||
    for (int k = 1; k < m; ++k) {
        double best = 0.0;
        for (int l = k + 1; l <= m; ++l)
            best = std::max(best, norm(space, partial_sums[l - 1] - partial_sums[k - 1]));
        row_max[k] = best;
    }
    std::vector<double> profile(m - 1, 0.0);
    double running = 0.0;
    for (int n = m - 1; n >= 1; --n) {
        running = std::max(running, row_max[n]);
        profile[n - 1] = running;
    }
    return profile;
}

namespace {

const double kBallTol = 1e-12;

struct BcWitnessSpec {
    const char* name;
    SpaceKind kind;
    const char* family;
    double (*coefficient)(int position); // list position, 0-based
};

double all_ones(int) { return 1.0; }
double alternating(int p) { return (p % 2 == 0) ? -1.0 : 1.0; } // a_i = (-1)^i, i = p+1
double jump(int p) { return p == 0 ? -1.0 : 2.0; }

const BcWitnessSpec kBcWitnesses[] = {
    {"c0-all-ones", SpaceKind::C0, "c0-unit", all_ones},
    {"summing-alternating", SpaceKind::SummingC0, "summing-c0", alternating},
    {"cunit-jump", SpaceKind::CWithUnit, "c-unit", jump},
    {"james-all-ones", SpaceKind::James, "james-unit", all_ones},
};

} // namespace

const std::vector<std::string>& bc_witness_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& w : kBcWitnesses) v.push_back(w.name);
        return v;
    }();
    return names;
}

WitnessSequence make_bc_witness(const std::string& name, int horizon) {
    if (horizon < 2) throw InputError("witness horizon must be at least 2");
    for (const auto& spec : kBcWitnesses) {
        if (name != spec.name) continue;
        WitnessSequence w;
        const int dim = spec.kind == SpaceKind::CWithUnit ? horizon - 1 : horizon;
        w.space = SpaceDescriptor(spec.kind, dim);
        w.name = spec.name;
        w.family = spec.family;
        w.periodic = true;
        w.coefficients.resize(horizon);
        for (int p = 0; p < horizon; ++p) w.coefficients[p] = spec.coefficient(p);
        return w;
    }
    throw InputError("unknown witness '" + name + "'");
}

std::vector<Coeffs> partial_sums(const WitnessSequence& w) {
    std::vector<Coeffs> sums;
    std::vector<double> acc;
    for (double a : w.coefficients) {
        acc.push_back(a);
        sums.emplace_back(acc);
    }
    return sums;
}

Estimate bc1_certificate(const WitnessSequence& w) {
    const std::vector<Coeffs> sums = partial_sums(w);
    const int m = static_cast<int>(sums.size());
    if (m < 2) throw InputError("witness horizon must be at least 2");
    for (int i = 0; i < m; ++i) {
        const double nv = norm(w.space, sums[i]);
        if (nv > 1.0 + kBallTol)
            throw InputError("witness partial sum " + std::to_string(i + 1) +
                             " has norm " + std::to_string(nv) + ", outside the unit ball");
    }
    const std::vector<double> profile = gap_profile(w.space, sums);
    const int anchor = std::clamp((m + 1) / 2, 1, m - 1);
    const double value = profile[anchor - 1];

    Estimate e;
    e.value = value;
    if (w.periodic) {
        e.direction = Direction::LowerBound;
        e.method = "gap-window/periodic";
    } else {
        e.direction = Direction::LowerBound;
        e.method = "heuristic-gap-window"; // excluded from certified comparisons
    }
    e.params["horizon"] = m;
    e.params["anchor"] = anchor;
    return e;
}

namespace {

// Scale a coefficient sequence so every partial sum sits in the unit ball,
// then report its best block norm and window.
struct BlockSearchResult {
    double value = 0.0;
    int lo = 0, hi = 0;
    std::vector<double> scaled;
};

BlockSearchResult best_block(const SpaceDescriptor& space, std::vector<double> coeffs) {
    BlockSearchResult out;
    std::vector<Coeffs> sums;
    std::vector<double> acc;
    double worst = 0.0;
    for (double a : coeffs) {
        acc.push_back(a);
        sums.emplace_back(acc);
        worst = std::max(worst, norm(space, sums.back()));
    }
    if (worst == 0.0) return out;
    const double scale = 1.0 / worst;
    for (auto& s : sums) s = scale * s;
    for (auto& c : coeffs) c *= scale;
    const int m = static_cast<int>(sums.size());
    for (int k = 1; k < m; ++k) {
        for (int l = k + 1; l <= m; ++l) {
            const double v = norm(space, sums[l - 1] - sums[k - 1]);
            if (v > out.value) {
                out.value = v;
                out.lo = k;
                out.hi = l;
            }
        }
    }
    out.scaled = std::move(coeffs);
    return out;
}

} // namespace

UpperCheckReport bc1_upper_check(const SpaceDescriptor& space, double bound, long trials,
                                 std::uint64_t seed) {
    if (bound < 0.0) throw InputError("bound must be nonnegative");
    UpperCheckReport report;
    report.bound = bound;
    const int horizon = std::min(12, std::max(4, space.slots()));

    std::vector<std::vector<double>> candidates;
    for (const auto& spec : kBcWitnesses) {
        if (spec.kind != space.kind) continue;
        std::vector<double> c(horizon);
        for (int p = 0; p < horizon; ++p) c[p] = spec.coefficient(p);
        candidates.push_back(std::move(c));
    }
    candidates.push_back(std::vector<double>(horizon, 1.0));
    {
        std::vector<double> alt(horizon);
        for (int p = 0; p < horizon; ++p) alt[p] = (p % 2 == 0) ? 1.0 : -1.0;
        candidates.push_back(std::move(alt));
    }
    for (int j = 0; j < horizon; ++j) {
        std::vector<double> spike(horizon, 0.0);
        spike[j] = 1.0;
        candidates.push_back(std::move(spike));
    }
    // Vertex-guided: difference patterns of the dual extreme points point
    // at the polytope's sharp directions.
    if (space.polyhedral()) {
        for (const Functional& f : dual_extreme_points(space)) {
            std::vector<double> c(horizon, 0.0);
            for (int p = 0; p < horizon && p < static_cast<int>(f.values.size()); ++p)
                c[p] = f.values[p];
            candidates.push_back(std::move(c));
            if (candidates.size() > 64) break;
        }
    }
    std::uint64_t state = seed * 0x9e3779b97f4a7c15ull + 13;
    for (long t = 0; t < trials; ++t) {
        std::vector<double> c(horizon);
        for (double& x : c) x = uniform_pm1(state);
        if (t % 2 == 1)
            for (double& x : c) x = x >= 0 ? 1.0 : -1.0;
        candidates.push_back(std::move(c));
    }

    report.trials = static_cast<long>(candidates.size());
    for (const auto& c : candidates) {
        const BlockSearchResult r = best_block(space, c);
        if (r.value > report.best_value) {
            report.best_value = r.value;
            report.witness_coefficients = r.scaled;
            report.window_lo = r.lo;
            report.window_hi = r.hi;
        }
        if (r.value > bound + 1e-9) {
            report.refuted = true;
            report.note = "refuted: block norm " + std::to_string(r.value) +
                          " exceeds the bound";
            return report;
        }
    }
    report.note = "not refuted: search evidence only, not a proof";
    return report;
}

namespace {

struct ShWitnessSpec {
    const char* name;
    SpaceKind kind;
    const char* family;
    bool partial_sum_frame;
};

const ShWitnessSpec kShWitnesses[] = {
    {"l1-all-ones", SpaceKind::L1, "l1-unit", false},
    {"summing-all-ones", SpaceKind::SummingC0, "summing-c0", false},
    {"james-f1", SpaceKind::James, "james-partial-sum", true},
};

} // namespace

const std::vector<std::string>& sh_witness_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& w : kShWitnesses) v.push_back(w.name);
        return v;
    }();
    return names;
}

ShWitness make_sh_witness(const std::string& name, int dim) {
    for (const auto& spec : kShWitnesses) {
        if (name != spec.name) continue;
        ShWitness w;
        w.name = spec.name;
        w.space = SpaceDescriptor(spec.kind, dim);
        w.family = spec.family;
        w.partial_sum_frame = spec.partial_sum_frame;
        w.eventually_constant = true;
        if (spec.kind == SpaceKind::James) {
            w.functional = Functional(w.space, {1.0}); // first coordinate functional
        } else {
            w.functional = Functional(w.space, std::vector<double>(w.space.slots(), 1.0));
        }
        return w;
    }
    throw InputError("unknown witness '" + name + "'");
}

namespace {

ShProfile sh_profile_impl(const BasisSection& section, const Functional& f,
                          bool partial_sum_frame, bool certified) {
    const Interval dn = dual_norm_enclosure(f);
    if (dn.lo > 1.0 + kBallTol)
        throw InputError("witness lies outside the dual ball: certified dual norm at least " +
                         std::to_string(dn.lo));

    const int slots = section.slots();
    ShProfile out;
    out.profile.functional = f;
    out.profile.values.reserve(slots);

    if (!partial_sum_frame) {
        out.profile = tail_profile(section, f);
    } else {
        if (section.space.kind != SpaceKind::James)
            throw InputError("partial-sum frame profiles are a james-section construction");
        // Tail spans of the partial-sum basis: columns sum the unit
        // vectors up to each index.
        std::vector<double> fv(f.values);
        for (int n = 0; n < slots; ++n) {
            Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(slots, slots - n);
            for (int j = 0; j < slots - n; ++j)
                for (int i = 0; i <= n + j; ++i) cols(i, j) = 1.0;
            out.profile.values.push_back(james_support(slots, fv, &cols).mid());
        }
    }

    Estimate summary;
    summary.value = out.profile.values.back();
    summary.direction = Direction::LowerBound;
    summary.method = certified ? "tail-profile/eventually-constant" : "heuristic-tail-profile";
    summary.params["N"] = slots;
    out.summary = summary;
    return out;
}

} // namespace

ShProfile sh_profile(const BasisSection& section, const Functional& f) {
    return sh_profile_impl(section, f, false, false);
}

ShProfile sh_profile(const BasisSection& section, const ShWitness& witness) {
    if (witness.space.kind != section.space.kind || witness.space.dim != section.space.dim)
        throw InputError("witness was built for a different section");
    return sh_profile_impl(section, witness.functional, witness.partial_sum_frame,
                           witness.eventually_constant);
}

Estimate block_projection_norm(const BasisSection& section, int k, int l) {
    const int slots = section.slots();
    if (k < 0 || l <= k || l > slots) throw InputError("block indices must satisfy 0 <= k < l <= N");

    std::vector<double> w(slots, 0.0);
    for (int i = k; i < l; ++i) w[i] = 1.0;

    const Estimate kn = basis_constant(section);
    const double two_k = 2.0 * (kn.params.count("upper") ? kn.params.at("upper") : kn.value);

    Estimate e;
    if (section.space.polyhedral()) {
        e = Estimate::exact(polyhedral_diag_opnorm(section.space, w), "dual-vertex-enumeration");
    } else {
        e = Estimate::lower(james_diag_opnorm_lower(slots, w), "projected-ascent");
        if (l - k <= 10 && james_mask_contractive(slots, k + 1, l)) e.params["upper"] = 1.0;
    }
    e.params["k"] = k;
    e.params["l"] = l;
    e.params["upper_2k"] = two_k;
    return e;
}

} // namespace bq
