#include "bq/bases.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Dense>

#include "bq/convex.hpp"
#include "bq/errors.hpp"

namespace bq {

namespace {

Functional masked(const Functional& f, const std::vector<double>& w) {
    std::vector<double> v(f.space.slots(), 0.0);
    for (int i = 0; i < f.space.slots(); ++i) v[i] = f.at(i) * (i < static_cast<int>(w.size()) ? w[i] : 0.0);
    return Functional(f.space, std::move(v));
}

std::vector<double> prefix_mask(int slots, int n) {
    std::vector<double> w(slots, 0.0);
    for (int i = 0; i < n; ++i) w[i] = 1.0;
    return w;
}

} // namespace

double polyhedral_diag_opnorm(const SpaceDescriptor& space, const std::vector<double>& w) {
    if (!space.polyhedral()) throw InputError("polyhedral operator norm asked of the james kernel");
    double best = 0.0;
    for (const Functional& f : dual_extreme_points(space))
        best = std::max(best, dual_norm(masked(f, w)));
    return best;
}

Estimate projection_norm(const BasisSection& section, int n) {
    const int slots = section.slots();
    if (n < 0 || n > slots) throw InputError("projection index out of range");
    if (n == 0) return Estimate::exact(0.0, "empty-projection");
    if (section.space.polyhedral()) {
        Estimate e = Estimate::exact(
            polyhedral_diag_opnorm(section.space, prefix_mask(slots, n)),
            "dual-vertex-enumeration");
        e.params["n"] = n;
        e.params["N"] = slots;
        return e;
    }
    // James: ascent lower bound; matched-pattern enumeration certifies the
    // upper bound 1 for prefix windows small enough to enumerate.
    Estimate e = Estimate::lower(
        james_diag_opnorm_lower(slots, prefix_mask(slots, n)), "projected-ascent");
    e.params["n"] = n;
    e.params["N"] = slots;
    if (n <= 10 && james_mask_contractive(slots, 1, n)) e.params["upper"] = 1.0;
    return e;
}

Estimate basis_constant(const BasisSection& section) {
    if (section.cached_k) return *section.cached_k;
    const int slots = section.slots();
    double best = 0.0;
    double upper = 0.0;
    bool have_upper = true;
    for (int n = 1; n <= slots; ++n) {
        const Estimate pn = projection_norm(section, n);
        best = std::max(best, pn.value);
        if (pn.direction == Direction::Exact) {
            upper = std::max(upper, pn.value);
        } else if (pn.params.count("upper")) {
            upper = std::max(upper, pn.params.at("upper"));
        } else {
            have_upper = false;
        }
    }
    Estimate e = section.space.polyhedral()
                     ? Estimate::exact(best, "dual-vertex-enumeration")
                     : Estimate::lower(best, "projected-ascent");
    e.params["N"] = slots;
    if (!section.space.polyhedral() && have_upper) e.params["upper"] = upper;
    section.cached_k = e;
    return e;
}

Estimate unconditional_constant(const BasisSection& section) {
    if (section.cached_ku) return *section.cached_ku;
    const int slots = section.slots();
    if (slots > budgets().sign_enum)
        throw BudgetError("sign enumeration over 2^" + std::to_string(slots) +
                          " vectors exceeds the budget");

    std::vector<double> theta(slots, 1.0);
    double best = 0.0;
    const std::uint64_t top = slots > 1 ? (1ull << (slots - 1)) : 1;
    std::uint64_t prev_gray = 0;
    for (std::uint64_t i = 0; i < top; ++i) {
        const std::uint64_t gray = i ^ (i >> 1);
        if (i > 0) {
            const int flip = std::countr_zero(prev_gray ^ gray);
            theta[flip + 1] = -theta[flip + 1]; // leading sign stays positive
        }
        prev_gray = gray;
        const double value =
            section.space.polyhedral()
                ? polyhedral_diag_opnorm(section.space, theta)
                : james_diag_opnorm_lower(slots, theta, AscentOptions{6, 80, i});
        best = std::max(best, value);
    }
    Estimate e = section.space.polyhedral()
                     ? Estimate::exact(best, "sign-enumeration-gray")
                     : Estimate::lower(best, "sign-enumeration-gray/ascent");
    e.params["N"] = slots;
    section.cached_ku = e;
    return e;
}

double tail_norm(const BasisSection& section, const Functional& f, int n) {
    const int slots = section.slots();
    if (n < 0 || n >= slots) throw InputError("tail index out of range");
    if (f.space.kind != section.space.kind || f.space.dim != section.space.dim)
        throw InputError("functional does not live on this section");
    const int tail = slots - n;
    std::vector<double> tail_coords(tail, 0.0);
    for (int i = 0; i < tail; ++i) tail_coords[i] = f.at(n + i);

    switch (section.space.kind) {
        case SpaceKind::C0: {
            double s = 0.0;
            for (double v : tail_coords) s += std::abs(v);
            return s;
        }
        case SpaceKind::CWithUnit: {
            if (n == 0) return dual_norm(f);
            // Without the constant vector the restriction is a sup-norm
            // section, so the dual is plain l1.
            double s = 0.0;
            for (double v : tail_coords) s += std::abs(v);
            return s;
        }
        case SpaceKind::L1: {
            double m = 0.0;
            for (double v : tail_coords) m = std::max(m, std::abs(v));
            return m;
        }
        case SpaceKind::SummingC0: {
            // Suffix sums ignore the zeroed head, so the tail restriction
            // is a summing section of the remaining size.
            Functional g(SpaceDescriptor(SpaceKind::SummingC0, tail), tail_coords);
            return dual_norm(g);
        }
        case SpaceKind::James: {
            Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(slots, tail);
            for (int j = 0; j < tail; ++j) cols(n + j, j) = 1.0;
            std::vector<double> full(f.values);
            return james_support(slots, full, &cols).mid();
        }
    }
    throw InputError("unreachable kernel");
}

double dist_to_initial_span(const BasisSection& section, const Functional& f, int n) {
    const int slots = section.slots();
    if (n < 0 || n >= slots) throw InputError("head index out of range");
    if (n == 0) return dual_norm(f);

    switch (section.space.kind) {
        case SpaceKind::L1: {
            // Matching the head of f removes it from the sup entirely.
            double m = 0.0;
            for (int i = n; i < slots; ++i) m = std::max(m, std::abs(f.at(i)));
            return m;
        }
        case SpaceKind::C0:
        case SpaceKind::CWithUnit:
        case SpaceKind::SummingC0: {
            // minimize ||w - C z||_1 by basic-solution enumeration: some
            // optimum zeroes n residuals, so trying every invertible row
            // subset of size n is exhaustive.
            std::vector<double> fv(f.values);
            fv.resize(slots, 0.0);
            Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(
                max_form_dual(section.space, fv).data(), slots);
            Eigen::MatrixXd c(slots, n);
            for (int p = 0; p < n; ++p) {
                std::vector<double> unit(slots, 0.0);
                unit[p] = 1.0;
                const std::vector<double> col = max_form_dual(section.space, unit);
                for (int r = 0; r < slots; ++r) c(r, p) = col[r];
            }
            double best = w.lpNorm<1>(); // z = 0 candidate
            std::vector<int> pick(n);
            for (int i = 0; i < n; ++i) pick[i] = i;
            while (true) {
                Eigen::MatrixXd cs(n, n);
                Eigen::VectorXd ws(n);
                for (int r = 0; r < n; ++r) {
                    cs.row(r) = c.row(pick[r]);
                    ws[r] = w[pick[r]];
                }
                const Eigen::FullPivLU<Eigen::MatrixXd> lu(cs);
                if (lu.isInvertible()) {
                    const Eigen::VectorXd z = lu.solve(ws);
                    best = std::min(best, (w - c * z).lpNorm<1>());
                }
                int i = n - 1;
                while (i >= 0 && pick[i] == slots - n + i) --i;
                if (i < 0) break;
                ++pick[i];
                for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
            }
            return best;
        }
        case SpaceKind::James: {
            std::vector<double> fv(f.values);
            return james_dist_to_head_span(slots, fv, n).hi;
        }
    }
    throw InputError("unreachable kernel");
}

TailNormProfile tail_profile(const BasisSection& section, const Functional& f) {
    TailNormProfile profile;
    profile.functional = f;
    profile.values.reserve(section.slots());
    for (int n = 0; n < section.slots(); ++n)
        profile.values.push_back(tail_norm(section, f, n));
    return profile;
}

} // namespace bq
