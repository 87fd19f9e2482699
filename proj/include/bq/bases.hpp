#pragma once

#include <optional>
#include <vector>

#include "bq/estimate.hpp"
#include "bq/spaces.hpp"

namespace bq {

/// A finite basis section with cached constants. The caches fill on first
/// use (single-writer initialization); afterwards everything is read-only.
struct BasisSection {
    SpaceDescriptor space;

    explicit BasisSection(SpaceDescriptor s) : space(s) {}
    int slots() const { return space.slots(); }

    mutable std::optional<Estimate> cached_k;
    mutable std::optional<Estimate> cached_ku;
};

/// Tail norms ||f||_n for n = 0..N-1; values[0] is the full dual norm and
/// the sequence is nonincreasing.
struct TailNormProfile {
    Functional functional;
    std::vector<double> values;
};

/// Operator norm of the canonical projection P_n on the section.
///
/// Exact via dual extreme points for the polyhedral kernels. For the
/// James kernel the value is a multi-start ascent lower bound; when the
/// prefix window is small enough to enumerate, params["upper"] carries the
/// matched-pattern upper bound (equal to one).
Estimate projection_norm(const BasisSection& section, int n);

/// max_n ||P_n||; Exact for polyhedral kernels, LowerBound for James.
Estimate basis_constant(const BasisSection& section);

/// max over sign vectors of ||M_theta||, enumerated in Gray-code order
/// (theta and -theta coincide, so the leading sign is fixed positive).
/// Exact for polyhedral kernels; ascent LowerBound for James.
/// Throws BudgetError when 2^N exceeds the sign-enumeration budget.
Estimate unconditional_constant(const BasisSection& section);

/// Dual norm of f restricted to the span of the basis vectors at list
/// positions >= n, measured against the restriction of the kernel norm.
double tail_norm(const BasisSection& section, const Functional& f, int n);

/// d(f, span of the first n biorthogonal functionals) in the dual norm.
/// Computed independently of tail_norm: basic-solution enumeration of the
/// l1 regression for max-type kernels, closed form for l1, alternating
/// descent for James.
double dist_to_initial_span(const BasisSection& section, const Functional& f, int n);

TailNormProfile tail_profile(const BasisSection& section, const Functional& f);

/// Exact operator norm of diag(w) on a polyhedral section.
double polyhedral_diag_opnorm(const SpaceDescriptor& space, const std::vector<double>& w);

} // namespace bq
