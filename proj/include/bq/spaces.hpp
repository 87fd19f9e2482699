#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bq/errors.hpp"
#include "bq/estimate.hpp"

namespace bq {

/// The five norm kernels. Each one fixes the norm, the dual norm, and
/// whether the unit ball is a polytope on every finite section.
enum class SpaceKind {
    C0,        // sup norm of the coefficients
    CWithUnit, // max(|a0|, |a0+a1|, ..., |a0+aN|); slot 0 is the constant vector
    L1,        // sum of absolute coefficients
    SummingC0, // max over k of |a_k + a_{k+1} + ... + a_N| (suffix sums)
    James,     // sup of cyclic quadratic variation over index patterns, scaled by 1/sqrt(2)
};

/// A norm kernel together with a section dimension.
///
/// Compact string form is `kind:dim`, e.g. `james:10` or `summing:8`.
/// For CWithUnit the coordinates are indexed 0..dim, so a descriptor
/// `cunit:4` has five coefficient slots.
struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::C0;
    int dim = 1;

    SpaceDescriptor() = default;
    SpaceDescriptor(SpaceKind k, int d);

    static SpaceDescriptor parse(std::string_view text);
    std::string to_string() const;

    /// Number of coefficient slots (dim, or dim + 1 for CWithUnit).
    int slots() const { return kind == SpaceKind::CWithUnit ? dim + 1 : dim; }
    bool polyhedral() const { return kind != SpaceKind::James; }
};

/// Coefficient vector, index-aligned with the section basis.
/// Trailing coordinates beyond the stored list are zero.
struct Coeffs {
    std::vector<double> values;

    Coeffs() = default;
    explicit Coeffs(std::vector<double> v) : values(std::move(v)) {}

    int size() const { return static_cast<int>(values.size()); }
    double at(int i) const { return i < size() ? values[i] : 0.0; }
    /// Largest index (1-based) with a nonzero value; 0 for the zero vector.
    int last_support() const;
};

Coeffs operator-(const Coeffs& a, const Coeffs& b);
Coeffs operator+(const Coeffs& a, const Coeffs& b);
Coeffs operator*(double s, const Coeffs& a);

/// Strictly increasing index tuple, length >= 2. Indices are 1-based
/// coordinate positions; the last one may point one past the support.
struct Pattern {
    std::vector<int> indices;
};

/// A functional in biorthogonal coordinates: values[i] = <f, x_{i+1}>.
struct Functional {
    SpaceDescriptor space;
    std::vector<double> values;

    Functional() = default;
    Functional(SpaceDescriptor s, std::vector<double> v) : space(s), values(std::move(v)) {}
    double at(int i) const {
        return i < static_cast<int>(values.size()) ? values[i] : 0.0;
    }
};

/// Exact norm of x under the section's kernel.
///
/// The James kernel maximizes the cyclic sum of squared differences over
/// all patterns drawn from the coordinate range of x plus one sentinel
/// index past it (value zero); exhaustive enumeration below dimension 12,
/// an equivalent dynamic program above. Throws BudgetError when the
/// James section dimension exceeds the pattern budget.
double norm(const SpaceDescriptor& space, const Coeffs& x);

/// All patterns over `support` plus the sentinel max(support)+1:
/// every subset of size >= 2, ordered by size, then lexicographically.
/// Throws InputError on empty support, BudgetError past the cap.
std::vector<Pattern> james_patterns(const std::vector<int>& support);

/// Dual norm of f on its section.
///
/// Exact closed forms for the polyhedral kernels. The James kernel runs
/// the convex support-function solver and returns the enclosure midpoint;
/// the enclosure width is at most 1e-7 or a SolverError is thrown.
double dual_norm(const Functional& f);

/// Lower/upper enclosure backing dual_norm. Exact kernels return a
/// zero-width interval.
Interval dual_norm_enclosure(const Functional& f);

/// Finite set E with ||x|| = max_{f in E} <f, x> for every x on the
/// section, deduplicated, in the documented deterministic order.
/// Throws InputError for the James kernel (not polyhedral).
std::vector<Functional> dual_extreme_points(const SpaceDescriptor& space);

/// For the max-type kernels (C0, SummingC0, CWithUnit): the invertible
/// linear image m(x) with ||x|| = ||m(x)||_inf.
std::vector<double> max_form(const SpaceDescriptor& space, const Coeffs& x);

/// Dual transfer of max_form: coefficients c solving M^T c = f, so that
/// dual_norm(f) = ||c||_1. Only for max-type kernels.
std::vector<double> max_form_dual(const SpaceDescriptor& space, const std::vector<double>& f);

/// James norm of a raw coordinate vector by exhaustive pattern
/// enumeration. Reference implementation; lengths above 24 throw.
double james_norm_enumerated(const std::vector<double>& coords);

/// James norm by the longest-cyclic-path dynamic program, ordered by last
/// index with the cyclic term closed at the end. Agrees with the
/// enumerated value exactly. Optionally reports a maximizing pattern.
double james_norm_dp(const std::vector<double>& coords, Pattern* argmax = nullptr);

} // namespace bq
