#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bq/estimate.hpp"

namespace bq {

struct SupportSolveOptions {
    double gap_tol = 1e-9;          // duality-gap stopping threshold
    double width_requirement = 1e-7; // hard contract on the returned enclosure
    int max_iterations = 100000;
};

struct SupportResult {
    Interval enclosure;
    Eigen::VectorXd maximizer; // feasible point attaining enclosure.lo
    int iterations = 0;
};

/// Support function of the James unit ball on a section with `ambient`
/// coordinate slots: sup{ <f, x> : ||x||_J <= 1 }, optionally restricted
/// to the column span of `subspace` (identity when null).
///
/// Runs Frank-Wolfe on the dual side: the dual ball is the convex hull of
/// the pattern-mapped Euclidean balls, and each step adds the pattern
/// atom most violated by the current primal iterate. Every iterate yields
/// a certified two-sided enclosure; throws SolverError when the width
/// requirement cannot be certified within the iteration cap.
SupportResult james_support_full(int ambient, const std::vector<double>& f,
                                 const Eigen::MatrixXd* subspace = nullptr,
                                 const SupportSolveOptions& options = {});

Interval james_support(int ambient, const std::vector<double>& f,
                       const Eigen::MatrixXd* subspace = nullptr,
                       const SupportSolveOptions& options = {});

struct AscentOptions {
    int starts = 16;
    int steps = 160;
    std::uint64_t seed = 0;
};

/// Multi-start supergradient ascent on ||diag(w) x||_J / ||x||_J.
/// Every evaluation is exact, so the returned value is a certified lower
/// bound for the operator norm of diag(w) on the section.
double james_diag_opnorm_lower(int ambient, const std::vector<double>& w,
                               const AscentOptions& options = {});

/// Enumeration check that the coordinate window lo..hi (1-based,
/// inclusive) is a contractive mask on the James section: every pattern
/// of the masked vector is matched, row for row, by a full-space pattern.
/// Window sizes above 10 are not enumerated and return false.
bool james_mask_contractive(int ambient, int lo, int hi);

/// d(f, span{first `head` biorthogonal functionals}) on a James section.
/// Lower bound from the tail-restricted support function, upper bound by
/// alternating descent over the head coefficients.
Interval james_dist_to_head_span(int ambient, const std::vector<double>& f, int head,
                                 const SupportSolveOptions& options = {});

/// Multi-start descent minimizing ||U z||_J over the unit sphere of the
/// model norm (l1 when `l1_model`, sup otherwise). The result is an upper
/// bound on the true sphere minimum.
double james_sphere_min_descent(const Eigen::MatrixXd& columns, bool l1_model,
                                const AscentOptions& options = {});

/// Deterministic uniform double in [-1, 1) from raw generator bits.
double uniform_pm1(std::uint64_t& state);

} // namespace bq
