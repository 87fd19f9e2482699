#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bq/bases.hpp"
#include "bq/estimate.hpp"
#include "bq/spaces.hpp"

namespace bq {

/// Windowed Cauchy-defect profile: for n = 1..M-1 the exact value of
/// max_{n <= k < l <= M} ||S_l - S_k||. Nonincreasing in n; each entry is
/// a lower bound for the corresponding unwindowed supremum.
std::vector<double> gap_profile(const SpaceDescriptor& space,
                                const std::vector<Coeffs>& partial_sums);

/// A coefficient sequence whose partial sums stay in the unit ball.
struct WitnessSequence {
    SpaceDescriptor space;
    std::string name;
    std::vector<double> coefficients; // by list position, a_1..a_M
    bool periodic = false;            // window pattern recurs beyond the horizon
    std::string family;               // registry family it witnesses
};

const std::vector<std::string>& bc_witness_names();
WitnessSequence make_bc_witness(const std::string& name, int horizon);

std::vector<Coeffs> partial_sums(const WitnessSequence& w);

/// Certified lower bound for the bounded-completeness defect carried by a
/// witness: the gap-profile value at the mid-horizon anchor. Tagged
/// LowerBound for periodic witnesses, heuristic otherwise. Throws
/// InputError naming the offending index when a partial sum leaves the
/// unit ball.
Estimate bc1_certificate(const WitnessSequence& w);

struct UpperCheckReport {
    bool refuted = false;
    double best_value = 0.0;
    double bound = 0.0;
    std::vector<double> witness_coefficients;
    int window_lo = 0;
    int window_hi = 0;
    long trials = 0;
    std::string note;
};

/// Randomized plus pattern-guided search for a ball-constrained sequence
/// with a block norm above `bound`. NotRefuted is evidence, not proof;
/// the report says so.
UpperCheckReport bc1_upper_check(const SpaceDescriptor& space, double bound, long trials,
                                 std::uint64_t seed = 0);

/// A named dual-ball functional whose tail profile witnesses the
/// shrinking defect.
struct ShWitness {
    std::string name;
    SpaceDescriptor space;
    Functional functional;
    bool partial_sum_frame = false; // tails over the partial-sum basis
    bool eventually_constant = false;
    std::string family;
};

const std::vector<std::string>& sh_witness_names();
ShWitness make_sh_witness(const std::string& name, int dim);

struct ShProfile {
    TailNormProfile profile;
    Estimate summary;
};

/// Tail-norm profile of a dual-ball functional with the final value as
/// summary. The raw-functional overload always marks the summary
/// heuristic; registered witnesses marked eventually-constant get a
/// certified LowerBound. Errors when the functional is certified to lie
/// outside the dual ball.
ShProfile sh_profile(const BasisSection& section, const Functional& f);
ShProfile sh_profile(const BasisSection& section, const ShWitness& witness);

/// Operator norm of P_l - P_k on the section. params["upper_2k"] always
/// carries the triangle-inequality bound from the basis constant.
Estimate block_projection_norm(const BasisSection& section, int k, int l);

} // namespace bq
