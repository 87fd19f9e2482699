#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bq/bases.hpp"
#include "bq/estimate.hpp"
#include "bq/spaces.hpp"

namespace bq {

/// One block of a block basic sequence: coefficients occupying the
/// 1-based coordinate window [start, end].
struct Block {
    int start = 1;
    int end = 1;
    Coeffs coeffs; // length end - start + 1, positioned at the window
};

/// Nonzero blocks with pairwise disjoint, strictly increasing supports.
struct BlockSequence {
    SpaceDescriptor space;
    std::vector<Block> blocks;
};

struct BlockReport {
    std::vector<double> norms;
    std::optional<double> separation; // c = min_n <witness, u_n>, when a witness is given
    std::vector<int> over_unit_ball;  // 1-based block indices with norm > 1
};

/// Per-block norms and the witness pairing. Throws InputError on
/// overlapping supports or zero blocks.
BlockReport validate_blocks(const BlockSequence& blocks, const Functional* witness = nullptr);

struct EmbeddingCertificate {
    enum class Model { L1, C0 };
    Model model = Model::L1;
    int block_count = 0;
    Estimate upper;         // operator norm of the block map on the model ball
    Estimate lower;         // frame bound: min of ||T z|| over the model sphere
    double alpha_lower = 0; // lower.value / upper.value
    double analytic_lower = 0; // c / Ku on the unnormalized map
    bool analytic_certified = false; // false when Ku itself is only a lower bound
    double separation = 0;  // c
    Estimate ku;            // section unconditional constant used
    std::string construction;
    std::string source;
};

/// The map sending the k-th l1 unit vector to the k-th block. The upper
/// bound max_n ||u_n|| is exact (attained at a model vertex); the lower
/// frame bound is exact for polyhedral kernels via vertex enumeration of
/// the preimage polytope, and a tagged descent value for James.
/// Requires every block in the unit ball and a separating witness with
/// c > 0.
EmbeddingCertificate build_l1_embedding(const BlockSequence& blocks, const Functional& witness);

/// The sup-norm-model certificate: bounds of the block map over the cube,
/// exact by sign enumeration up to the block budget, sampled with
/// explicit tags beyond it. Blocks must be nonzero.
EmbeddingCertificate build_c0_embedding(const BlockSequence& blocks);

/// alpha lower bound in the norm-one convention: lower/upper. Certified
/// LowerBound when the certificate's bounds have sound directions,
/// heuristic otherwise.
Estimate alpha_lower_bound(const EmbeddingCertificate& cert);

std::string certificate_json(const EmbeddingCertificate& cert);

} // namespace bq
