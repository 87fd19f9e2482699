#include "bq/embeddings.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include "json.hpp"

#include "bq/convex.hpp"
#include "bq/errors.hpp"

namespace bq {

namespace {

Coeffs block_vector(const SpaceDescriptor& space, const Block& b) {
    std::vector<double> v(space.slots(), 0.0);
    for (int i = b.start; i <= b.end; ++i) v[i - 1] = b.coeffs.at(i - b.start);
    return Coeffs(std::move(v));
}

Eigen::MatrixXd block_matrix(const BlockSequence& bs) {
    const int slots = bs.space.slots();
    const int m = static_cast<int>(bs.blocks.size());
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(slots, m);
    for (int j = 0; j < m; ++j) {
        const Coeffs v = block_vector(bs.space, bs.blocks[j]);
        for (int i = 0; i < slots; ++i) u(i, j) = v.at(i);
    }
    return u;
}

void check_blocks(const BlockSequence& bs) {
    if (bs.blocks.empty()) throw InputError("block sequence is empty");
    int prev_end = 0;
    for (size_t j = 0; j < bs.blocks.size(); ++j) {
        const Block& b = bs.blocks[j];
        if (b.start < 1 || b.end < b.start || b.end > bs.space.slots())
            throw InputError("block " + std::to_string(j + 1) + " has a bad window");
        if (b.start <= prev_end)
            throw InputError("block " + std::to_string(j + 1) +
                             " overlaps or disorders the previous support");
        if (b.coeffs.size() > b.end - b.start + 1)
            throw InputError("block " + std::to_string(j + 1) + " coefficients exceed its window");
        if (b.coeffs.last_support() == 0)
            throw InputError("block " + std::to_string(j + 1) + " is zero");
        prev_end = b.end;
    }
}

double pair(const Functional& f, const Coeffs& x) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += f.at(i) * x.at(i);
    return s;
}

// max of ||z||_1 (or ||z||_inf) over the polytope {z : |rows_j . z| <= 1}.
// Every vertex solves an invertible m-row subsystem at a sign vector, so
// the enumeration is exhaustive; the polytope is bounded because the rows
// have full column rank.
double polytope_model_max(const Eigen::MatrixXd& rows, bool l1_objective) {
    const int r = static_cast<int>(rows.rows());
    const int m = static_cast<int>(rows.cols());
    if (r < m) throw InputError("degenerate block polytope");
    double best = 0.0;
    bool found = false;
    std::vector<int> pick(m);
    for (int i = 0; i < m; ++i) pick[i] = i;
    while (true) {
        Eigen::MatrixXd sub(m, m);
        for (int i = 0; i < m; ++i) sub.row(i) = rows.row(pick[i]);
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        if (lu.isInvertible()) {
            const unsigned top = 1u << m;
            for (unsigned bits = 0; bits < top; ++bits) {
                Eigen::VectorXd rhs(m);
                for (int i = 0; i < m; ++i) rhs[i] = (bits & (1u << i)) ? -1.0 : 1.0;
                const Eigen::VectorXd z = lu.solve(rhs);
                if ((rows * z).lpNorm<Eigen::Infinity>() > 1.0 + 1e-9) continue;
                found = true;
                best = std::max(best, l1_objective ? z.lpNorm<1>() : z.lpNorm<Eigen::Infinity>());
            }
        }
        int i = m - 1;
        while (i >= 0 && pick[i] == r - m + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
    if (!found) throw SolverError("no vertex of the block polytope was feasible");
    return best;
}

// Exact lower frame bound over the model sphere for polyhedral kernels:
// 1 / max{ ||z||_model : ||U z|| <= 1 }.
Estimate exact_sphere_min(const BlockSequence& bs, const Eigen::MatrixXd& u, bool l1_model) {
    const SpaceDescriptor& space = bs.space;
    if (space.kind == SpaceKind::L1) {
        // Disjoint supports make the image norm separable, so the sphere
        // minimum (either model) puts all weight on the smallest block.
        double worst = std::numeric_limits<double>::infinity();
        for (const Block& b : bs.blocks)
            worst = std::min(worst, norm(space, block_vector(space, b)));
        return Estimate::exact(worst, "disjoint-support-minimum");
    }
    const int slots = space.slots();
    // rows of M U, where ||x|| = ||M x||_inf
    Eigen::MatrixXd rows(slots, u.cols());
    for (int j = 0; j < u.cols(); ++j) {
        std::vector<double> col(slots, 0.0);
        for (int i = 0; i < slots; ++i) col[i] = u(i, j);
        const std::vector<double> img = max_form(space, Coeffs(col));
        for (int i = 0; i < slots; ++i) rows(i, j) = img[i];
    }
    const double reach = polytope_model_max(rows, l1_model);
    Estimate e = Estimate::exact(1.0 / reach, "preimage-vertex-enumeration");
    return e;
}

} // namespace

BlockReport validate_blocks(const BlockSequence& bs, const Functional* witness) {
    check_blocks(bs);
    BlockReport report;
    double c = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < bs.blocks.size(); ++j) {
        const Coeffs v = block_vector(bs.space, bs.blocks[j]);
        const double nv = norm(bs.space, v);
        report.norms.push_back(nv);
        if (nv > 1.0 + 1e-12) report.over_unit_ball.push_back(static_cast<int>(j + 1));
        if (witness) c = std::min(c, pair(*witness, v));
    }
    if (witness) report.separation = c;
    return report;
}

EmbeddingCertificate build_l1_embedding(const BlockSequence& bs, const Functional& witness) {
    const BlockReport report = validate_blocks(bs, &witness);
    if (!report.over_unit_ball.empty())
        throw InputError("block " + std::to_string(report.over_unit_ball.front()) +
                         " lies outside the unit ball");
    const Interval wn = dual_norm_enclosure(witness);
    if (wn.lo > 1.0 + 1e-12)
        throw InputError("witness lies outside the dual ball");
    const double c = *report.separation;
    if (!(c > 0.0))
        throw InputError("witness does not separate the blocks: c = " + std::to_string(c));

    EmbeddingCertificate cert;
    cert.model = EmbeddingCertificate::Model::L1;
    cert.block_count = static_cast<int>(bs.blocks.size());
    cert.separation = c;
    cert.construction = "l1-block-embedding";
    cert.source = "unit-vector map onto a separated block sequence";

    double worst = 0.0;
    for (double nv : report.norms) worst = std::max(worst, nv);
    cert.upper = Estimate::exact(worst, "model-vertex-maximum");

    const Eigen::MatrixXd u = block_matrix(bs);
    if (bs.space.polyhedral()) {
        cert.lower = exact_sphere_min(bs, u, /*l1_model=*/true);
    } else {
        cert.lower = Estimate::upper(james_sphere_min_descent(u, /*l1_model=*/true, {}),
                                     "heuristic-sphere-descent");
    }

    BasisSection section(bs.space);
    cert.ku = unconditional_constant(section);
    cert.analytic_lower = c / cert.ku.value;
    cert.analytic_certified =
        bs.space.polyhedral() && cert.ku.direction == Direction::Exact;
    cert.alpha_lower = cert.upper.value > 0 ? cert.lower.value / cert.upper.value : 0.0;
    return cert;
}

EmbeddingCertificate build_c0_embedding(const BlockSequence& bs) {
    const BlockReport report = validate_blocks(bs);
    double c = std::numeric_limits<double>::infinity();
    for (double nv : report.norms) c = std::min(c, nv);
    if (!(c > 0.0)) throw InputError("blocks must have positive norm");

    EmbeddingCertificate cert;
    cert.model = EmbeddingCertificate::Model::C0;
    cert.block_count = static_cast<int>(bs.blocks.size());
    cert.separation = c;
    cert.construction = "c0-block-embedding";
    cert.source = "sup-model block map, normalized by the squared unconditional constant";

    const Eigen::MatrixXd u = block_matrix(bs);
    const int m = cert.block_count;

    if (m <= budgets().embed_blocks) {
        // The cube maximum sits at a vertex for any norm.
        double best = 0.0;
        const unsigned top = 1u << m;
        for (unsigned bits = 0; bits < top; ++bits) {
            Eigen::VectorXd t(m);
            for (int i = 0; i < m; ++i) t[i] = (bits & (1u << i)) ? -1.0 : 1.0;
            const Eigen::VectorXd img = u * t;
            best = std::max(best, norm(bs.space, Coeffs(std::vector<double>(
                                                     img.data(), img.data() + img.size()))));
        }
        cert.upper = Estimate::exact(best, "sign-vertex-enumeration");
    } else {
        std::uint64_t state = 99;
        double best = 0.0;
        for (int s = 0; s < 4096; ++s) {
            Eigen::VectorXd t(m);
            for (int i = 0; i < m; ++i) t[i] = uniform_pm1(state) >= 0 ? 1.0 : -1.0;
            const Eigen::VectorXd img = u * t;
            best = std::max(best, norm(bs.space, Coeffs(std::vector<double>(
                                                     img.data(), img.data() + img.size()))));
        }
        cert.upper = Estimate::lower(best, "sampled-sign-vertices");
    }

    if (bs.space.polyhedral()) {
        cert.lower = exact_sphere_min(bs, u, /*l1_model=*/false);
    } else {
        cert.lower = Estimate::upper(james_sphere_min_descent(u, /*l1_model=*/false, {}),
                                     "heuristic-sphere-descent");
    }

    BasisSection section(bs.space);
    cert.ku = unconditional_constant(section);
    cert.analytic_lower = c / cert.ku.value;
    cert.analytic_certified =
        bs.space.polyhedral() && cert.ku.direction == Direction::Exact;
    cert.alpha_lower = cert.upper.value > 0 ? cert.lower.value / cert.upper.value : 0.0;
    return cert;
}

Estimate alpha_lower_bound(const EmbeddingCertificate& cert) {
    if (!(cert.lower.value > 0.0)) throw InputError("degenerate certificate: zero lower frame bound");
    const bool lower_sound = !cert.lower.heuristic() &&
                             (cert.lower.direction == Direction::Exact ||
                              cert.lower.direction == Direction::LowerBound);
    const bool upper_sound = !cert.upper.heuristic() &&
                             (cert.upper.direction == Direction::Exact ||
                              cert.upper.direction == Direction::UpperBound);
    Estimate e;
    e.value = cert.lower.value / cert.upper.value;
    e.direction = Direction::LowerBound;
    e.method = (lower_sound && upper_sound) ? "normalized-frame-ratio"
                                            : "heuristic-normalized-frame-ratio";
    e.params["blocks"] = cert.block_count;
    return e;
}

std::string certificate_json(const EmbeddingCertificate& cert) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["model"] = cert.model == EmbeddingCertificate::Model::L1 ? "l1" : "c0";
    j["blocks"] = cert.block_count;
    auto put = [](const Estimate& e) {
        nlohmann::ordered_json out;
        out["value"] = e.value;
        out["direction"] = to_string(e.direction);
        out["method"] = e.method;
        for (const auto& [k, v] : e.params) out["params"][k] = v;
        return out;
    };
    j["upper"] = put(cert.upper);
    j["lower"] = put(cert.lower);
    j["alpha_lower"] = cert.alpha_lower;
    j["analytic_lower"] = cert.analytic_lower;
    j["analytic_certified"] = cert.analytic_certified;
    j["separation"] = cert.separation;
    j["unconditional_constant"] = put(cert.ku);
    j["construction"] = cert.construction;
    j["source"] = cert.source;
    return j.dump(2);
}

} // namespace bq
