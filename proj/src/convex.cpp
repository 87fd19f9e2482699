#include "bq/convex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bq/errors.hpp"
#include "bq/spaces.hpp"

namespace bq {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// A pattern as 1-based coordinate indices; entries past `ambient` read a
// pinned zero (the sentinel slot).
using PatternIndices = std::vector<int>;

Eigen::VectorXd pattern_row(int ambient, int idx) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(ambient);
    if (idx >= 1 && idx <= ambient) row[idx - 1] = 1.0;
    return row;
}

// Difference map of a pattern, scaled so that ||A_P x||_2 <= ||x||_J for
// every x on the section. Rows: consecutive differences plus the closing
// cyclic term.
Eigen::MatrixXd pattern_map(int ambient, const PatternIndices& p) {
    const int m = static_cast<int>(p.size());
    Eigen::MatrixXd a(m, ambient);
    for (int r = 0; r < m; ++r) {
        const int from = p[r];
        const int to = p[(r + 1) % m];
        a.row(r) = kInvSqrt2 * (pattern_row(ambient, from) - pattern_row(ambient, to)).transpose();
    }
    return a;
}

PatternIndices full_cycle(int ambient) {
    PatternIndices p(ambient + 1);
    std::iota(p.begin(), p.end(), 1);
    return p;
}

double james_norm_of(const Eigen::VectorXd& x, Pattern* argmax = nullptr) {
    std::vector<double> coords(x.data(), x.data() + x.size());
    return james_norm_dp(coords, argmax);
}

struct AtomSet {
    int ambient = 0;
    Eigen::MatrixXd basis; // ambient x d
    std::vector<PatternIndices> patterns;
    std::vector<Eigen::MatrixXd> quadratics; // d x d, one per pattern
    std::vector<double> weights;

    int dim() const { return static_cast<int>(basis.cols()); }

    void add(const PatternIndices& p, double weight) {
        const Eigen::MatrixXd g = pattern_map(ambient, p) * basis;
        patterns.push_back(p);
        quadratics.push_back(g.transpose() * g);
        weights.push_back(weight);
    }

    int find(const PatternIndices& p) const {
        for (size_t i = 0; i < patterns.size(); ++i)
            if (patterns[i] == p) return static_cast<int>(i);
        return -1;
    }

    Eigen::MatrixXd mix() const {
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim(), dim());
        for (size_t i = 0; i < quadratics.size(); ++i)
            if (weights[i] > 0.0) q += weights[i] * quadratics[i];
        return q;
    }

    // Drop negligible atoms, renormalizing so the mix stays a convex
    // combination. The anchor (index 0) is never dropped.
    void prune() {
        double kept = 0.0;
        size_t w = 0;
        for (size_t i = 0; i < patterns.size(); ++i) {
            if (i == 0 || weights[i] > 1e-16) {
                patterns[w] = patterns[i];
                quadratics[w] = quadratics[i];
                weights[w] = weights[i];
                kept += weights[i];
                ++w;
            }
        }
        patterns.resize(w);
        quadratics.resize(w);
        weights.resize(w);
        if (kept > 0.0)
            for (double& x : weights) x /= kept;
    }
};

// phi(Q) = f^T Q^{-1} f. Returns +inf on factorization failure (treated
// as an unusable step during line search).
double mix_value(const Eigen::MatrixXd& q, const Eigen::VectorXd& f, Eigen::VectorXd* solution) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(q);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd y = ldlt.solve(f);
    const double value = f.dot(y);
    if (!std::isfinite(value) || value < 0.0)
        return std::numeric_limits<double>::infinity();
    if (solution) *solution = y;
    return value;
}

// Golden-section minimization of a convex 1-d function on [lo, hi].
template <typename F>
double golden_min(F&& f, double lo, double hi, int iters) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

} // namespace

double uniform_pm1(std::uint64_t& state) {
    // splitmix64 step; top 53 bits to a double in [0,1).
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    const double u = static_cast<double>(z >> 11) * 0x1p-53;
    return 2.0 * u - 1.0;
}

SupportResult james_support_full(int ambient, const std::vector<double>& f,
                                 const Eigen::MatrixXd* subspace,
                                 const SupportSolveOptions& options) {
    if (ambient < 1) throw InputError("james section needs at least one slot");
    if (ambient > budgets().james_dim)
        throw BudgetError("james support solve over dimension " + std::to_string(ambient) +
                          " exceeds the budget");

    AtomSet atoms;
    atoms.ambient = ambient;
    atoms.basis = subspace ? *subspace : Eigen::MatrixXd::Identity(ambient, ambient);
    if (atoms.basis.rows() != ambient) throw InputError("subspace has wrong row count");

    Eigen::VectorXd ambient_f = Eigen::VectorXd::Zero(ambient);
    for (int i = 0; i < ambient && i < static_cast<int>(f.size()); ++i) ambient_f[i] = f[i];
    const Eigen::VectorXd reduced_f = atoms.basis.transpose() * ambient_f;

    SupportResult result;
    result.maximizer = Eigen::VectorXd::Zero(ambient);
    if (reduced_f.norm() == 0.0) {
        result.enclosure = Interval::exact(0.0);
        return result;
    }

    atoms.add(full_cycle(ambient), 1.0);

    double best_lower = 0.0;
    Eigen::VectorXd best_point = Eigen::VectorXd::Zero(ambient);
    double best_upper = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const Eigen::MatrixXd q = atoms.mix();
        Eigen::VectorXd y;
        const double phi = mix_value(q, reduced_f, &y);
        if (!std::isfinite(phi))
            throw SolverError("james support solve lost positive definiteness");

        const double upper = std::sqrt(phi);
        best_upper = std::min(best_upper, upper);

        const Eigen::VectorXd x = atoms.basis * y;
        Pattern worst;
        const double x_norm = james_norm_of(x, &worst);
        if (x_norm > 0.0) {
            const double lower = phi / x_norm;
            if (lower > best_lower) {
                best_lower = lower;
                best_point = x / x_norm;
            }
        }

        const double gap = best_upper - best_lower;
        result.iterations = iter;
        if (gap <= options.gap_tol) break;
        if (iter + 1 == options.max_iterations) {
            if (gap <= options.width_requirement) break;
            throw SolverError("james support solve stalled at gap " + std::to_string(gap));
        }

        int target = atoms.find(worst.indices);
        if (target < 0) {
            atoms.add(worst.indices, 0.0);
            target = static_cast<int>(atoms.patterns.size()) - 1;
        }
        const Eigen::MatrixXd& m_target = atoms.quadratics[target];

        // Frank-Wolfe step toward the most violated pattern atom.
        const double gamma = golden_min(
            [&](double g) {
                return mix_value((1.0 - g) * q + g * m_target, reduced_f, nullptr);
            },
            0.0, 1.0 - 1e-12, 42);
        const double fw_value =
            mix_value((1.0 - gamma) * q + gamma * m_target, reduced_f, nullptr);

        // Pairwise step: transfer weight from the flattest active atom to
        // the target. Curbs zigzagging on low-dimensional optimal faces.
        int away = -1;
        double away_grad = -std::numeric_limits<double>::infinity();
        for (size_t a = 0; a < atoms.patterns.size(); ++a) {
            if (static_cast<int>(a) == target || atoms.weights[a] <= 0.0) continue;
            const double grad = -y.dot(atoms.quadratics[a] * y);
            if (grad > away_grad) {
                away_grad = grad;
                away = static_cast<int>(a);
            }
        }
        double pw_value = std::numeric_limits<double>::infinity();
        double pw_t = 0.0;
        if (away == 0) {
            // Never drain the anchor completely; it guarantees positive
            // definiteness of the mix.
            if (atoms.weights[0] <= 2e-13) away = -1;
        }
        if (away >= 0) {
            const Eigen::MatrixXd shift = m_target - atoms.quadratics[away];
            const double t_max = atoms.weights[away] - (away == 0 ? 1e-13 : 0.0);
            pw_t = golden_min(
                [&](double t) { return mix_value(q + t * shift, reduced_f, nullptr); }, 0.0,
                t_max, 42);
            pw_value = mix_value(q + pw_t * shift, reduced_f, nullptr);
        }

        if (pw_value < fw_value) {
            atoms.weights[away] -= pw_t;
            atoms.weights[target] += pw_t;
        } else {
            for (double& w : atoms.weights) w *= (1.0 - gamma);
            atoms.weights[target] += gamma;
        }

        if (iter % 16 == 15) {
            atoms.prune();
            // Keep the anchor barely alive so the mix stays positive
            // definite; still an exact convex combination.
            if (atoms.weights[0] < 1e-13) {
                const double eps = 1e-12;
                for (double& w : atoms.weights) w *= (1.0 - eps);
                atoms.weights[0] += eps;
            }
        }
    }

    result.enclosure = {best_lower, best_upper};
    result.maximizer = best_point;
    if (result.enclosure.width() > options.width_requirement)
        throw SolverError("james support enclosure width " +
                          std::to_string(result.enclosure.width()) + " exceeds the requirement");
    return result;
}

Interval james_support(int ambient, const std::vector<double>& f,
                       const Eigen::MatrixXd* subspace, const SupportSolveOptions& options) {
    return james_support_full(ambient, f, subspace, options).enclosure;
}

namespace {

// Supergradient of the James norm at z (nonzero), via a maximizing pattern.
Eigen::VectorXd james_norm_supergradient(const Eigen::VectorXd& z) {
    Pattern p;
    const double n = james_norm_of(z, &p);
    const int ambient = static_cast<int>(z.size());
    if (n == 0.0 || p.indices.empty()) return Eigen::VectorXd::Zero(ambient);
    const Eigen::MatrixXd a = pattern_map(ambient, p.indices);
    const Eigen::VectorXd az = a * z;
    return a.transpose() * (az / az.norm());
}

std::vector<Eigen::VectorXd> ascent_seeds(int ambient, std::uint64_t seed, int random_starts) {
    std::vector<Eigen::VectorXd> seeds;
    for (int i = 0; i < ambient; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(ambient);
        e[i] = 1.0;
        seeds.push_back(e);
    }
    for (int lo = 0; lo < ambient; lo += std::max(1, ambient / 4)) {
        Eigen::VectorXd seg = Eigen::VectorXd::Zero(ambient);
        for (int i = lo; i < ambient; ++i) seg[i] = 1.0;
        seeds.push_back(seg);
    }
    Eigen::VectorXd alt(ambient);
    for (int i = 0; i < ambient; ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
    seeds.push_back(alt);
    std::uint64_t state = seed * 0x9e3779b97f4a7c15ull + 1;
    for (int s = 0; s < random_starts; ++s) {
        Eigen::VectorXd r(ambient);
        for (int i = 0; i < ambient; ++i) r[i] = uniform_pm1(state);
        seeds.push_back(r);
    }
    return seeds;
}

} // namespace

double james_diag_opnorm_lower(int ambient, const std::vector<double>& w,
                               const AscentOptions& options) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(ambient);
    for (int i = 0; i < ambient && i < static_cast<int>(w.size()); ++i) diag[i] = w[i];

    double best = 0.0;
    for (Eigen::VectorXd x : ascent_seeds(ambient, options.seed, options.starts)) {
        double den = james_norm_of(x);
        if (den == 0.0) continue;
        double ratio = james_norm_of(diag.asDiagonal() * x) / den;
        best = std::max(best, ratio);
        double step = 0.5;
        for (int it = 0; it < options.steps; ++it) {
            const Eigen::VectorXd wx = diag.asDiagonal() * x;
            const double num = james_norm_of(wx);
            if (num == 0.0) break;
            const Eigen::VectorXd gn = diag.asDiagonal() * james_norm_supergradient(wx);
            const Eigen::VectorXd gd = james_norm_supergradient(x);
            Eigen::VectorXd dir = (gn * den - num * gd) / (den * den);
            const double dn = dir.norm();
            if (dn < 1e-14) break;
            dir /= dn;
            const Eigen::VectorXd cand = x + step * dir;
            const double cden = james_norm_of(cand);
            if (cden == 0.0) { step *= 0.5; continue; }
            const double cratio = james_norm_of(diag.asDiagonal() * cand) / cden;
            if (cratio > ratio + 1e-15) {
                x = cand / cden;
                den = 1.0;
                ratio = cratio;
                best = std::max(best, ratio);
            } else {
                step *= 0.6;
                if (step < 1e-10) break;
            }
        }
    }
    return best;
}

bool james_mask_contractive(int ambient, int lo, int hi) {
    if (lo < 1 || hi > ambient || lo > hi) throw InputError("bad mask window");
    const int width = hi - lo + 1;
    if (width > 10) return false;

    Eigen::VectorXd mask = Eigen::VectorXd::Zero(ambient);
    for (int i = lo; i <= hi; ++i) mask[i - 1] = 1.0;
    const Eigen::MatrixXd projector = mask.asDiagonal();

    // Masked-vector patterns: any window subset, optionally extended by a
    // pinned zero index. The pinned index may sit on either side of the
    // window; both placements must be matched by a full-space pattern.
    const unsigned top = 1u << width;
    for (unsigned bits = 1; bits < top; ++bits) {
        PatternIndices inside;
        for (int i = 0; i < width; ++i)
            if (bits & (1u << i)) inside.push_back(lo + i);

        std::vector<std::pair<PatternIndices, PatternIndices>> trials;
        if (inside.size() >= 2) {
            trials.push_back({inside, inside}); // no pinned index
        }
        // pinned past the window vs. matched far sentinel
        PatternIndices with_tail = inside;
        with_tail.push_back(hi + 1);
        PatternIndices matched_tail = inside;
        matched_tail.push_back(ambient + 1);
        trials.push_back({with_tail, matched_tail});
        if (lo > 1) {
            PatternIndices with_head;
            with_head.push_back(lo - 1);
            with_head.insert(with_head.end(), inside.begin(), inside.end());
            trials.push_back({with_head, matched_tail});
        }

        for (const auto& [masked_pattern, full_pattern] : trials) {
            if (masked_pattern.size() < 2) continue;
            const Eigen::MatrixXd lhs = pattern_map(ambient, masked_pattern) * projector;
            const Eigen::MatrixXd rhs = pattern_map(ambient, full_pattern);
            // Row-for-row match up to cyclic rotation: compare the induced
            // quadratic forms instead of raw rows.
            const Eigen::MatrixXd diff =
                lhs.transpose() * lhs - rhs.transpose() * rhs;
            if (diff.cwiseAbs().maxCoeff() > 1e-12) return false;
        }
    }
    return true;
}

Interval james_dist_to_head_span(int ambient, const std::vector<double>& f, int head,
                                 const SupportSolveOptions& options) {
    if (head < 0 || head >= ambient) throw InputError("head count out of range");

    Eigen::VectorXd ambient_f = Eigen::VectorXd::Zero(ambient);
    for (int i = 0; i < ambient && i < static_cast<int>(f.size()); ++i) ambient_f[i] = f[i];

    // Certified lower bound: any tail-supported point x in the unit ball
    // pairs to <f, x> regardless of the head part subtracted from f.
    const int tail = ambient - head;
    Eigen::MatrixXd tail_cols = Eigen::MatrixXd::Zero(ambient, tail);
    for (int j = 0; j < tail; ++j) tail_cols(head + j, j) = 1.0;
    const Interval tail_value =
        james_support(ambient, f, &tail_cols, options);

    if (head == 0) return tail_value;

    auto residual_upper = [&](const Eigen::VectorXd& g, Eigen::VectorXd* maximizer) {
        std::vector<double> r(ambient, 0.0);
        for (int i = 0; i < ambient; ++i) r[i] = ambient_f[i] - (i < head ? g[i] : 0.0);
        const SupportResult s = james_support_full(ambient, r, nullptr, options);
        if (maximizer) *maximizer = s.maximizer;
        return s.enclosure.hi;
    };

    Eigen::VectorXd g = ambient_f.head(head);
    Eigen::VectorXd x_hat;
    double h = residual_upper(g, &x_hat);
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXd dir = x_hat.head(head);
        if (dir.norm() < 1e-13) break;
        const double span = std::max(1.0, 2.0 * h);
        const double t = golden_min(
            [&](double s) { return residual_upper(g + s * dir, nullptr); }, 0.0, span, 40);
        const double cand = residual_upper(g + t * dir, &x_hat);
        if (cand < h - 1e-12) {
            g += t * dir;
            h = cand;
        } else {
            break;
        }
    }

    Interval out{tail_value.lo, std::max(h, tail_value.lo)};
    if (out.width() > 10 * options.width_requirement)
        throw SolverError("distance descent stalled at width " + std::to_string(out.width()));
    return out;
}

double james_sphere_min_descent(const Eigen::MatrixXd& columns, bool l1_model,
                                const AscentOptions& options) {
    const int m = static_cast<int>(columns.cols());
    auto model_norm = [&](const Eigen::VectorXd& z) {
        return l1_model ? z.lpNorm<1>() : z.lpNorm<Eigen::Infinity>();
    };
    auto objective = [&](const Eigen::VectorXd& z) {
        return james_norm_of(columns * z) / model_norm(z);
    };

    std::uint64_t state = options.seed * 0x9e3779b97f4a7c15ull + 7;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < options.starts + m; ++s) {
        Eigen::VectorXd z(m);
        if (s < m) {
            z.setZero();
            z[s] = 1.0;
        } else {
            for (int i = 0; i < m; ++i) z[i] = uniform_pm1(state);
        }
        if (model_norm(z) == 0.0) continue;
        z /= model_norm(z);
        double value = objective(z);
        double step = 0.5;
        for (int it = 0; it < options.steps; ++it) {
            Eigen::VectorXd probe(m);
            for (int i = 0; i < m; ++i) probe[i] = uniform_pm1(state);
            Eigen::VectorXd cand = z + step * probe;
            if (model_norm(cand) == 0.0) continue;
            cand /= model_norm(cand);
            const double cv = objective(cand);
            if (cv < value) {
                z = cand;
                value = cv;
            } else {
                step *= 0.92;
            }
        }
        best = std::min(best, value);
    }
    return best;
}

} // namespace bq
