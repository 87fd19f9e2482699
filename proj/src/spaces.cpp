#include "bq/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "bq/convex.hpp"

namespace bq {

const Budgets& budgets() {
    static const Budgets instance = [] {
        Budgets b;
        if (const char* env = std::getenv("BQ_BUDGET")) {
            const int v = std::atoi(env);
            if (v > 0) {
                b.james_dim = v;
                b.sign_enum = v;
            }
        }
        return b;
    }();
    return instance;
}

std::string to_string(Direction d) {
    switch (d) {
        case Direction::Exact: return "exact";
        case Direction::LowerBound: return "lower-bound";
        case Direction::UpperBound: return "upper-bound";
    }
    return "?";
}

Interval operator*(const Interval& a, const Interval& b) {
    // Nonnegative quantities only; infinities propagate.
    return {a.lo * b.lo, a.hi * b.hi};
}

Interval pow(const Interval& a, int exponent) {
    Interval r = Interval::exact(1.0);
    for (int i = 0; i < exponent; ++i) r = r * a;
    return r;
}

SpaceDescriptor::SpaceDescriptor(SpaceKind k, int d) : kind(k), dim(d) {
    if (dim < 1) throw InputError("section dimension must be positive");
    if (kind == SpaceKind::James && dim > budgets().james_dim) {
        throw BudgetError("james section dimension " + std::to_string(dim) +
                          " exceeds the pattern budget " + std::to_string(budgets().james_dim));
    }
}

SpaceDescriptor SpaceDescriptor::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw InputError("space descriptor must look like kind:dim, got '" + std::string(text) + "'");
    const std::string_view name = text.substr(0, colon);
    const std::string dims(text.substr(colon + 1));
    int d = 0;
    try {
        size_t used = 0;
        d = std::stoi(dims, &used);
        if (used != dims.size()) throw std::invalid_argument(dims);
    } catch (const std::exception&) {
        throw InputError("bad section dimension '" + dims + "'");
    }
    SpaceKind k;
    if (name == "c0") k = SpaceKind::C0;
    else if (name == "cunit") k = SpaceKind::CWithUnit;
    else if (name == "l1") k = SpaceKind::L1;
    else if (name == "summing") k = SpaceKind::SummingC0;
    else if (name == "james") k = SpaceKind::James;
    else throw InputError("unknown space kind '" + std::string(name) + "'");
    return SpaceDescriptor(k, d);
}

std::string SpaceDescriptor::to_string() const {
    const char* name = "";
    switch (kind) {
        case SpaceKind::C0: name = "c0"; break;
        case SpaceKind::CWithUnit: name = "cunit"; break;
        case SpaceKind::L1: name = "l1"; break;
        case SpaceKind::SummingC0: name = "summing"; break;
        case SpaceKind::James: name = "james"; break;
    }
    return std::string(name) + ":" + std::to_string(dim);
}

int Coeffs::last_support() const {
    for (int i = size(); i > 0; --i)
        if (values[i - 1] != 0.0) return i;
    return 0;
}

Coeffs operator-(const Coeffs& a, const Coeffs& b) {
    std::vector<double> v(std::max(a.values.size(), b.values.size()));
    for (size_t i = 0; i < v.size(); ++i) v[i] = a.at(static_cast<int>(i)) - b.at(static_cast<int>(i));
    return Coeffs(std::move(v));
}

Coeffs operator+(const Coeffs& a, const Coeffs& b) {
    std::vector<double> v(std::max(a.values.size(), b.values.size()));
    for (size_t i = 0; i < v.size(); ++i) v[i] = a.at(static_cast<int>(i)) + b.at(static_cast<int>(i));
    return Coeffs(std::move(v));
}

Coeffs operator*(double s, const Coeffs& a) {
    std::vector<double> v(a.values);
    for (double& x : v) x *= s;
    return Coeffs(std::move(v));
}

namespace {

void check_length(const SpaceDescriptor& space, int len, const char* what) {
    if (len > space.slots())
        throw InputError(std::string(what) + " has " + std::to_string(len) +
                         " coefficients but the section has " + std::to_string(space.slots()) + " slots");
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double sum_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

// Cyclic sum of squared differences of `vals` along the index subset
// encoded by `subset` (bitmask, bit i = candidate index i). Sequential
// left-to-right accumulation, cyclic term closed at the end.
double cycle_value(const std::vector<double>& vals, unsigned subset) {
    double total = 0.0;
    double first = 0.0;
    double prev = 0.0;
    bool have_first = false;
    for (size_t i = 0; i < vals.size(); ++i) {
        if (!(subset & (1u << i))) continue;
        if (!have_first) {
            first = vals[i];
            have_first = true;
        } else {
            const double d = prev - vals[i];
            total += d * d;
        }
        prev = vals[i];
    }
    const double close = prev - first;
    return total + close * close;
}

// Candidate values for the James enumeration/DP: coordinates up to the
// last support index, then one zero sentinel.
std::vector<double> james_candidates(const std::vector<double>& coords) {
    int last = 0;
    for (int i = static_cast<int>(coords.size()); i > 0; --i)
        if (coords[i - 1] != 0.0) { last = i; break; }
    std::vector<double> vals(coords.begin(), coords.begin() + last);
    vals.push_back(0.0);
    return vals;
}

} // namespace

double james_norm_enumerated(const std::vector<double>& coords) {
    const std::vector<double> vals = james_candidates(coords);
    const int k = static_cast<int>(vals.size());
    if (k <= 1) return 0.0;
    if (k > budgets().james_dim + 1)
        throw BudgetError("james enumeration over " + std::to_string(k) + " indices exceeds the budget");
    double best = 0.0;
    const unsigned top = 1u << k;
    for (unsigned subset = 0; subset < top; ++subset) {
        if (std::popcount(subset) < 2) continue;
        best = std::max(best, cycle_value(vals, subset));
    }
    return std::sqrt(best * 0.5);
}

double james_norm_dp(const std::vector<double>& coords, Pattern* argmax) {
    const std::vector<double> vals = james_candidates(coords);
    const int k = static_cast<int>(vals.size());
    if (argmax) argmax->indices.clear();
    if (k <= 1) return 0.0;
    if (k > budgets().james_dim + 1)
        throw BudgetError("james pattern index range " + std::to_string(k) + " exceeds the budget");

    // best[f][l]: max path sum of squared differences over increasing
    // index chains starting at f and ending at l (f <= l).
    std::vector<std::vector<double>> best(k, std::vector<double>(k, 0.0));
    std::vector<std::vector<int>> parent(k, std::vector<int>(k, -1));
    for (int f = 0; f < k; ++f) {
        for (int l = f + 1; l < k; ++l) {
            double b = -1.0;
            int arg = -1;
            for (int m = f; m < l; ++m) {
                const double d = vals[m] - vals[l];
                const double cand = best[f][m] + d * d;
                if (cand > b) {
                    b = cand;
                    arg = m;
                }
            }
            best[f][l] = b;
            parent[f][l] = arg;
        }
    }

    double top = 0.0;
    int bf = -1, bl = -1;
    for (int f = 0; f < k; ++f) {
        for (int l = f + 1; l < k; ++l) {
            const double close = vals[l] - vals[f];
            const double cand = best[f][l] + close * close;
            if (cand > top) {
                top = cand;
                bf = f;
                bl = l;
            }
        }
    }
    if (argmax && bf >= 0) {
        std::vector<int> chain;
        for (int cur = bl; cur != bf; cur = parent[bf][cur]) chain.push_back(cur);
        chain.push_back(bf);
        std::reverse(chain.begin(), chain.end());
        for (int& idx : chain) idx += 1; // to 1-based coordinates
        argmax->indices = std::move(chain);
    }
    return std::sqrt(top * 0.5);
}

double norm(const SpaceDescriptor& space, const Coeffs& x) {
    check_length(space, x.size(), "coefficient vector");
    switch (space.kind) {
        case SpaceKind::C0:
            return sup_abs(x.values);
        case SpaceKind::L1:
            return sum_abs(x.values);
        case SpaceKind::CWithUnit:
        case SpaceKind::SummingC0:
            return sup_abs(max_form(space, x));
        case SpaceKind::James: {
            const int last = x.last_support();
            // Exhaustive enumeration is the reference path below dimension 12.
            if (last < 12) return james_norm_enumerated(x.values);
            return james_norm_dp(x.values);
        }
    }
    throw InputError("unreachable kernel");
}

std::vector<Pattern> james_patterns(const std::vector<int>& support) {
    if (support.empty()) throw InputError("pattern support must be nonempty");
    if (static_cast<int>(support.size()) > budgets().james_dim)
        throw BudgetError("pattern support of size " + std::to_string(support.size()) +
                          " exceeds the budget " + std::to_string(budgets().james_dim));
    std::vector<int> universe(support);
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    for (int i : universe)
        if (i < 1) throw InputError("pattern indices must be positive");
    universe.push_back(universe.back() + 1);

    const int k = static_cast<int>(universe.size());
    std::vector<Pattern> out;
    std::vector<int> pick;
    // Subsets by size, then lexicographic within each size.
    for (int sz = 2; sz <= k; ++sz) {
        pick.assign(sz, 0);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            Pattern p;
            p.indices.reserve(sz);
            for (int i : pick) p.indices.push_back(universe[i]);
            out.push_back(std::move(p));
            int i = sz - 1;
            while (i >= 0 && pick[i] == k - sz + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < sz; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return out;
}

std::vector<double> max_form(const SpaceDescriptor& space, const Coeffs& x) {
    check_length(space, x.size(), "coefficient vector");
    const int n = space.slots();
    std::vector<double> out(n, 0.0);
    switch (space.kind) {
        case SpaceKind::C0:
            for (int i = 0; i < n; ++i) out[i] = x.at(i);
            return out;
        case SpaceKind::SummingC0: {
            double suffix = 0.0;
            for (int i = n - 1; i >= 0; --i) {
                suffix += x.at(i);
                out[i] = suffix;
            }
            return out;
        }
        case SpaceKind::CWithUnit: {
            out[0] = x.at(0);
            for (int i = 1; i < n; ++i) out[i] = x.at(0) + x.at(i);
            return out;
        }
        default:
            throw InputError("max_form is defined for the max-type kernels only");
    }
}

std::vector<double> max_form_dual(const SpaceDescriptor& space, const std::vector<double>& f) {
    check_length(space, static_cast<int>(f.size()), "functional");
    const int n = space.slots();
    auto fat = [&](int i) { return i < static_cast<int>(f.size()) ? f[i] : 0.0; };
    std::vector<double> out(n, 0.0);
    switch (space.kind) {
        case SpaceKind::C0:
            for (int i = 0; i < n; ++i) out[i] = fat(i);
            return out;
        case SpaceKind::SummingC0:
            // Backward differences: (M^{-T} f)_i = f_i - f_{i-1}.
            for (int i = 0; i < n; ++i) out[i] = fat(i) - (i > 0 ? fat(i - 1) : 0.0);
            return out;
        case SpaceKind::CWithUnit: {
            double rest = 0.0;
            for (int i = 1; i < n; ++i) {
                out[i] = fat(i);
                rest += fat(i);
            }
            out[0] = fat(0) - rest;
            return out;
        }
        default:
            throw InputError("max_form_dual is defined for the max-type kernels only");
    }
}

Interval dual_norm_enclosure(const Functional& f) {
    check_length(f.space, static_cast<int>(f.values.size()), "functional");
    switch (f.space.kind) {
        case SpaceKind::C0:
        case SpaceKind::SummingC0:
        case SpaceKind::CWithUnit:
            return Interval::exact(sum_abs(max_form_dual(f.space, f.values)));
        case SpaceKind::L1:
            return Interval::exact(sup_abs(f.values));
        case SpaceKind::James:
            return james_support(f.space.slots(), f.values);
    }
    throw InputError("unreachable kernel");
}

double dual_norm(const Functional& f) { return dual_norm_enclosure(f).mid(); }

std::vector<Functional> dual_extreme_points(const SpaceDescriptor& space) {
    if (!space.polyhedral())
        throw InputError("dual extreme points are unsupported for the james kernel");
    const int n = space.slots();
    std::vector<Functional> out;
    auto push = [&](std::vector<double> v) {
        out.emplace_back(space, std::move(v));
    };
    switch (space.kind) {
        case SpaceKind::C0:
            for (int i = 0; i < n; ++i) {
                std::vector<double> v(n, 0.0);
                v[i] = 1.0;
                push(v);
                v[i] = -1.0;
                push(std::move(v));
            }
            return out;
        case SpaceKind::SummingC0:
            for (int k = 0; k < n; ++k) {
                std::vector<double> v(n, 0.0);
                for (int i = k; i < n; ++i) v[i] = 1.0;
                push(v);
                for (int i = k; i < n; ++i) v[i] = -1.0;
                push(std::move(v));
            }
            return out;
        case SpaceKind::CWithUnit:
            for (int k = 0; k < n; ++k) {
                std::vector<double> v(n, 0.0);
                v[0] = 1.0;
                if (k > 0) v[k] = 1.0;
                push(v);
                for (double& c : v) c = -c;
                push(std::move(v));
            }
            return out;
        case SpaceKind::L1: {
            if (n > budgets().sign_enum)
                throw BudgetError("l1 dual vertex enumeration needs 2^" + std::to_string(n) +
                                  " sign vectors, over the budget");
            const unsigned top = 1u << n;
            for (unsigned bits = 0; bits < top; ++bits) {
                std::vector<double> v(n, 0.0);
                for (int i = 0; i < n; ++i) v[i] = (bits & (1u << i)) ? -1.0 : 1.0;
                push(std::move(v));
            }
            return out;
        }
        default:
            break;
    }
    throw InputError("unreachable kernel");
}

} // namespace bq
