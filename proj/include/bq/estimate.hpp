#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace bq {

/// Which side of the true value a computed number certifies.
enum class Direction { Exact, LowerBound, UpperBound };

std::string to_string(Direction d);

/// One-sided or two-sided enclosure of a nonnegative quantity.
struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    static Interval exact(double v) { return {v, v}; }
    static Interval at_least(double v) { return {v, std::numeric_limits<double>::infinity()}; }
    static Interval at_most(double v) { return {0.0, v}; }

    bool is_exact() const { return lo == hi; }
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }

    /// Intersection of two valid enclosures of the same quantity.
    /// An empty result means at least one of them was wrong.
    Interval meet(const Interval& other) const {
        return {std::max(lo, other.lo), std::min(hi, other.hi)};
    }
    bool empty(double tol = 0.0) const { return lo > hi + tol; }
};

Interval operator*(const Interval& a, const Interval& b);
Interval pow(const Interval& a, int exponent);

/// A numeric result together with the direction it certifies and how it
/// was obtained. `params` records the section size, horizons, and
/// tolerances that the number depends on.
struct Estimate {
    double value = 0.0;
    Direction direction = Direction::Exact;
    std::string method;
    std::map<std::string, double> params;

    static Estimate exact(double v, std::string method_) {
        return {v, Direction::Exact, std::move(method_), {}};
    }
    static Estimate lower(double v, std::string method_) {
        return {v, Direction::LowerBound, std::move(method_), {}};
    }
    static Estimate upper(double v, std::string method_) {
        return {v, Direction::UpperBound, std::move(method_), {}};
    }

    /// True if the method string marks this value as a heuristic, i.e. its
    /// direction tag must not feed certified comparisons.
    bool heuristic() const { return method.rfind("heuristic", 0) == 0; }

    Interval interval() const {
        if (heuristic()) return {0.0, std::numeric_limits<double>::infinity()};
        switch (direction) {
            case Direction::Exact: return Interval::exact(value);
            case Direction::LowerBound: return Interval::at_least(value);
            case Direction::UpperBound: return Interval::at_most(value);
        }
        return {};
    }
};

} // namespace bq
