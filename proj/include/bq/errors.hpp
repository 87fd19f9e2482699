#pragma once

#include <stdexcept>
#include <string>

namespace bq {

/// Enumeration or dimension cap exceeded (see Budgets).
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed descriptor, coefficients, or argument out of range.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver failed to certify the requested enclosure.
/// Never returned as a silent value; callers either catch or propagate.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Enumeration caps. The environment variable BQ_BUDGET, when set to a
/// positive integer, overrides both caps at process start.
struct Budgets {
    int james_dim = 24;    // pattern index cap for the cyclic-variation norm
    int sign_enum = 20;    // 2^N sign-vector enumeration cap
    int embed_blocks = 16; // exact sign enumeration cap for sup-model certificates
};

/// Process-wide budgets (env override applied once, thread-safe).
const Budgets& budgets();

} // namespace bq
