// errors.hpp — exception taxonomy shared across the library.
//
// Domain errors (bad inputs, unsupported parameter regions, infeasible
// constructions) derive from DomainError and map to process exit code 2 in
// the CLI; anything else that escapes is an internal error (exit code 1).
#pragma once

#include <stdexcept>
#include <string>

namespace lrfpp {

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The total communication rate Σ_x r(|x|_1) diverges: every lattice site is
// reached instantly and no finite-rate simulation exists.  Raised for
// alpha < d, and for alpha = d unless the slowly varying factor is
// (1+ln k)^{-p} with p > 1.
struct InstantaneousRegime : DomainError {
    explicit InstantaneousRegime(const std::string& what) : DomainError(what) {}
};

// The dispersal (SI) dynamics equal the growth set in law only for
// exponential edge weights (gamma = 1); other powers lack memorylessness.
struct UnsupportedDynamics : DomainError {
    explicit UnsupportedDynamics(const std::string& what) : DomainError(what) {}
};

// Requested multi-scale construction cannot be realized (k = 0, scale values
// violating f(x) < x/2 or f_k >= 1, or balls falling outside the box).
struct AnsatzInfeasible : DomainError {
    explicit AnsatzInfeasible(const std::string& what) : DomainError(what) {}
};

// A path-sum or integral in the requested parameter range diverges (or has
// no predicted finite shape).
struct DivergentSum : DomainError {
    explicit DivergentSum(const std::string& what) : DomainError(what) {}
};

// A regression cannot be performed (too few points, degenerate abscissae).
struct FitError : DomainError {
    explicit FitError(const std::string& what) : DomainError(what) {}
};

// Work or memory budget would be exceeded (e.g. brute-force path sums on an
// oversized box).  Deliberate refusal, not a failure of the computation.
struct BudgetExceeded : DomainError {
    explicit BudgetExceeded(const std::string& what) : DomainError(what) {}
};

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lrfpp
