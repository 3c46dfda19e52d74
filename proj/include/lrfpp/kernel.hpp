// kernel.hpp — the communication rate function r(k) = k^-alpha * L(k) on Z^d,
// its lattice shell sums, and the total rate lambda = sum_x r(|x|_1).
//
// L is restricted to the two slowly varying families the rest of the library
// supports: L == 1 and L(k) = (1+ln k)^-p with p > 1 (the latter keeps the
// rate summable at the boundary alpha = d).
#pragma once

#include <cstdint>
#include <string>

#include "lrfpp/errors.hpp"
#include "lrfpp/site.hpp"

namespace lrfpp {

enum class SlowVary { Unit, LogPower };

struct Kernel {
    int d = 1;                          // lattice dimension, 1..8
    double alpha = 2.0;                 // decay exponent, > 0
    SlowVary slowvary = SlowVary::Unit;
    double logpower_p = 2.0;            // only read when slowvary == LogPower
    double gamma = 1.0;                 // weight power: W_e = omega^gamma / r(|e|_1)

    // Throws DomainError on out-of-range fields (d outside [1,8], alpha <= 0,
    // gamma <= 0, LogPower with p <= 1).
    void validate() const;

    // True iff sum_k v_d(k) r(k) < infinity: alpha > d, or alpha = d with the
    // log-power family.  Comparisons snap within relative 1e-12 of alpha = d.
    bool summable() const;

    std::string describe() const;
};

// r(k) = k^-alpha * L(k); throws DomainError for k < 1.
double rate(const Kernel& kernel, std::int64_t k);

// Number of lattice sites at l1 distance exactly k:
//   v_d(k) = sum_{i=1..min(d,k)} 2^i C(d,i) C(k-1,i-1).
// Throws DomainError if d or k is out of range or the count overflows 64 bits.
std::uint64_t shell_count(int d, std::int64_t k);

// The same quantity as a smooth polynomial in real k >= 1 (the binomial
// product form), used by tail estimates and samplers.
double shell_count_real(int d, double k);

// Radial mass f(k) = v_d(k) r(k) together with analytic tail sums.
// tail(m) = sum_{k > m} f(k) is evaluated with an integral plus
// Euler-Maclaurin corrections; relative accuracy ~1e-12 for m >= 64.
class RadialMass {
  public:
    explicit RadialMass(const Kernel& kernel);

    double term(std::int64_t k) const;  // exact v_d(k) r(k)
    double term_real(double k) const;   // smooth extension
    double tail(double m) const;        // sum over integer k > m, m >= 8
    double total(double rel_tol) const; // full sum, or throws InstantaneousRegime

    const Kernel& kernel() const { return kernel_; }

  private:
    double integral_from(double a) const;  // int_a^inf f(x) dx
    Kernel kernel_;
    double poly_[kMaxDim]{};  // monomial coefficients of v_d(x), degree d-1
};

// lambda = sum over Z^d of r(|x|_1), to relative tolerance rel_tol.
// Throws InstantaneousRegime when the kernel is not summable.
double total_rate(const Kernel& kernel, double rel_tol = 1e-12);

}  // namespace lrfpp
