// bounds.hpp — deterministic numerical embodiments of the analytic machinery:
// tail bounds for sums of exponentials, k-edge path-sum estimates S_k, the
// multi-scale Lambda/lambda optimizer, the self-bounding recursion for the
// expected ball volume, leading-order lower-tail passage bounds, and the
// growth-phase classifier.
//
// Conventions shared by everything here: uncited multiplicative constants are
// set to 1, o(1) terms are dropped, and outputs carrying either convention are
// tagged leading_order.  Comparisons against phase/case thresholds snap when
// the input sits within relative 1e-12 of the threshold.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lrfpp/ansatz.hpp"
#include "lrfpp/kernel.hpp"
#include "lrfpp/site.hpp"

namespace lrfpp {

// ---------------------------------------------------------------------------
// Tail bounds for S = sum_i X_i / lambda_i with X_i i.i.d. Exp(1).
// ---------------------------------------------------------------------------

struct ExpSumBounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Sandwich for the lower tail P(S <= t), k = rates.size():
//   lower = prod_i lambda_i t / (k + lambda_i t)
//   upper = min(1, (e t / k)^k prod_i lambda_i)
// Throws DomainError on an empty rate list, a non-positive rate, or t < 0.
ExpSumBounds exp_sum_lower_tail_bounds(const std::vector<double>& rates, double t);

// Upper tail P(S >= t) <= exp(-lambda_min (t - Lambda)^2 / (2t)) where
// Lambda = sum_i 1/lambda_i, valid for t >= Lambda and any lambda_min that is
// a lower bound for every rate.  Throws DomainError when t < Lambda (the
// bound is not asserted there) or lambda_min exceeds some rate.
double exp_sum_upper_tail_bound(const std::vector<double>& rates, double lambda_min,
                                double t);

// Joint lower tail for two sums sharing their first m terms,
//   P(sum_{i<=k} X_i/l_i <= t  and  sum_{i<=m} X_i/l_i + sum_{k<i<=2k-m} X_i/l_i <= t)
//     <= (e t)^{2k-m} / ((k-m)^{2k-2m} m^m) * prod_{i<=2k-m} l_i,
// capped at 1, with the convention m^m = 1 at m = 0.  Requires k > m >= 0 and
// rates.size() == 2k - m.
double joint_lower_tail_bound(const std::vector<double>& rates, int k, int m, double t);

// ---------------------------------------------------------------------------
// Path sums S_k(0, x) = sum over k-edge paths of prod_e rate(|e|_1).
// ---------------------------------------------------------------------------

// Exact sum over all k-edge paths from the origin to x whose consecutive
// vertices differ and whose intermediate vertices lie in the centered
// l-infinity box of the given radius.  A lower bound for the full-lattice
// path sum (exact for k = 1).  Refuses k outside [1,3] or a box with more
// than 1000 sites (BudgetExceeded); mismatched dimensions are a DomainError.
double s_k_bruteforce(const Kernel& kernel, int k, const Site& x,
                      std::int64_t box_radius);

// Predicted scaling shape of S_k(0, x) at |x|_1 = n for the pure power rate,
// constants omitted: n^{(k-1)d - k*alpha} when alpha < d, and n^{-alpha} (the
// rate shape) when alpha > d.  Throws DivergentSum for alpha <= (k-1)d/k,
// where the sum has no finite shape, and DomainError at alpha = d, where the
// shape picks up non-power logarithmic corrections.
double s_k_predicted_order(double alpha, int d, int k, double n);

// Majorant shape for the convolution sum_y r(|y|) q(|x - y|):
//   r(n) I_1^n[s^{d-1} q] + q(n) I_1^n[s^{d-1} r] + I_n^inf[s^{d-1} r q],
// n = |x|_1, evaluated by adaptive trapezoid quadrature to relative tolerance
// 1e-6 (the infinite leg via the substitution s = 1/u).  Throws DivergentSum
// when the infinite integral diverges and DomainError for mismatched
// dimensions or x = 0.
double convolution_bound_rhs(const Kernel& kernel_r, const Kernel& kernel_q,
                             const Site& x);

// ---------------------------------------------------------------------------
// Multi-scale construction: mean bound Lambda_{f,k} and rate floor lambda_{f,k}.
// ---------------------------------------------------------------------------

struct AnsatzResult {
    AnsatzScheme scheme;
    int k = 0;
    // Lambda_{f,k} = sum_{i=1..k} 2^{i-1} (f_{i-1} + 2 f_i)^alpha f_i^{-2d}
    //              + 2^k f_k, with f_0 = n and the ball-volume constant set
    // to 1: the mean passage-time bound certified by the construction.
    double Lambda = 0.0;
    // lambda_{f,k} = [1 + max_i (f_{i-1} + 2 f_i)^alpha f_i^{-2d}]^{-1},
    // in (0, 1]: the worst single-edge rate deficiency along the path.
    double lambda_small = 1.0;
    bool leading_order = true;

    // P(T(0, x) >= (1 + t) Lambda) <= tail(t) = exp(-t^2 Lambda lambda / (2(t+1)))
    // for t >= 0; non-increasing with tail(0) = 1.
    double tail(double t) const;
};

// Evaluates Lambda/lambda for the given scheme, depth k, and |x|_1 = n.
// Throws AnsatzInfeasible when the scale sequence is inadmissible.
AnsatzResult ansatz_evaluate(double alpha, int d, const AnsatzScheme& scheme, int k,
                             double n);

// Picks the scheme and depth by the decay exponent and minimizes Lambda:
//   alpha in (2d, 2d+1): f(x) = x/a with a = argmin (a+2)^alpha/(a^{alpha-2d}-2)
//                        (golden-section) and k = floor(log n / log a);
//   alpha = 2d:          f(x) = x/a_n, a_n = n^{1/(k0+2d)},
//                        k0 = floor(sqrt(2d log2 n) - 2d);
//   alpha in (d, 2d):    f(x) = x^{alpha/2d} and
//                        k = floor(log log n / log(2d/alpha));
// in every case the depth is lowered, if necessary, to the largest admissible
// value.  Throws DomainError for alpha outside (d, 2d+1) and AnsatzInfeasible
// when no depth k >= 1 is admissible for this n.
AnsatzResult ansatz_optimize(double alpha, int d, double n);

// ---------------------------------------------------------------------------
// Self-bounding recursion for g(t) = E|B_t| and its solved envelope.
// ---------------------------------------------------------------------------

// The depth-k unrolling of the recursion 1 <= g <= e^{lambda t},
// g^{1/theta} <= c (1 + t^{beta-1} int_0^t g(y) g(t-y) dy):
//   log g(t) <= theta ((2 theta)^k - 1)/(2 theta - 1) * log(c (1 + t^beta))
//             + lambda theta^k t,
// with the ratio read as k at theta = 1/2.  Callers minimize over k >= 0;
// k = 0 recovers the hypothesis lambda t.  Requires theta in (0,1),
// lambda > 0, beta >= 0, c >= 1, t >= 0.
double recursion_bound(double lambda, double theta, double beta, double c, double t,
                       int k);

// Leading-order closed-form envelope t -> log G(t) solving the recursion:
//   theta < 1/2: theta/(1 - 2 theta) * log(1 + t^beta)
//   theta = 1/2: (log(1 + t^beta))^2 / (beta log 2)      (needs beta > 0)
//   theta > 1/2: c_theta (2 lambda t)^{log2(2 theta)}
//                        (log(1 + t^beta))^{log2(1/theta)},
// where log_theta c_theta = -1 + log2(1 - 1/(2 theta)).
std::function<double(double)> g_envelope(double theta, double beta, double lambda,
                                         double c);

// Leading-order upper bound on log P(T(0, x) <= t) at |x|_1 = x_norm, with
// the free constants set to 1 and o(1) dropped:
//   alpha in (d, 2d): (log(1+t))^{1-g} t^g - alpha log x_norm, g = log2(2d/alpha)
//   alpha = 2d:       (4d+2)/log 2 * (log(1+t))^2 - alpha log x_norm
//   alpha > 2d:       alpha ((1+alpha)/(alpha-2d) log(1+t) - log x_norm).
// Requires alpha > d (snapped comparison), x_norm >= 1, t >= 0.
double passage_lower_tail_bound(double alpha, int d, double x_norm, double t);

// ---------------------------------------------------------------------------
// Growth-phase classifier.
// ---------------------------------------------------------------------------

enum class Regime {
    Instantaneous,         // alpha < d gamma: total rate diverges
    Exponential,           // alpha = d gamma (under the summability side-condition)
    StretchedExponential,  // d gamma < alpha < 2d gamma: log|B_t| ~ t^{1/Delta}
    LogCorrected2d,        // alpha = 2d gamma: log|B_t| ~ (t/log t)^2
    Superlinear,           // 2d gamma < alpha < 2d gamma + 1: diameter ~ t^{1/Gamma}
    CriticalLinearEdge,    // alpha = 2d gamma + 1: growth rate open
    Linear,                // alpha > 2d gamma + 1: shape-theorem regime
};

const char* regime_name(Regime regime);

struct PhaseReport {
    Regime regime = Regime::Linear;
    // The transition points d*gamma, 2d*gamma, 2d*gamma + 1.
    double threshold_low = 0.0;
    double threshold_mid = 0.0;
    double threshold_high = 0.0;
    // Delta = log 2 / log(2d gamma / alpha), in (1, inf); present exactly in
    // the stretched-exponential regime.
    std::optional<double> delta_exponent;
    // Gamma = alpha - 2d gamma, in (0, 1); present exactly in the superlinear
    // regime.
    std::optional<double> gamma_exponent;
    // alpha landed within relative 1e-12 of a threshold and was snapped onto it.
    bool snapped = false;
    // alpha = d gamma: the regime additionally requires the slowly varying
    // factor to keep the total rate finite (true for (1+ln k)^{-p}, p > 1;
    // false for L == 1, where growth is instantaneous instead).
    bool boundary_l_condition = false;
};

// Places (alpha, d, gamma) among the growth regimes.  Requires alpha > 0,
// d in [1, 8], gamma > 0; total over that domain.
PhaseReport phase_classify(double alpha, int d, double gamma);

}  // namespace lrfpp
