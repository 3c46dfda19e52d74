#include "lrfpp/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "lrfpp/errors.hpp"

namespace lrfpp {

namespace {

// Threshold comparisons snap within relative 1e-12 so that, e.g., an alpha
// assembled as 2.0 * d * gamma in floating point still lands on the boundary.
bool snap_eq(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y));
}

// --- adaptive trapezoid quadrature --------------------------------------
//
// Panel bisection until the two-panel estimate agrees with the parent
// estimate within the panel's share of the absolute tolerance.  The driver
// below seeds 64 coarse panels to establish the scale the relative tolerance
// refers to.

template <class F>
double adapt_panel(const F& f, double a, double fa, double b, double fb, double whole,
                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double left = 0.25 * (b - a) * (fa + fm);
    const double right = 0.25 * (b - a) * (fm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= tol) return left + right;
    return adapt_panel(f, a, fa, m, fm, left, 0.5 * tol, depth - 1) +
           adapt_panel(f, m, fm, b, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(const F& f, double a, double b, double rel_tol) {
    if (!(b > a)) return 0.0;
    constexpr int kCoarse = 64;
    const double h = (b - a) / kCoarse;
    std::array<double, kCoarse + 1> fs{};
    for (int i = 0; i <= kCoarse; ++i) fs[i] = f(a + i * h);
    double scale = 0.0;
    for (int i = 0; i < kCoarse; ++i) scale += 0.5 * h * (fs[i] + fs[i + 1]);
    const double tol = std::max(std::abs(scale) * rel_tol, 1e-300);
    double total = 0.0;
    for (int i = 0; i < kCoarse; ++i) {
        const double pa = a + i * h;
        const double pb = a + (i + 1) * h;
        const double panel = 0.5 * h * (fs[i] + fs[i + 1]);
        total += adapt_panel(f, pa, fs[i], pb, fs[i + 1], panel, tol / kCoarse, 44);
    }
    return total;
}

constexpr double kQuadRelTol = 1e-6;

// Continuous extension of the rate function, s >= 1.
double rho(const Kernel& kernel, double s) {
    double v = std::pow(s, -kernel.alpha);
    if (kernel.slowvary == SlowVary::LogPower)
        v *= std::pow(1.0 + std::log(s), -kernel.logpower_p);
    return v;
}

double log_power_exponent(const Kernel& kernel) {
    return kernel.slowvary == SlowVary::LogPower ? kernel.logpower_p : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exponential-sum tails
// ---------------------------------------------------------------------------

ExpSumBounds exp_sum_lower_tail_bounds(const std::vector<double>& rates, double t) {
    if (rates.empty()) throw DomainError("need at least one rate");
    for (double r : rates)
        if (!(r > 0.0)) throw DomainError("rates must be positive");
    if (!(t >= 0.0)) throw DomainError("the time t must be >= 0");
    if (t == 0.0) return {0.0, 0.0};
    const double k = static_cast<double>(rates.size());
    double lower = 1.0;
    double log_upper = k * (1.0 + std::log(t) - std::log(k));
    for (double r : rates) {
        lower *= r * t / (k + r * t);
        log_upper += std::log(r);
    }
    return {lower, std::min(1.0, std::exp(log_upper))};
}

double exp_sum_upper_tail_bound(const std::vector<double>& rates, double lambda_min,
                                double t) {
    if (rates.empty()) throw DomainError("need at least one rate");
    if (!(lambda_min > 0.0)) throw DomainError("lambda_min must be positive");
    double mean_sum = 0.0;
    for (double r : rates) {
        if (!(r > 0.0)) throw DomainError("rates must be positive");
        if (lambda_min > r) throw DomainError("lambda_min must lower-bound every rate");
        mean_sum += 1.0 / r;
    }
    if (!(t >= mean_sum))
        throw DomainError("upper-tail bound is asserted only for t >= the sum of means");
    const double diff = t - mean_sum;
    return std::exp(-lambda_min * diff * diff / (2.0 * t));
}

double joint_lower_tail_bound(const std::vector<double>& rates, int k, int m, double t) {
    if (!(k > m && m >= 0)) throw DomainError("need k > m >= 0");
    if (rates.size() != static_cast<std::size_t>(2 * k - m))
        throw DomainError("need exactly 2k - m rates");
    for (double r : rates)
        if (!(r > 0.0)) throw DomainError("rates must be positive");
    if (!(t >= 0.0)) throw DomainError("the time t must be >= 0");
    if (t == 0.0) return 0.0;
    double lg = (2.0 * k - m) * (1.0 + std::log(t));
    lg -= (2.0 * k - 2.0 * m) * std::log(static_cast<double>(k - m));
    if (m > 0) lg -= m * std::log(static_cast<double>(m));
    for (double r : rates) lg += std::log(r);
    return std::min(1.0, std::exp(lg));
}

// ---------------------------------------------------------------------------
// Path sums
// ---------------------------------------------------------------------------

double s_k_bruteforce(const Kernel& kernel, int k, const Site& x,
                      std::int64_t box_radius) {
    kernel.validate();
    if (x.dim() != kernel.d) throw DomainError("probe dimension does not match the kernel");
    if (k < 1) throw DomainError("path length k must be >= 1");
    if (k > 3) throw BudgetExceeded("brute-force path sums support k <= 3");
    if (box_radius < 0) throw DomainError("box radius must be >= 0");

    // A single edge has no intermediate vertex: the sum is the rate itself
    // (and 0 when x is the origin, since self-loops are not paths).
    if (k == 1) {
        const std::int64_t n = x.l1();
        return n == 0 ? 0.0 : rate(kernel, n);
    }

    const std::int64_t side = 2 * box_radius + 1;
    const double fcount = std::pow(static_cast<double>(side), kernel.d);
    if (fcount > 1000.0)
        throw BudgetExceeded("box has more than 1000 sites; brute-force path sum refused");
    const int nsites = static_cast<int>(std::llround(fcount));
    const int d = kernel.d;

    std::vector<std::array<Coord, kMaxDim>> pts(static_cast<std::size_t>(nsites));
    std::array<Coord, kMaxDim> cur{};
    for (int j = 0; j < d; ++j) cur[static_cast<std::size_t>(j)] = -box_radius;
    for (int i = 0; i < nsites; ++i) {
        pts[static_cast<std::size_t>(i)] = cur;
        for (int j = 0; j < d; ++j) {
            auto& cj = cur[static_cast<std::size_t>(j)];
            if (cj < box_radius) {
                ++cj;
                break;
            }
            cj = -box_radius;
        }
    }

    const auto l1_between = [d](const std::array<Coord, kMaxDim>& a,
                                const std::array<Coord, kMaxDim>& b) {
        std::int64_t s = 0;
        for (int j = 0; j < d; ++j)
            s += std::llabs(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)]);
        return s;
    };

    // layer[v] = sum over (remaining-edge) path tails from box site v to x.
    std::vector<double> layer(static_cast<std::size_t>(nsites));
    for (int i = 0; i < nsites; ++i) {
        std::int64_t dist = 0;
        for (int j = 0; j < d; ++j)
            dist += std::llabs(pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                               x.data()[j]);
        layer[static_cast<std::size_t>(i)] = dist == 0 ? 0.0 : rate(kernel, dist);
    }
    for (int level = 2; level < k; ++level) {
        std::vector<double> next(static_cast<std::size_t>(nsites), 0.0);
        for (int i = 0; i < nsites; ++i) {
            double acc = 0.0;
            for (int w = 0; w < nsites; ++w) {
                const std::int64_t dist = l1_between(pts[static_cast<std::size_t>(i)],
                                                     pts[static_cast<std::size_t>(w)]);
                if (dist > 0) acc += rate(kernel, dist) * layer[static_cast<std::size_t>(w)];
            }
            next[static_cast<std::size_t>(i)] = acc;
        }
        layer.swap(next);
    }
    double total = 0.0;
    for (int w = 0; w < nsites; ++w) {
        std::int64_t dist = 0;
        for (int j = 0; j < d; ++j)
            dist += std::llabs(pts[static_cast<std::size_t>(w)][static_cast<std::size_t>(j)]);
        if (dist > 0) total += rate(kernel, dist) * layer[static_cast<std::size_t>(w)];
    }
    return total;
}

double s_k_predicted_order(double alpha, int d, int k, double n) {
    if (d < 1 || d > kMaxDim) throw DomainError("dimension must be in [1, 8]");
    if (k < 1) throw DomainError("path length k must be >= 1");
    if (!(n >= 1.0)) throw DomainError("the distance n must be >= 1");
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    const double divg = static_cast<double>((k - 1) * d) / k;
    if (alpha < divg || snap_eq(alpha, divg))
        throw DivergentSum("path sum diverges for alpha <= (k-1)d/k");
    if (snap_eq(alpha, static_cast<double>(d)))
        throw DomainError(
            "no pure-power shape at the integrability boundary alpha = d");
    if (alpha < d) return std::pow(n, static_cast<double>((k - 1) * d) - k * alpha);
    return std::pow(n, -alpha);
}

double convolution_bound_rhs(const Kernel& kernel_r, const Kernel& kernel_q,
                             const Site& x) {
    kernel_r.validate();
    kernel_q.validate();
    if (kernel_r.d != kernel_q.d) throw DomainError("kernels must share a dimension");
    if (x.dim() != kernel_r.d) throw DomainError("probe dimension does not match the kernels");
    const std::int64_t n_int = x.l1();
    if (n_int == 0) throw DomainError("the convolution bound needs x != 0");
    const double n = static_cast<double>(n_int);
    const int d = kernel_r.d;
    const double asum = kernel_r.alpha + kernel_q.alpha;
    const double ptot = log_power_exponent(kernel_r) + log_power_exponent(kernel_q);

    // Finite legs: integral_1^n s^{d-1} rho(s) ds, evaluated in v = log s
    // where the integrand e^{v(d - alpha)} (1 + v)^{-p} is smooth and the
    // wide range is well conditioned.
    const auto finite_leg = [&](const Kernel& kernel) {
        const double expo = d - kernel.alpha;
        const double p = log_power_exponent(kernel);
        return integrate(
            [expo, p](double v) {
                double g = std::exp(expo * v);
                if (p != 0.0) g *= std::pow(1.0 + v, -p);
                return g;
            },
            0.0, std::log(n), kQuadRelTol);
    };

    // Infinite leg: integral_n^inf s^{d-1} rho_r rho_q ds.  Divergent when
    // alpha_r + alpha_q < d; exactly at the boundary only a combined log
    // power > 1 saves it, and then the integral has the closed form
    // (1 + log n)^{1-p} / (p - 1).
    double tail_leg;
    if (snap_eq(asum, static_cast<double>(d))) {
        if (!(ptot > 1.0))
            throw DivergentSum("tail integral of the convolution bound diverges");
        tail_leg = std::pow(1.0 + std::log(n), 1.0 - ptot) / (ptot - 1.0);
    } else if (asum < d) {
        throw DivergentSum("tail integral of the convolution bound diverges");
    } else {
        // Map s = 1/u onto (0, 1/n]; the integrand is u^{asum - d - 1} times
        // a slowly varying factor.  When that power is small or negative the
        // extra substitution u = y^m (m chosen so the y-power is >= 1) keeps
        // the trapezoid panels away from an endpoint singularity.
        const double sing = asum - d - 1.0;
        int m = 1;
        if (sing < 0.25) m = static_cast<int>(std::ceil(2.0 / (1.0 + sing)));
        const double upper = std::pow(1.0 / n, 1.0 / m);
        const auto f = [&](double y) {
            if (y <= 0.0) return 0.0;
            const double u = std::pow(y, m);
            const double s = 1.0 / u;
            return std::pow(s, d - 1.0) * rho(kernel_r, s) * rho(kernel_q, s) / (u * u) *
                   m * std::pow(y, m - 1.0);
        };
        tail_leg = integrate(f, 0.0, upper, kQuadRelTol);
    }

    return rho(kernel_r, n) * finite_leg(kernel_q) + rho(kernel_q, n) * finite_leg(kernel_r) +
           tail_leg;
}

// ---------------------------------------------------------------------------
// Multi-scale Lambda/lambda
// ---------------------------------------------------------------------------

double AnsatzResult::tail(double t) const {
    if (!(t >= 0.0)) throw DomainError("the tail bound is asserted for t >= 0");
    return std::exp(-t * t * Lambda * lambda_small / (2.0 * (t + 1.0)));
}

AnsatzResult ansatz_evaluate(double alpha, int d, const AnsatzScheme& scheme, int k,
                             double n) {
    if (d < 1 || d > kMaxDim) throw DomainError("dimension must be in [1, 8]");
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    if (!(n >= 1.0)) throw DomainError("the scale n must be >= 1");
    const std::vector<double> f = scale_sequence(scheme, n, k);

    double lambda_big = 0.0;
    double worst = 0.0;
    double pow2 = 1.0;  // 2^{i-1}
    double prev = n;
    for (int i = 1; i <= k; ++i) {
        const double fi = f[static_cast<std::size_t>(i - 1)];
        const double term = std::pow(prev + 2.0 * fi, alpha) * std::pow(fi, -2.0 * d);
        lambda_big += pow2 * term;
        worst = std::max(worst, term);
        pow2 *= 2.0;
        prev = fi;
    }
    lambda_big += pow2 * f.back();  // 2^k nearest-neighbor steps of mean 1 each

    AnsatzResult result;
    result.scheme = scheme;
    result.k = k;
    result.Lambda = lambda_big;
    result.lambda_small = 1.0 / (1.0 + worst);
    return result;
}

namespace {

// Per-level cost of the geometric scheme f(x) = x/a; minimized over a by
// golden section inside a bracket found on a coarse log grid.
double geometric_step_cost(double a, double alpha, double ex) {
    const double denom = std::pow(a, ex) - 2.0;
    if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
    return std::pow(a + 2.0, alpha) / denom;
}

double optimal_geometric_divisor(double alpha, int d) {
    const double ex = alpha - 2.0 * d;  // in (0, 1)
    const double amin = std::pow(2.0, 1.0 / ex);
    const double lo = std::log(amin);
    const double span = std::log(1e6);
    constexpr int kGrid = 512;
    int best = 1;
    double best_val = std::numeric_limits<double>::infinity();
    const auto cost_at = [&](double u) { return geometric_step_cost(std::exp(u), alpha, ex); };
    for (int i = 1; i <= kGrid; ++i) {
        const double u = lo + span * i / (kGrid + 1);
        const double v = cost_at(u);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double a_lo = lo + span * (best - 1) / (kGrid + 1);
    double b_hi = lo + span * (best + 1) / (kGrid + 1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b_hi - gr * (b_hi - a_lo);
    double c2 = a_lo + gr * (b_hi - a_lo);
    double f1 = cost_at(c1);
    double f2 = cost_at(c2);
    for (int it = 0; it < 200 && b_hi - a_lo > 1e-13; ++it) {
        if (f1 < f2) {
            b_hi = c2;
            c2 = c1;
            f2 = f1;
            c1 = b_hi - gr * (b_hi - a_lo);
            f1 = cost_at(c1);
        } else {
            a_lo = c1;
            c1 = c2;
            f1 = f2;
            c2 = a_lo + gr * (b_hi - a_lo);
            f2 = cost_at(c2);
        }
    }
    return std::exp(0.5 * (a_lo + b_hi));
}

}  // namespace

AnsatzResult ansatz_optimize(double alpha, int d, double n) {
    if (d < 1 || d > kMaxDim) throw DomainError("dimension must be in [1, 8]");
    if (!(n >= 1.0)) throw DomainError("the scale n must be >= 1");
    const double twod = 2.0 * d;
    double a = alpha;
    if (snap_eq(a, twod)) a = twod;
    if (snap_eq(a, static_cast<double>(d)) || snap_eq(a, twod + 1.0) || !(a > d) ||
        !(a < twod + 1.0))
        throw DomainError("scheme selection needs alpha strictly between d and 2d+1");

    AnsatzScheme scheme;
    int k0;
    if (a > twod) {
        scheme.family = AnsatzFamily::GeometricA;
        scheme.param = optimal_geometric_divisor(alpha, d);
        k0 = static_cast<int>(std::floor(std::log(n) / std::log(scheme.param)));
    } else if (a == twod) {
        scheme.family = AnsatzFamily::SlidingA;
        k0 = static_cast<int>(std::floor(std::sqrt(twod * std::log2(n)) - twod));
    } else {
        scheme.family = AnsatzFamily::PowerGamma;
        scheme.param = alpha / twod;
        const double ll = std::log(n) > 0.0 ? std::log(std::log(n)) : -1.0;
        k0 = ll > 0.0 ? static_cast<int>(std::floor(ll / std::log(twod / alpha))) : 0;
    }

    // The case formulas aim the depth at its asymptotically optimal value;
    // for finite n the deepest levels can break admissibility (a scale not
    // halving, or falling below one lattice spacing), so back off to the
    // largest depth the scale sequence accepts.
    for (int k = std::max(k0, 1); k >= 1; --k) {
        if (scheme.family == AnsatzFamily::SlidingA)
            scheme.param = std::pow(n, 1.0 / (k + twod));
        try {
            return ansatz_evaluate(alpha, d, scheme, k, n);
        } catch (const AnsatzInfeasible&) {
            continue;
        }
    }
    throw AnsatzInfeasible("no admissible multi-scale depth k >= 1 at this n");
}

// ---------------------------------------------------------------------------
// Self-bounding recursion
// ---------------------------------------------------------------------------

namespace {

void check_recursion_domain(double lambda, double theta, double beta, double c) {
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (!(beta >= 0.0)) throw DomainError("beta must be >= 0");
    if (!(c >= 1.0)) throw DomainError("c must be >= 1");
}

}  // namespace

double recursion_bound(double lambda, double theta, double beta, double c, double t,
                       int k) {
    check_recursion_domain(lambda, theta, beta, c);
    if (!(t >= 0.0)) throw DomainError("the time t must be >= 0");
    if (k < 0) throw DomainError("the depth k must be >= 0");
    double ratio;
    if (std::abs(2.0 * theta - 1.0) <= 1e-12)
        ratio = static_cast<double>(k);
    else
        ratio = std::expm1(k * std::log(2.0 * theta)) / (2.0 * theta - 1.0);
    return theta * ratio * std::log(c * (1.0 + std::pow(t, beta))) +
           lambda * std::pow(theta, k) * t;
}

std::function<double(double)> g_envelope(double theta, double beta, double lambda,
                                         double c) {
    check_recursion_domain(lambda, theta, beta, c);
    const auto check_t = [](double t) {
        if (!(t >= 0.0)) throw DomainError("the envelope is asserted for t >= 0");
    };
    if (snap_eq(theta, 0.5)) {
        if (!(beta > 0.0))
            throw DomainError("the theta = 1/2 envelope needs beta > 0");
        return [beta, check_t](double t) {
            check_t(t);
            const double l = std::log1p(std::pow(t, beta));
            return l * l / (beta * std::log(2.0));
        };
    }
    if (theta < 0.5) {
        return [theta, beta, check_t](double t) {
            check_t(t);
            return theta / (1.0 - 2.0 * theta) * std::log1p(std::pow(t, beta));
        };
    }
    const double c_theta = std::pow(theta, -1.0 + std::log2(1.0 - 1.0 / (2.0 * theta)));
    const double pow_t = std::log2(2.0 * theta);
    const double pow_log = std::log2(1.0 / theta);
    return [c_theta, pow_t, pow_log, beta, lambda, check_t](double t) {
        check_t(t);
        if (t == 0.0) return 0.0;
        return c_theta * std::pow(2.0 * lambda * t, pow_t) *
               std::pow(std::log1p(std::pow(t, beta)), pow_log);
    };
}

double passage_lower_tail_bound(double alpha, int d, double x_norm, double t) {
    if (d < 1 || d > kMaxDim) throw DomainError("dimension must be in [1, 8]");
    if (!(x_norm >= 1.0)) throw DomainError("the distance must be >= 1");
    if (!(t >= 0.0)) throw DomainError("the time t must be >= 0");
    const double twod = 2.0 * d;
    double a = alpha;
    if (snap_eq(a, twod)) a = twod;
    if (!(a > d) || snap_eq(a, static_cast<double>(d)))
        throw DomainError("the lower-tail bound needs alpha > d");
    const double log_x = std::log(x_norm);
    if (a == twod) {
        const double l = std::log1p(t);
        return (4.0 * d + 2.0) / std::log(2.0) * l * l - a * log_x;
    }
    if (a < twod) {
        const double g = std::log2(twod / a);  // in (0, 1)
        return std::pow(std::log1p(t), 1.0 - g) * std::pow(t, g) - a * log_x;
    }
    return a * ((1.0 + a) / (a - twod) * std::log1p(t) - log_x);
}

// ---------------------------------------------------------------------------
// Phase classifier
// ---------------------------------------------------------------------------

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::Instantaneous: return "Instantaneous";
        case Regime::Exponential: return "Exponential";
        case Regime::StretchedExponential: return "StretchedExponential";
        case Regime::LogCorrected2d: return "LogCorrected2d";
        case Regime::Superlinear: return "Superlinear";
        case Regime::CriticalLinearEdge: return "CriticalLinearEdge";
        case Regime::Linear: return "Linear";
    }
    throw InternalError("unknown regime");
}

PhaseReport phase_classify(double alpha, int d, double gamma) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    if (d < 1 || d > kMaxDim) throw DomainError("dimension must be in [1, 8]");
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");

    PhaseReport report;
    report.threshold_low = d * gamma;
    report.threshold_mid = 2.0 * d * gamma;
    report.threshold_high = 2.0 * d * gamma + 1.0;

    double a = alpha;
    for (double thr :
         {report.threshold_low, report.threshold_mid, report.threshold_high}) {
        if (a != thr && snap_eq(a, thr)) {
            a = thr;
            report.snapped = true;
            break;
        }
    }

    if (a < report.threshold_low) {
        report.regime = Regime::Instantaneous;
    } else if (a == report.threshold_low) {
        report.regime = Regime::Exponential;
        report.boundary_l_condition = true;
    } else if (a < report.threshold_mid) {
        report.regime = Regime::StretchedExponential;
        report.delta_exponent = std::log(2.0) / std::log(report.threshold_mid / a);
    } else if (a == report.threshold_mid) {
        report.regime = Regime::LogCorrected2d;
    } else if (a < report.threshold_high) {
        report.regime = Regime::Superlinear;
        report.gamma_exponent = a - report.threshold_mid;
    } else if (a == report.threshold_high) {
        report.regime = Regime::CriticalLinearEdge;
    } else {
        report.regime = Regime::Linear;
    }
    return report;
}

}  // namespace lrfpp
