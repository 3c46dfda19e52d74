#include "lrfpp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lrfpp/detail/quadrature.hpp"

namespace lrfpp {

namespace {

// Relative snapping tolerance for boundary comparisons like alpha == d.
bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

double slow_vary(const Kernel& kernel, double k) {
    if (kernel.slowvary == SlowVary::Unit) return 1.0;
    return std::pow(1.0 + std::log(k), -kernel.logpower_p);
}

// d/dk of log L(k).
double slow_vary_dlog(const Kernel& kernel, double k) {
    if (kernel.slowvary == SlowVary::Unit) return 0.0;
    return -kernel.logpower_p / (k * (1.0 + std::log(k)));
}

std::uint64_t binom_small(int n, int r) {
    if (r < 0 || r > n) return 0;
    std::uint64_t c = 1;
    for (int j = 1; j <= r; ++j) c = c * static_cast<std::uint64_t>(n - r + j) / static_cast<std::uint64_t>(j);
    return c;
}

}  // namespace

void Kernel::validate() const {
    if (d < 1 || d > kMaxDim) throw DomainError("kernel dimension must be in [1, 8]");
    if (!(alpha > 0.0)) throw DomainError("kernel exponent alpha must be positive");
    if (!(gamma > 0.0)) throw DomainError("kernel weight power gamma must be positive");
    if (slowvary == SlowVary::LogPower && !(logpower_p > 1.0))
        throw DomainError("log-power slow variation requires p > 1");
}

bool Kernel::summable() const {
    double dd = static_cast<double>(d);
    if (nearly_equal(alpha, dd)) return slowvary == SlowVary::LogPower;
    return alpha > dd;
}

std::string Kernel::describe() const {
    std::ostringstream os;
    os << "d=" << d << " alpha=" << alpha;
    if (slowvary == SlowVary::LogPower) os << " L=(1+ln k)^-" << logpower_p;
    if (gamma != 1.0) os << " gamma=" << gamma;
    return os.str();
}

double rate(const Kernel& kernel, std::int64_t k) {
    kernel.validate();
    if (k < 1) throw DomainError("rate(k) requires k >= 1");
    double kd = static_cast<double>(k);
    return std::pow(kd, -kernel.alpha) * slow_vary(kernel, kd);
}

std::uint64_t shell_count(int d, std::int64_t k) {
    if (d < 1 || d > kMaxDim) throw DomainError("shell_count: dimension must be in [1, 8]");
    if (k < 1) throw DomainError("shell_count: radius must be >= 1");
    // Overflow pre-check on the smooth value (2^64 with margin).
    if (shell_count_real(d, static_cast<double>(k)) > 1.8e19)
        throw DomainError("shell_count: value exceeds 64 bits");
    unsigned __int128 total = 0;
    int imax = static_cast<int>(std::min<std::int64_t>(d, k));
    for (int i = 1; i <= imax; ++i) {
        // C(k-1, i-1) with k possibly huge; stepwise product/division is exact
        // and intermediates fit 128 bits because the result fits 64.
        unsigned __int128 c = 1;
        for (int j = 1; j <= i - 1; ++j) {
            c = c * static_cast<unsigned __int128>(k - i + j) / static_cast<unsigned>(j);
        }
        total += (static_cast<unsigned __int128>(1) << i) * binom_small(d, i) * c;
    }
    if (total > std::numeric_limits<std::uint64_t>::max())
        throw DomainError("shell_count: value exceeds 64 bits");
    return static_cast<std::uint64_t>(total);
}

double shell_count_real(int d, double k) {
    if (d < 1 || d > kMaxDim) throw DomainError("shell_count_real: dimension must be in [1, 8]");
    double total = 0.0;
    double fact = 1.0;  // (i-1)!
    for (int i = 1; i <= d; ++i) {
        if (i > 1) fact *= static_cast<double>(i - 1);
        double prod = 1.0;  // (k-1)(k-2)...(k-i+1)
        for (int j = 1; j <= i - 1; ++j) prod *= (k - static_cast<double>(j));
        total += std::ldexp(static_cast<double>(binom_small(d, i)), i) * prod / fact;
    }
    return total;
}

RadialMass::RadialMass(const Kernel& kernel) : kernel_(kernel) {
    kernel_.validate();
    // Expand v_d(x) = sum_i 2^i C(d,i) prod_{j=1..i-1}(x-j)/(i-1)! into
    // monomial coefficients (degree d-1), by polynomial convolution.
    double acc[kMaxDim]{};
    for (int i = 1; i <= kernel_.d; ++i) {
        double p[kMaxDim]{};
        p[0] = 1.0;
        int deg = 0;
        for (int j = 1; j <= i - 1; ++j) {  // multiply by (x - j)
            for (int t = deg + 1; t >= 1; --t) p[t] = p[t - 1] - static_cast<double>(j) * p[t];
            p[0] *= -static_cast<double>(j);
            ++deg;
        }
        double fact = 1.0;
        for (int j = 2; j <= i - 1; ++j) fact *= static_cast<double>(j);
        double scale = std::ldexp(static_cast<double>(binom_small(kernel_.d, i)), i) / fact;
        for (int t = 0; t <= deg; ++t) acc[t] += scale * p[t];
    }
    for (int t = 0; t < kMaxDim; ++t) poly_[t] = acc[t];
}

double RadialMass::term(std::int64_t k) const {
    if (k < 1) throw DomainError("radial mass: k >= 1");
    return shell_count_real(kernel_.d, static_cast<double>(k)) * rate(kernel_, k);
}

double RadialMass::term_real(double k) const {
    return shell_count_real(kernel_.d, k) * std::pow(k, -kernel_.alpha) * slow_vary(kernel_, k);
}

double RadialMass::integral_from(double a) const {
    // int_a^inf v(x) x^-alpha L(x) dx, monomial by monomial.
    double total = 0.0;
    for (int j = 0; j < kernel_.d; ++j) {
        double cj = poly_[j];
        if (cj == 0.0) continue;
        double beta = kernel_.alpha - static_cast<double>(j) - 1.0;  // x^{j-alpha} tail exponent
        double ij;
        if (kernel_.slowvary == SlowVary::Unit) {
            if (beta <= 0.0) throw DivergentSum("radial mass integral diverges");
            ij = std::pow(a, -beta) / beta;
        } else {
            double p = kernel_.logpower_p;
            double ua = 1.0 + std::log(a);
            if (std::abs(beta) <= 1e-9) {
                // int_a^inf x^-1 (1+ln x)^-p dx = ua^{1-p}/(p-1)
                ij = std::pow(ua, 1.0 - p) / (p - 1.0);
            } else if (beta > 0.0) {
                // substitute u = 1+ln x: e^{beta} int_{ua}^inf e^{-beta u} u^-p du
                double span = 70.0 / beta;
                ij = std::exp(beta) *
                     detail::adaptive_simpson(
                         [beta, p](double u) { return std::exp(-beta * u) * std::pow(u, -p); },
                         ua, ua + span, 1e-13);
            } else {
                throw DivergentSum("radial mass integral diverges");
            }
        }
        total += cj * ij;
    }
    return total;
}

double RadialMass::tail(double m) const {
    if (m < 8.0) throw DomainError("radial tail: m >= 8 required for the asymptotic form");
    // Euler-Maclaurin: sum_{k>m} f(k) = int_a^inf f + f(a)/2 - f'(a)/12 + f'''(a)/720 + ...
    // with a = m+1.  f is smooth (polynomial times power times log power).
    double a = m + 1.0;
    double fa = term_real(a);
    // Analytic f': f = v(x) g(x), g = x^-alpha L(x).
    double v = shell_count_real(kernel_.d, a);
    double vp = 0.0;  // v'(a)
    for (int j = 1; j < kernel_.d; ++j) vp += poly_[j] * static_cast<double>(j) * std::pow(a, j - 1);
    double g = std::pow(a, -kernel_.alpha) * slow_vary(kernel_, a);
    double gp = g * (-kernel_.alpha / a + slow_vary_dlog(kernel_, a));
    double fprime = vp * g + v * gp;
    // f''' by central differences of the analytic f' (the correction is tiny,
    // so modest accuracy suffices).
    auto fp = [&](double x) {
        double vv = shell_count_real(kernel_.d, x);
        double vvp = 0.0;
        for (int j = 1; j < kernel_.d; ++j) vvp += poly_[j] * static_cast<double>(j) * std::pow(x, j - 1);
        double gg = std::pow(x, -kernel_.alpha) * slow_vary(kernel_, x);
        double ggp = gg * (-kernel_.alpha / x + slow_vary_dlog(kernel_, x));
        return vvp * gg + vv * ggp;
    };
    double h = std::max(1e-3, a * 1e-4);
    double f3 = (fp(a + h) - 2.0 * fprime + fp(a - h)) / (h * h);
    return integral_from(a) + 0.5 * fa - fprime / 12.0 + f3 / 720.0;
}

double RadialMass::total(double rel_tol) const {
    if (!kernel_.summable()) {
        throw InstantaneousRegime(
            "total communication rate diverges for " + kernel_.describe() +
            ": every site is reached instantly; require alpha > d, or alpha = d with "
            "log-power p > 1");
    }
    if (!(rel_tol > 0.0)) throw DomainError("total_rate: rel_tol must be positive");
    std::int64_t K = 1024;
    double head = 0.0;
    for (std::int64_t k = 1; k <= K; ++k) head += term(k);
    double tl = tail(static_cast<double>(K));
    // Grow the explicit head until the Euler-Maclaurin remainder estimate is
    // comfortably below the requested tolerance.
    while (K < (1 << 18)) {
        double a = static_cast<double>(K + 1);
        double err_proxy = std::abs(term_real(a)) * 1e-10;  // conservative EM error scale
        if (err_proxy <= rel_tol * (head + tl) || tl <= rel_tol * head) break;
        std::int64_t K2 = K * 2;
        for (std::int64_t k = K + 1; k <= K2; ++k) head += term(k);
        K = K2;
        tl = tail(static_cast<double>(K));
    }
    return head + tl;
}

double total_rate(const Kernel& kernel, double rel_tol) {
    return RadialMass(kernel).total(rel_tol);
}

}  // namespace lrfpp
