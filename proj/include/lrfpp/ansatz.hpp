// ansatz.hpp — multi-scale decay schemes f shared by the constructive path
// builder (exactfpp) and the analytic Lambda/lambda optimizer (bounds).
//
// A scheme defines the scale map f applied to f_0 = n: the recursive path
// construction places balls of radius f_1, f_2, ... around the endpoints of
// each segment, halving-at-least each level (f(x) < x/2), down to f_k >= 1.
#pragma once

#include <vector>

namespace lrfpp {

enum class AnsatzFamily {
    GeometricA,  // f(x) = x / a, fixed a > 2
    SlidingA,    // f(x) = x / a with the scale-dependent a = n^{1/(k+2d)}
    PowerGamma,  // f(x) = x^g for an exponent g in (0, 1)
};

struct AnsatzScheme {
    AnsatzFamily family = AnsatzFamily::GeometricA;
    // GeometricA / SlidingA: the divisor a; PowerGamma: the exponent g.
    double param = 4.0;

    double apply(double x) const;
};

// Realized scales f_1..f_k starting from f_0 = n.  Throws AnsatzInfeasible
// unless every step contracts (f_i < f_{i-1} / 2), f_k >= 1, and k >= 1.
std::vector<double> scale_sequence(const AnsatzScheme& scheme, double n, int k);

}  // namespace lrfpp
