#include "lrfpp/ansatz.hpp"

#include <cmath>

#include "lrfpp/errors.hpp"

namespace lrfpp {

double AnsatzScheme::apply(double x) const {
    switch (family) {
        case AnsatzFamily::GeometricA:
        case AnsatzFamily::SlidingA:
            return x / param;
        case AnsatzFamily::PowerGamma:
            return std::pow(x, param);
    }
    throw InternalError("unknown ansatz family");
}

std::vector<double> scale_sequence(const AnsatzScheme& scheme, double n, int k) {
    if (k < 1) throw AnsatzInfeasible("multi-scale construction needs at least one level");
    if (!(n >= 1.0)) throw AnsatzInfeasible("multi-scale construction needs a scale n >= 1");
    std::vector<double> f;
    f.reserve(static_cast<std::size_t>(k));
    double prev = n;
    for (int i = 1; i <= k; ++i) {
        const double next = scheme.apply(prev);
        if (!(next < prev / 2.0))
            throw AnsatzInfeasible("scale map must contract by more than half at every level");
        if (!(next > 0.0) || !std::isfinite(next))
            throw AnsatzInfeasible("scale map left the positive reals");
        f.push_back(next);
        prev = next;
    }
    if (f.back() < 1.0)
        throw AnsatzInfeasible("deepest scale fell below one lattice spacing; reduce k");
    return f;
}

}  // namespace lrfpp
