#include "she/sigma.hpp"

#include <algorithm>
#include <cmath>

namespace she {

SigmaSpec SigmaSpec::zero() {
    SigmaSpec s;
    s.kind = Kind::zero;
    return s;
}

SigmaSpec SigmaSpec::linear(double q) {
    if (!(q > 0.0)) throw config_error("SigmaSpec::linear: q must be positive");
    SigmaSpec s;
    s.kind = Kind::linear;
    s.q = q;
    s.lipschitz_constant = q;
    return s;
}

SigmaSpec SigmaSpec::piecewise(std::vector<double> knots, std::vector<double> slopes) {
    if (slopes.size() != knots.size() + 1)
        throw config_error("SigmaSpec::piecewise: need knots.size()+1 slopes");
    if (!std::is_sorted(knots.begin(), knots.end()))
        throw config_error("SigmaSpec::piecewise: knots must be ascending");
    if (!knots.empty() && knots.front() <= 0.0)
        throw config_error("SigmaSpec::piecewise: knots must be positive");
    SigmaSpec s;
    s.kind = Kind::piecewise_linear;
    s.knots = std::move(knots);
    s.slopes = std::move(slopes);
    s.base.resize(s.knots.size());
    double v = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < s.knots.size(); ++i) {
        v += s.slopes[i] * (s.knots[i] - prev);
        s.base[i] = v;
        prev = s.knots[i];
    }
    for (double sl : s.slopes) s.lipschitz_constant = std::max(s.lipschitz_constant, std::fabs(sl));
    return s;
}

double SigmaSpec::operator()(double z) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::linear:
            return q * z;
        case Kind::piecewise_linear: {
            double a = std::fabs(z);
            double sign = (z < 0.0) ? -1.0 : 1.0;
            // Find segment; knot counts are small, linear scan is fine.
            std::size_t i = 0;
            while (i < knots.size() && a >= knots[i]) ++i;
            double v = (i == 0) ? slopes[0] * a : base[i - 1] + slopes[i] * (a - knots[i - 1]);
            return sign * v;
        }
    }
    return 0.0;
}

SigmaSpec rescale_sigma(const SigmaSpec& sigma, double mass) {
    if (!(mass > 0.0)) throw std::domain_error("rescale_sigma: mass must be positive");
    if (sigma.kind != SigmaSpec::Kind::piecewise_linear) return sigma;
    SigmaSpec s = sigma;
    for (std::size_t i = 0; i < s.knots.size(); ++i) {
        s.knots[i] = sigma.knots[i] / mass;
        s.base[i] = sigma.base[i] / mass;
    }
    return s;
}

}  // namespace she
