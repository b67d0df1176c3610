#pragma once

#include <vector>

#include "she/errors.hpp"

namespace she {

// Diffusion coefficient sigma with sigma(0) = 0 and a known Lipschitz
// constant. Three kinds: zero, linear Q*z, and piecewise-linear in |z|
// (odd extension) with sorted positive knots.
struct SigmaSpec {
    enum class Kind { zero, linear, piecewise_linear };

    Kind kind = Kind::zero;
    double q = 0.0;                // linear slope
    std::vector<double> knots;     // ascending, > 0; segment i covers [knots[i-1], knots[i])
    std::vector<double> slopes;    // size knots.size() + 1 (last segment unbounded)
    std::vector<double> base;      // sigma value at each knot (precomputed)
    double lipschitz_constant = 0.0;

    static SigmaSpec zero();
    static SigmaSpec linear(double q);
    static SigmaSpec piecewise(std::vector<double> knots, std::vector<double> slopes);

    double operator()(double z) const;

    bool is_linear() const { return kind != Kind::piecewise_linear; }
};

// w -> sigma(mass*w)/mass; same Lipschitz constant. Knots scale by 1/mass,
// slopes are untouched; linear and zero sigmas are invariant.
SigmaSpec rescale_sigma(const SigmaSpec& sigma, double mass);

}  // namespace she
