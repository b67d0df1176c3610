#pragma once

#include <vector>

namespace she {

// Solves (I - r*D2) x = b where D2 is the periodic second-difference matrix
// (stencil 1,-2,1). Sherman-Morrison correction over a precomputed Thomas
// factorization; O(n) per solve.
class PeriodicTridiag {
  public:
    PeriodicTridiag() = default;
    PeriodicTridiag(int n, double r);

    // b and x may alias.
    void solve(const double* b, double* x) const;

  private:
    void thomas(const double* b, double* x) const;

    int n_ = 0;
    double r_ = 0.0;
    double gamma_ = 0.0;
    std::vector<double> dinv_;  // 1/d'_i
    std::vector<double> m_;     // forward-elimination multipliers r/d'_{i-1}
    std::vector<double> z_;     // T^{-1} u
    double corr_ = 0.0;         // 1/(1 + v.z)
    mutable std::vector<double> y_;
};

}  // namespace she
