#include "she/tridiag.hpp"

#include <stdexcept>

namespace she {

PeriodicTridiag::PeriodicTridiag(int n, double r) : n_(n), r_(r) {
    if (n < 4) throw std::invalid_argument("PeriodicTridiag: n must be >= 4");
    const double diag = 1.0 + 2.0 * r;
    gamma_ = -diag;
    dinv_.resize(static_cast<size_t>(n));
    m_.resize(static_cast<size_t>(n));
    y_.resize(static_cast<size_t>(n));

    std::vector<double> d(static_cast<size_t>(n), diag);
    d[0] = diag - gamma_;
    d[static_cast<size_t>(n - 1)] = diag - r * r / gamma_;

    double dp = d[0];
    dinv_[0] = 1.0 / dp;
    m_[0] = 0.0;
    for (int i = 1; i < n; ++i) {
        m_[static_cast<size_t>(i)] = r / dp;
        dp = d[static_cast<size_t>(i)] - r * r / dp;
        dinv_[static_cast<size_t>(i)] = 1.0 / dp;
    }

    std::vector<double> u(static_cast<size_t>(n), 0.0);
    u[0] = gamma_;
    u[static_cast<size_t>(n - 1)] = -r;
    z_.resize(static_cast<size_t>(n));
    thomas(u.data(), z_.data());
    const double vz = z_[0] - (r / gamma_) * z_[static_cast<size_t>(n - 1)];
    corr_ = 1.0 / (1.0 + vz);
}

void PeriodicTridiag::thomas(const double* b, double* x) const {
    const int n = n_;
    const double r = r_;
    y_[0] = b[0];
    for (int i = 1; i < n; ++i) y_[static_cast<size_t>(i)] = b[i] + m_[static_cast<size_t>(i)] * y_[static_cast<size_t>(i - 1)];
    x[n - 1] = y_[static_cast<size_t>(n - 1)] * dinv_[static_cast<size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i)
        x[i] = (y_[static_cast<size_t>(i)] + r * x[i + 1]) * dinv_[static_cast<size_t>(i)];
}

void PeriodicTridiag::solve(const double* b, double* x) const {
    thomas(b, x);
    const double vy = x[0] - (r_ / gamma_) * x[n_ - 1];
    const double f = vy * corr_;
    for (int i = 0; i < n_; ++i) x[i] -= f * z_[static_cast<size_t>(i)];
}

}  // namespace she
