#include "wvrecon/spline.hpp"

#include <cassert>
#include <cmath>

namespace wvrecon {

namespace {

// Tridiagonal solve for m[1..n-2] in
//   m[i-1] + 4 m[i] + m[i+1] = 6 (y[i-1] - 2 y[i] + y[i+1]) / dx^2
// with m[0] = m[n-1] = 0.
template <typename T>
void second_derivs(std::span<const T> y, double dx, std::span<T> m) {
    const std::size_t n = y.size();
    assert(m.size() == n && n >= 4);
    std::vector<double> diag(n, 4.0);
    std::vector<T> rhs(n, T{});
    const double inv_h2 = 1.0 / (dx * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        rhs[i] = (y[i - 1] - 2.0 * y[i] + y[i + 1]) * (6.0 * inv_h2);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double f = 1.0 / diag[i - 1];
        diag[i] -= f;
        rhs[i] = rhs[i] - rhs[i - 1] * f;
    }
    m[0] = T{};
    m[n - 1] = T{};
    m[n - 2] = rhs[n - 2] * (1.0 / diag[n - 2]);
    for (std::size_t i = n - 3; i >= 1; --i) {
        m[i] = (rhs[i] - m[i + 1]) * (1.0 / diag[i]);
        if (i == 1) break;
    }
}

}  // namespace

void natural_second_derivatives(std::span<const double> y, double dx,
                                std::span<double> out) {
    second_derivs(y, dx, out);
}

void natural_second_derivatives(std::span<const std::complex<double>> y, double dx,
                                std::span<std::complex<double>> out) {
    second_derivs(y, dx, out);
}

CubicSpline::CubicSpline(double x0, double dx, std::span<const double> y)
    : x0_(x0),
      dx_(dx),
      x_last_(x0 + dx * static_cast<double>(y.size() - 1)),
      y_(y.begin(), y.end()),
      m_(y.size(), 0.0) {
    natural_second_derivatives(y, dx, m_);
}

double CubicSpline::operator()(double u) const {
    if (u < x0_ || u > x_last_) return 0.0;
    std::size_t k = static_cast<std::size_t>((u - x0_) / dx_);
    if (k >= y_.size() - 1) k = y_.size() - 2;
    const double a = (x0_ + dx_ * static_cast<double>(k + 1) - u) / dx_;
    const double b = 1.0 - a;
    return a * y_[k] + b * y_[k + 1] +
           ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * (dx_ * dx_) / 6.0;
}

}  // namespace wvrecon
