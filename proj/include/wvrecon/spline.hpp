#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wvrecon {

// Second derivatives at the knots of the natural cubic spline through y
// (uniform spacing dx). out must have y.size() entries; the end values are
// zero by the natural boundary condition.
void natural_second_derivatives(std::span<const double> y, double dx,
                                std::span<double> out);
void natural_second_derivatives(std::span<const std::complex<double>> y, double dx,
                                std::span<std::complex<double>> out);

// Natural cubic spline over a uniform grid x0 + i*dx. Evaluation outside
// [x0, x0 + (n-1)*dx] returns 0, matching the grid-support convention for
// wavefunctions.
class CubicSpline {
public:
    CubicSpline(double x0, double dx, std::span<const double> y);

    double operator()(double u) const;

private:
    double x0_;
    double dx_;
    double x_last_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace wvrecon
