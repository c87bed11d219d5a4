#pragma once

#include <cstddef>
#include <vector>

#include "wvrecon/grid.hpp"

namespace wvrecon {

struct WignerGrid {
    GridSpec x_axis;
    GridSpec p_axis;
    std::vector<double> values;  // row-major, [ix * p_axis.n_points + ip]

    double at(std::size_t ix, std::size_t ip) const {
        return values[ix * p_axis.n_points + ip];
    }
};

// W(X, P) = (1/pi) Integral dy conj(psi(X+y)) psi(X-y) e^{2iPy}, one zoom
// transform per X row. The X axis is inherited from psi; the P axis is free.
// psi must be in the position representation.
WignerGrid wigner(const Wavefunction& psi, const GridSpec& p_axis);

}  // namespace wvrecon
