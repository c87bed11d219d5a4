#include "wvrecon/wigner.hpp"

#include <cmath>
#include <numbers>

#include "wvrecon/errors.hpp"
#include "wvrecon/fft.hpp"
#include "wvrecon/parallel.hpp"

namespace wvrecon {

WignerGrid wigner(const Wavefunction& psi, const GridSpec& p_axis) {
    if (psi.representation != Representation::Position) {
        throw ConfigError("wigner expects a position-representation input");
    }
    const GridSpec& g = psi.grid;
    const std::size_t n = g.n_points;
    const std::size_t m = p_axis.n_points;
    const auto half = static_cast<std::ptrdiff_t>(n / 2);

    // y grid shares the spacing of the state grid, centered on zero
    const double y0 = -g.spacing * static_cast<double>(half);
    const ZoomTransform plan(n, m, y0, g.spacing, 2.0 * p_axis.x_min, 2.0 * p_axis.spacing,
                             +1, g.spacing / std::numbers::pi);

    WignerGrid w;
    w.x_axis = g;
    w.p_axis = p_axis;
    w.values.assign(n * m, 0.0);

    parallel_for(n, [&](std::size_t ix) {
        std::vector<cxd> corr(n, cxd{0.0, 0.0});
        const auto i = static_cast<std::ptrdiff_t>(ix);
        for (std::size_t my = 0; my < n; ++my) {
            const std::ptrdiff_t dy = static_cast<std::ptrdiff_t>(my) - half;
            const std::ptrdiff_t ip = i + dy;
            const std::ptrdiff_t im = i - dy;
            if (ip < 0 || im < 0 || ip >= static_cast<std::ptrdiff_t>(n) ||
                im >= static_cast<std::ptrdiff_t>(n)) {
                continue;
            }
            corr[my] = std::conj(psi.amplitudes[static_cast<std::size_t>(ip)]) *
                       psi.amplitudes[static_cast<std::size_t>(im)];
        }
        std::vector<cxd> row(m);
        plan.apply(corr, row);
        for (std::size_t k = 0; k < m; ++k) w.values[ix * m + k] = row[k].real();
    });

    return w;
}

}  // namespace wvrecon
