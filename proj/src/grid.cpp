#include "wvrecon/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wvrecon/errors.hpp"
#include "wvrecon/fft.hpp"

namespace wvrecon {

namespace {

constexpr double kQuarterRootPi = 0.7511255444649425;  // pi^{-1/4}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

cxd coherent_position_amplitude(cxd alpha, double x) {
    const double x0 = std::numbers::sqrt2 * alpha.real();
    const double p0 = std::numbers::sqrt2 * alpha.imag();
    const double envelope = std::exp(-0.5 * (x - x0) * (x - x0));
    return kQuarterRootPi * envelope * std::polar(1.0, p0 * x - 0.5 * x0 * p0);
}

void check_support(const Wavefunction& psi) {
    const double peak = psi.max_abs();
    const double edge =
        std::max(std::abs(psi.amplitudes.front()), std::abs(psi.amplitudes.back()));
    if (peak <= 0.0 || edge > 1e-6 * peak) {
        throw SupportError("state support overflows the grid (end amplitude " +
                           std::to_string(edge) + ", peak " + std::to_string(peak) + ")");
    }
}

}  // namespace

std::size_t GridSpec::index_near(double v) const {
    const double raw = (v - x_min) / spacing;
    if (raw <= 0.0) return 0;
    const auto i = static_cast<std::size_t>(std::llround(raw));
    return i >= n_points ? n_points - 1 : i;
}

GridSpec make_grid(double x_min, double x_max, std::size_t n_points) {
    if (!(x_min < x_max)) {
        throw ConfigError("grid range is degenerate: x_min must be < x_max");
    }
    if (n_points < 16 || !is_pow2(n_points)) {
        throw ConfigError("grid n_points must be a power of two >= 16, got " +
                          std::to_string(n_points));
    }
    GridSpec g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_points = n_points;
    g.spacing = (x_max - x_min) / static_cast<double>(n_points);
    return g;
}

GridSpec default_grid() { return make_grid(-10.0, 10.0, 1024); }

void validate(const StateDescriptor& descriptor) {
    if (descriptor.terms.empty()) {
        throw ConfigError("state descriptor needs at least one coherent term");
    }
    bool any = false;
    for (const auto& t : descriptor.terms) {
        if (std::abs(t.coeff) > 0.0) any = true;
    }
    if (!any) throw ConfigError("state descriptor coefficients are all zero");
}

double Wavefunction::norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s * grid.spacing);
}

double Wavefunction::max_abs() const {
    double m = 0.0;
    for (const auto& a : amplitudes) m = std::max(m, std::abs(a));
    return m;
}

Wavefunction realize_state(const StateDescriptor& descriptor, const GridSpec& grid,
                           double* norm_constant) {
    validate(descriptor);
    const double reach = (grid.x_max - 3.0) / std::numbers::sqrt2;
    for (const auto& t : descriptor.terms) {
        if (std::abs(t.alpha) > reach) {
            throw SupportError("coherent amplitude |alpha|=" + std::to_string(std::abs(t.alpha)) +
                               " does not fit the grid (limit " + std::to_string(reach) + ")");
        }
    }

    Wavefunction psi;
    psi.grid = grid;
    psi.representation = Representation::Position;
    psi.amplitudes.assign(grid.n_points, cxd{0.0, 0.0});
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.value(i);
        cxd sum{0.0, 0.0};
        for (const auto& t : descriptor.terms) {
            sum += t.coeff * coherent_position_amplitude(t.alpha, x);
        }
        psi.amplitudes[i] = sum;
    }

    double constant = 1.0;
    if (descriptor.normalized) {
        const double n = psi.norm();
        if (n <= 0.0) throw ConfigError("descriptor realizes to the zero function");
        constant = 1.0 / n;
        for (auto& a : psi.amplitudes) a *= constant;
    }
    if (norm_constant) *norm_constant = constant;

    check_support(psi);
    return psi;
}

Wavefunction to_momentum(const Wavefunction& psi) {
    if (psi.representation != Representation::Position) {
        throw ConfigError("to_momentum expects a position-representation input");
    }
    const GridSpec& g = psi.grid;
    const double scale = g.spacing / std::sqrt(2.0 * std::numbers::pi);
    ZoomTransform plan(g.n_points, g.n_points, g.x_min, g.spacing, g.x_min, g.spacing,
                       -1, scale);
    Wavefunction out;
    out.grid = g;
    out.representation = Representation::Momentum;
    out.amplitudes.resize(g.n_points);
    plan.apply(psi.amplitudes, out.amplitudes);
    return out;
}

Wavefunction to_position(const Wavefunction& psi) {
    if (psi.representation != Representation::Momentum) {
        throw ConfigError("to_position expects a momentum-representation input");
    }
    const GridSpec& g = psi.grid;
    const double scale = g.spacing / std::sqrt(2.0 * std::numbers::pi);
    ZoomTransform plan(g.n_points, g.n_points, g.x_min, g.spacing, g.x_min, g.spacing,
                       +1, scale);
    Wavefunction out;
    out.grid = g;
    out.representation = Representation::Position;
    out.amplitudes.resize(g.n_points);
    plan.apply(psi.amplitudes, out.amplitudes);
    return out;
}

cxd inner_product(const Wavefunction& a, const Wavefunction& b) {
    if (!(a.grid == b.grid)) throw ConfigError("inner_product: grid mismatch");
    if (a.representation != b.representation) {
        throw ConfigError("inner_product: representation mismatch");
    }
    cxd s{0.0, 0.0};
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return s * a.grid.spacing;
}

StateDescriptor rotate_descriptor(const StateDescriptor& descriptor, double angle) {
    StateDescriptor out = descriptor;
    const cxd phase = std::polar(1.0, -angle);
    for (auto& t : out.terms) t.alpha *= phase;
    return out;
}

}  // namespace wvrecon
