#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wvrecon {

using cxd = std::complex<double>;

enum class Representation { Position, Momentum };

// Uniform sampling window for one dimensionless quadrature axis. Points sit
// at x_min + i*spacing for i in [0, n_points); x_max itself is excluded so
// the grid is compatible with cyclic transforms. The same window doubles as
// the momentum axis.
struct GridSpec {
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t n_points = 1024;
    double spacing = 20.0 / 1024.0;

    double value(std::size_t i) const { return x_min + spacing * static_cast<double>(i); }

    // Nearest grid index to v, clamped to the valid range.
    std::size_t index_near(double v) const;

    bool operator==(const GridSpec&) const = default;
};

// Validates and builds a GridSpec. n_points must be a power of two >= 16 and
// the range must be non-degenerate.
GridSpec make_grid(double x_min, double x_max, std::size_t n_points);

// x in [-10, 10), 1024 points. Holds every coherent amplitude up to |alpha|
// of about 3 with negligible end-of-grid leakage.
GridSpec default_grid();

// Analytic description of a state as a finite superposition of coherent
// states: sum_k coeff_k |alpha_k>.
struct CoherentTerm {
    cxd coeff;
    cxd alpha;
};

struct StateDescriptor {
    std::vector<CoherentTerm> terms;
    bool normalized = true;
};

// Throws ConfigError on an empty or all-zero descriptor.
void validate(const StateDescriptor& descriptor);

// Complex amplitudes sampled on a uniform grid, tagged with the quadrature
// representation they live in.
struct Wavefunction {
    GridSpec grid;
    std::vector<cxd> amplitudes;
    Representation representation = Representation::Position;

    // sqrt(sum |amplitude|^2 * spacing)
    double norm() const;
    double max_abs() const;
};

// Realizes the descriptor on the grid in the position representation. Each
// term contributes
//   <x|alpha> = pi^{-1/4} exp[-(x - sqrt(2) Re a)^2 / 2
//                             + i sqrt(2) Im a x - i Re a Im a],
// the phase convention that yields <a|b> = exp(-|a|^2/2 - |b|^2/2 + a* b).
// When descriptor.normalized is set the grid function is scaled to unit
// norm; the applied constant is reported through norm_constant when given.
// Throws SupportError when the state leaks past the grid ends.
Wavefunction realize_state(const StateDescriptor& descriptor, const GridSpec& grid,
                           double* norm_constant = nullptr);

// psi(P) = (2 pi)^{-1/2} Integral dx e^{-iPx} psi(x), sampled on the same
// window. The sign convention makes <P|X|psi> = i d/dP psi(P).
Wavefunction to_momentum(const Wavefunction& psi);

// Inverse of to_momentum.
Wavefunction to_position(const Wavefunction& psi);

// sum conj(a)*b*spacing; requires matching grid and representation.
cxd inner_product(const Wavefunction& a, const Wavefunction& b);

// Phase-space rotation: alpha_k -> alpha_k * e^{-i angle}, coefficients
// unchanged. The Wigner function of the realized state rotates by the same
// angle.
StateDescriptor rotate_descriptor(const StateDescriptor& descriptor, double angle);

}  // namespace wvrecon
