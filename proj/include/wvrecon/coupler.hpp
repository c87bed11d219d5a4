#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wvrecon/grid.hpp"

namespace wvrecon {

// Beam-splitter coupling angle. sin(theta) is the reflection coefficient;
// theta = pi/4 is the balanced 50:50 splitter and small theta is the weak
// coupling regime.
struct CouplingParams {
    double theta;
    explicit CouplingParams(double t);
};

// Two-mode amplitude over (system position X, meter position x), row-major
// with the system index slowest.
struct JointPosition {
    GridSpec system_axis;
    GridSpec meter_axis;
    std::vector<cxd> amplitudes;
};

// Two-mode amplitude over (system momentum P, meter position x) - the
// representation the two homodyne detectors sample.
struct JointAmplitude {
    GridSpec p_axis;
    GridSpec x_axis;
    std::vector<cxd> amplitudes;

    double total_probability() const;
};

// Half-open momentum interval [lo, hi).
struct PInterval {
    double lo;
    double hi;
};

enum class Quadrature { X, P };

struct WeakValueSample {
    double P = 0.0;
    cxd value{0.0, 0.0};
    bool valid = false;
};

// Exact action of exp[-i theta (X_S p_M - P_S x_M)] on a product state. The
// generator is a two-mode angular momentum, so the exact result is a rigid
// rotation of the joint position wavefunction,
//   Psi'(X, x) = psi(X cos t + x sin t) * phi(-X sin t + x cos t),
// evaluated with cubic-spline interpolation on the product grid. Throws
// SupportError when probability leaks off the grid beyond 1e-6.
JointPosition beam_split(const Wavefunction& system, const Wavefunction& meter,
                         CouplingParams params);

// Rigid rotation of an arbitrary two-mode position function by the given
// angle (beam_split equals rotate_joint applied to a product state, using
// the same angle convention). Tensor-product natural bicubic interpolation;
// points mapped outside the grid read as zero. Unitary to interpolation
// accuracy, so rotating by theta and then -theta recovers the input.
JointPosition rotate_joint(const JointPosition& joint, double angle);

// Partial transform of the system coordinate to momentum (same convention as
// to_momentum); the meter stays in position.
JointAmplitude joint_momentum_position(const JointPosition& joint);

// p(P_i) = sum_j |amplitude(i,j)|^2 * dx. Integrates to one.
std::vector<double> postselection_density(const JointAmplitude& joint);

// Probability mass and meter-position-weighted mass per system row,
// integrated over the meter axis and expressed as densities in P. Shared by
// the bin estimators below and the exact pipeline.
struct RowMoments {
    std::vector<double> density;         // p(P_i)
    std::vector<double> meter_weighted;  // Integral x |Psi(P_i, x)|^2 dx
};
RowMoments row_moments(const JointAmplitude& joint);

// Conditional mean of the meter position given a system outcome in the bin:
//   E = [sum_{i in bin} sum_j x_j |a(i,j)|^2] / [sum_{i in bin} sum_j |a(i,j)|^2].
// Boundary cells are weighted by their fractional overlap with the bin.
// Throws EmptyBinError when the bin probability is at or below 1e-12.
double postselected_meter_mean(const JointAmplitude& joint, PInterval bin);

// Weak values against a momentum postselection at P:
//   X: i * (centered finite difference of psi at P) / psi(P)
//   P: the outcome itself (exactly real).
// Marked invalid where |psi(P)| < 1e-6 * max|psi|.
WeakValueSample weak_value(const Wavefunction& psi_momentum, double P, Quadrature which);

// theta * Re[X_w^{(P)}]; nullopt where the weak value is invalid.
std::optional<double> linear_order_prediction(const Wavefunction& psi_momentum,
                                              CouplingParams params, double P);

}  // namespace wvrecon
