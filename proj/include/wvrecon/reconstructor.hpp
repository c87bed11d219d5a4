#pragma once

#include <span>
#include <vector>

#include "wvrecon/grid.hpp"
#include "wvrecon/sampler.hpp"

namespace wvrecon {

// Phase samples at the bin centers. Gap bins carry segment_id -1 and phase 0.
// Each segment is integrated independently from its own anchor, where the
// phase is pinned to zero; the relative phase between segments is therefore
// a convention, not data.
struct PhaseProfile {
    std::vector<double> P_values;
    std::vector<double> phase;
    std::vector<int> segment_id;
    std::vector<double> anchor_per_segment;
    std::vector<char> single_bin_warning;  // per segment
};

// |psi(P)| = sqrt(p); zero where p is zero.
std::vector<double> reconstruct_modulus(std::span<const double> p_hat);

// phi(P) = -(1/theta) * cumulative trapezoid of e_hat from the segment
// anchor outward in both directions. The segment that straddles P = 0 is
// anchored at that bin edge (half-bin step to the first centers); any other
// segment is anchored at its bin center closest to zero.
PhaseProfile reconstruct_phase(std::span<const double> e_hat,
                               std::span<const double> bin_centers,
                               std::span<const Segment> segments, double theta,
                               double bin_width);

// Interpolates modulus and phase linearly from the bin centers onto the
// grid, zero outside the sampled span, and normalizes. Phase knots are the
// segment bins only, so gap bins do not inject kinks. Throws
// ReconstructionFailure when every modulus sample is zero.
Wavefunction assemble_state(std::span<const double> modulus, const PhaseProfile& profile,
                            const GridSpec& grid);

// delta = 1 - |<exact|rec>|^2.
double reconstruction_error(const Wavefunction& psi_exact, const Wavefunction& psi_rec);

struct ReconstructionResult {
    std::vector<double> modulus;
    PhaseProfile phase_profile;
    Wavefunction psi_rec;
    double delta = 1.0;
    int segments = 0;
    bool failed = false;
};

}  // namespace wvrecon
