#include "wvrecon/reconstructor.hpp"

#include <algorithm>
#include <cmath>

#include "wvrecon/errors.hpp"

namespace wvrecon {

std::vector<double> reconstruct_modulus(std::span<const double> p_hat) {
    std::vector<double> out(p_hat.size());
    for (std::size_t i = 0; i < p_hat.size(); ++i) {
        out[i] = p_hat[i] > 0.0 ? std::sqrt(p_hat[i]) : 0.0;
    }
    return out;
}

PhaseProfile reconstruct_phase(std::span<const double> e_hat,
                               std::span<const double> bin_centers,
                               std::span<const Segment> segments, double theta,
                               double bin_width) {
    if (!(theta > 0.0)) throw ConfigError("reconstruct_phase: theta must be positive");
    if (e_hat.size() != bin_centers.size()) {
        throw ConfigError("reconstruct_phase: e_hat and bin_centers disagree in length");
    }

    PhaseProfile prof;
    prof.P_values.assign(bin_centers.begin(), bin_centers.end());
    prof.phase.assign(bin_centers.size(), 0.0);
    prof.segment_id.assign(bin_centers.size(), -1);
    const double inv_theta = 1.0 / theta;

    for (std::size_t s = 0; s < segments.size(); ++s) {
        const Segment seg = segments[s];
        for (std::size_t b = seg.first; b <= seg.last; ++b) {
            prof.segment_id[b] = static_cast<int>(s);
        }
        if (seg.first == seg.last) {
            prof.anchor_per_segment.push_back(bin_centers[seg.first]);
            prof.single_bin_warning.push_back(1);
            continue;
        }

        const bool straddles_zero =
            bin_centers[seg.first] < 0.0 && bin_centers[seg.last] > 0.0;

        auto sweep_right = [&](std::size_t from) {
            for (std::size_t b = from + 1; b <= seg.last; ++b) {
                prof.phase[b] = prof.phase[b - 1] -
                                inv_theta * 0.5 * (e_hat[b - 1] + e_hat[b]) * bin_width;
            }
        };
        auto sweep_left = [&](std::size_t from) {
            for (std::size_t b = from; b-- > seg.first;) {
                prof.phase[b] = prof.phase[b + 1] +
                                inv_theta * 0.5 * (e_hat[b + 1] + e_hat[b]) * bin_width;
            }
        };

        if (straddles_zero) {
            // anchor at the bin edge P = 0: half-bin step to the adjacent centers
            std::size_t k0 = seg.first;
            while (bin_centers[k0] < 0.0) ++k0;
            prof.phase[k0] = -inv_theta * e_hat[k0] * 0.5 * bin_width;
            prof.phase[k0 - 1] = +inv_theta * e_hat[k0 - 1] * 0.5 * bin_width;
            sweep_right(k0);
            sweep_left(k0 - 1);
            prof.anchor_per_segment.push_back(0.0);
        } else {
            // anchor at the innermost bin center
            std::size_t k0 = seg.first;
            for (std::size_t b = seg.first; b <= seg.last; ++b) {
                if (std::abs(bin_centers[b]) < std::abs(bin_centers[k0])) k0 = b;
            }
            prof.phase[k0] = 0.0;
            sweep_right(k0);
            sweep_left(k0);
            prof.anchor_per_segment.push_back(bin_centers[k0]);
        }
        prof.single_bin_warning.push_back(0);
    }
    return prof;
}

namespace {

double lerp_at(std::span<const double> xs, std::span<const double> ys, double x) {
    if (xs.empty()) return 0.0;
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
    return ys[k] + t * (ys[k + 1] - ys[k]);
}

}  // namespace

Wavefunction assemble_state(std::span<const double> modulus, const PhaseProfile& profile,
                            const GridSpec& grid) {
    if (modulus.size() != profile.P_values.size()) {
        throw ConfigError("assemble_state: modulus and phase profile disagree in length");
    }
    bool any = false;
    for (double m : modulus) {
        if (m > 0.0) any = true;
    }
    if (!any) throw ReconstructionFailure("assemble_state: modulus is identically zero");

    // phase knots: segment bins only
    std::vector<double> ph_x, ph_y;
    ph_x.reserve(profile.P_values.size());
    for (std::size_t b = 0; b < profile.P_values.size(); ++b) {
        if (profile.segment_id[b] >= 0) {
            ph_x.push_back(profile.P_values[b]);
            ph_y.push_back(profile.phase[b]);
        }
    }

    Wavefunction psi;
    psi.grid = grid;
    psi.representation = Representation::Momentum;
    psi.amplitudes.assign(grid.n_points, cxd{0.0, 0.0});

    const double lo = profile.P_values.front();
    const double hi = profile.P_values.back();
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double P = grid.value(i);
        if (P < lo || P > hi) continue;
        const double m = lerp_at(profile.P_values, modulus, P);
        if (m <= 0.0) continue;
        psi.amplitudes[i] = std::polar(m, lerp_at(ph_x, ph_y, P));
    }

    const double n = psi.norm();
    if (n <= 0.0) throw ReconstructionFailure("assemble_state: assembled state has zero norm");
    const double inv = 1.0 / n;
    for (auto& a : psi.amplitudes) a *= inv;
    return psi;
}

double reconstruction_error(const Wavefunction& psi_exact, const Wavefunction& psi_rec) {
    const double overlap = std::abs(inner_product(psi_exact, psi_rec));
    return std::clamp(1.0 - overlap * overlap, 0.0, 1.0);
}

}  // namespace wvrecon
