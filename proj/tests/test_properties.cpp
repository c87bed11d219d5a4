// Invariant checks over randomly generated coherent superpositions.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "analytic_reference.hpp"
#include "wvrecon/coupler.hpp"
#include "wvrecon/grid.hpp"
#include "wvrecon/wigner.hpp"

using namespace wvrecon;

namespace {

struct Lcg {
    std::uint64_t state;

    double uniform() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    }

    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

StateDescriptor random_descriptor(Lcg& rng) {
    const int n_terms = 2 + static_cast<int>(rng.uniform() * 3.0);
    StateDescriptor d;
    d.normalized = true;
    for (int k = 0; k < n_terms; ++k) {
        const double mag = rng.range(0.0, 2.5);
        const double ang = rng.range(0.0, 2.0 * std::numbers::pi);
        const cxd coeff = std::polar(rng.range(0.2, 1.0), rng.range(0.0, 2.0 * std::numbers::pi));
        d.terms.push_back({coeff, std::polar(mag, ang)});
    }
    return d;
}

}  // namespace

TEST_CASE("random superpositions satisfy the core invariants") {
    const GridSpec g = default_grid();
    Lcg rng{20240517};

    for (int trial = 0; trial < 12; ++trial) {
        const StateDescriptor d = random_descriptor(rng);
        CAPTURE(trial);

        const Wavefunction psi = realize_state(d, g);
        CHECK(std::abs(psi.norm() - 1.0) < 1e-8);

        // grid inner products reproduce the closed-form Gram matrix
        const auto t = oracle::normalize_terms(d);
        cxd self{0.0, 0.0};
        for (std::size_t i = 0; i < t.coeff.size(); ++i) {
            for (std::size_t j = 0; j < t.coeff.size(); ++j) {
                self += std::conj(t.coeff[i]) * t.coeff[j] *
                        oracle::overlap(t.alpha[i], t.alpha[j]);
            }
        }
        CHECK(std::abs(self.real() - 1.0) < 1e-9);

        const Wavefunction pm = to_momentum(psi);
        CHECK(std::abs(pm.norm() - psi.norm()) < 1e-8);  // Parseval

        // momentum amplitudes against the closed form
        double worst = 0.0;
        for (std::size_t i = 0; i < g.n_points; i += 7) {
            worst = std::max(worst,
                             std::abs(pm.amplitudes[i] - oracle::psi_momentum(t, g.value(i))));
        }
        CHECK(worst < 1e-8);

        const Wavefunction back = to_position(pm);
        double rt = 0.0;
        for (std::size_t i = 0; i < g.n_points; ++i) {
            rt = std::max(rt, std::abs(back.amplitudes[i] - psi.amplitudes[i]));
        }
        CHECK(rt < 1e-9);

        // rotation leaves the norm and the Gram structure intact
        const StateDescriptor rotated = rotate_descriptor(d, rng.range(0.0, 2.0 * std::numbers::pi));
        CHECK(std::abs(realize_state(rotated, g).norm() - 1.0) < 1e-8);

        // weak value of the momentum quadrature stays exactly real
        for (double P : {-1.3, 0.2, 1.9}) {
            CHECK(weak_value(pm, P, Quadrature::P).value.imag() == 0.0);
        }
    }
}

TEST_CASE("random superpositions keep the Wigner function bounded and normalized") {
    const GridSpec g = default_grid();
    const GridSpec paxis = make_grid(-10.0, 10.0, 256);
    Lcg rng{777};

    for (int trial = 0; trial < 4; ++trial) {
        const StateDescriptor d = random_descriptor(rng);
        CAPTURE(trial);
        const WignerGrid w = wigner(realize_state(d, g), paxis);
        double total = 0.0;
        double peak = 0.0;
        for (double v : w.values) {
            total += v;
            peak = std::max(peak, std::abs(v));
        }
        total *= w.x_axis.spacing * w.p_axis.spacing;
        CHECK(std::abs(total - 1.0) < 1e-3);
        CHECK(peak <= 1.0 / std::numbers::pi + 1e-6);
    }
}

TEST_CASE("random superpositions preserve probability through the coupler") {
    Lcg rng{31337};
    for (int trial = 0; trial < 3; ++trial) {
        const StateDescriptor d = random_descriptor(rng);
        const double theta = rng.range(0.02, std::numbers::pi / 4.0);
        CAPTURE(trial);
        CAPTURE(theta);

        const GridSpec g = default_grid();
        const Wavefunction sys = realize_state(d, g);
        const Wavefunction met = realize_state(oracle::vacuum_state(), g);
        const JointAmplitude joint =
            joint_momentum_position(beam_split(sys, met, CouplingParams(theta)));
        CHECK(std::abs(joint.total_probability() - 1.0) < 1e-6);

        const std::vector<double> p = postselection_density(joint);
        double total = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i] >= 0.0);
            total += p[i] * g.spacing;
        }
        CHECK(std::abs(total - 1.0) < 1e-6);
    }
}
