#include "wvrecon/coupler.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wvrecon/errors.hpp"
#include "wvrecon/fft.hpp"
#include "wvrecon/parallel.hpp"
#include "wvrecon/spline.hpp"

namespace wvrecon {

namespace {

constexpr double kValidityFraction = 1e-6;  // weak-value denominator cutoff
constexpr double kMinBinProbability = 1e-12;

struct ComplexSpline {
    CubicSpline re;
    CubicSpline im;

    ComplexSpline(const GridSpec& g, const std::vector<cxd>& amps)
        : re(g.x_min, g.spacing, extract(amps, false)),
          im(g.x_min, g.spacing, extract(amps, true)) {}

    cxd operator()(double u) const { return {re(u), im(u)}; }

private:
    static std::vector<double> extract(const std::vector<cxd>& amps, bool imag) {
        std::vector<double> out(amps.size());
        for (std::size_t i = 0; i < amps.size(); ++i) {
            out[i] = imag ? amps[i].imag() : amps[i].real();
        }
        return out;
    }
};

}  // namespace

CouplingParams::CouplingParams(double t) : theta(t) {
    if (!(t > 0.0) || t > std::numbers::pi / 4.0 + 1e-12) {
        throw ConfigError("coupling theta must lie in (0, pi/4], got " + std::to_string(t));
    }
}

double JointAmplitude::total_probability() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s * p_axis.spacing * x_axis.spacing;
}

JointPosition beam_split(const Wavefunction& system, const Wavefunction& meter,
                         CouplingParams params) {
    if (system.representation != Representation::Position ||
        meter.representation != Representation::Position) {
        throw ConfigError("beam_split expects position-representation inputs");
    }
    if (!(system.grid == meter.grid)) {
        throw ConfigError("beam_split expects system and meter on the same grid");
    }

    const GridSpec& g = system.grid;
    const std::size_t n = g.n_points;
    const double c = std::cos(params.theta);
    const double s = std::sin(params.theta);

    const ComplexSpline sys(g, system.amplitudes);
    const ComplexSpline met(g, meter.amplitudes);

    JointPosition joint;
    joint.system_axis = g;
    joint.meter_axis = g;
    joint.amplitudes.assign(n * n, cxd{0.0, 0.0});

    parallel_for(n, [&](std::size_t i) {
        const double X = g.value(i);
        cxd* row = joint.amplitudes.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = g.value(j);
            row[j] = sys(X * c + x * s) * met(-X * s + x * c);
        }
    });

    double total = 0.0;
    for (const auto& a : joint.amplitudes) total += std::norm(a);
    total *= g.spacing * g.spacing;
    const double expected = std::norm(system.norm() * meter.norm());
    if (std::abs(total - expected) > 1e-6 * expected) {
        throw SupportError("beam_split: rotated state leaks off the grid (probability " +
                           std::to_string(total) + " of " + std::to_string(expected) + ")");
    }
    return joint;
}

namespace {

// Tensor-product natural bicubic surface over the product grid. Stores the
// per-axis spline curvatures so evaluation at an arbitrary point is O(1).
class BicubicSurface {
public:
    BicubicSurface(const GridSpec& sys, const GridSpec& met, const std::vector<cxd>& values)
        : sys_(sys), met_(met), a_(values) {
        const std::size_t ns = sys.n_points;
        const std::size_t nm = met.n_points;
        cxx_.resize(ns * nm);
        bXX_.resize(ns * nm);
        dXXxx_.resize(ns * nm);

        parallel_for(ns, [&](std::size_t i) {
            natural_second_derivatives(
                std::span<const cxd>(a_.data() + i * nm, nm), met.spacing,
                std::span<cxd>(cxx_.data() + i * nm, nm));
        });
        parallel_for(nm, [&](std::size_t j) {
            std::vector<cxd> col(ns), out(ns);
            for (std::size_t i = 0; i < ns; ++i) col[i] = a_[i * nm + j];
            natural_second_derivatives(std::span<const cxd>(col), sys.spacing, out);
            for (std::size_t i = 0; i < ns; ++i) bXX_[i * nm + j] = out[i];
        });
        parallel_for(ns, [&](std::size_t i) {
            natural_second_derivatives(
                std::span<const cxd>(bXX_.data() + i * nm, nm), met.spacing,
                std::span<cxd>(dXXxx_.data() + i * nm, nm));
        });
    }

    cxd operator()(double u, double v) const {
        const double u_last = sys_.value(sys_.n_points - 1);
        const double v_last = met_.value(met_.n_points - 1);
        if (u < sys_.x_min || u > u_last || v < met_.x_min || v > v_last) {
            return {0.0, 0.0};
        }
        const std::size_t nm = met_.n_points;
        std::size_t k = static_cast<std::size_t>((u - sys_.x_min) / sys_.spacing);
        std::size_t l = static_cast<std::size_t>((v - met_.x_min) / met_.spacing);
        if (k >= sys_.n_points - 1) k = sys_.n_points - 2;
        if (l >= nm - 1) l = nm - 2;

        const double aX = (sys_.value(k + 1) - u) / sys_.spacing;
        const double bX = 1.0 - aX;
        const double ax = (met_.value(l + 1) - v) / met_.spacing;
        const double bx = 1.0 - ax;
        const double wX0 = (aX * aX * aX - aX) * sys_.spacing * sys_.spacing / 6.0;
        const double wX1 = (bX * bX * bX - bX) * sys_.spacing * sys_.spacing / 6.0;
        const double wx0 = (ax * ax * ax - ax) * met_.spacing * met_.spacing / 6.0;
        const double wx1 = (bx * bx * bx - bx) * met_.spacing * met_.spacing / 6.0;

        auto along_meter = [&](const std::vector<cxd>& val, const std::vector<cxd>& curv,
                               std::size_t i) {
            const std::size_t o = i * nm + l;
            return ax * val[o] + bx * val[o + 1] + wx0 * curv[o] + wx1 * curv[o + 1];
        };
        const cxd v0 = along_meter(a_, cxx_, k);
        const cxd v1 = along_meter(a_, cxx_, k + 1);
        const cxd m0 = along_meter(bXX_, dXXxx_, k);
        const cxd m1 = along_meter(bXX_, dXXxx_, k + 1);
        return aX * v0 + bX * v1 + wX0 * m0 + wX1 * m1;
    }

private:
    GridSpec sys_;
    GridSpec met_;
    const std::vector<cxd>& a_;
    std::vector<cxd> cxx_;
    std::vector<cxd> bXX_;
    std::vector<cxd> dXXxx_;
};

}  // namespace

JointPosition rotate_joint(const JointPosition& joint, double angle) {
    const BicubicSurface surface(joint.system_axis, joint.meter_axis, joint.amplitudes);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const std::size_t ns = joint.system_axis.n_points;
    const std::size_t nm = joint.meter_axis.n_points;

    JointPosition out;
    out.system_axis = joint.system_axis;
    out.meter_axis = joint.meter_axis;
    out.amplitudes.assign(ns * nm, cxd{0.0, 0.0});
    parallel_for(ns, [&](std::size_t i) {
        const double X = joint.system_axis.value(i);
        cxd* row = out.amplitudes.data() + i * nm;
        for (std::size_t j = 0; j < nm; ++j) {
            const double x = joint.meter_axis.value(j);
            row[j] = surface(X * c + x * s, -X * s + x * c);
        }
    });
    return out;
}

JointAmplitude joint_momentum_position(const JointPosition& joint) {
    const GridSpec& gs = joint.system_axis;
    const GridSpec& gm = joint.meter_axis;
    const std::size_t ns = gs.n_points;
    const std::size_t nm = gm.n_points;

    const double scale = gs.spacing / std::sqrt(2.0 * std::numbers::pi);
    const ZoomTransform plan(ns, ns, gs.x_min, gs.spacing, gs.x_min, gs.spacing, -1, scale);

    JointAmplitude out;
    out.p_axis = gs;
    out.x_axis = gm;
    out.amplitudes.assign(ns * nm, cxd{0.0, 0.0});

    // transform over the system index for each fixed meter column
    parallel_for(nm, [&](std::size_t j) {
        std::vector<cxd> in(ns), col(ns);
        for (std::size_t i = 0; i < ns; ++i) in[i] = joint.amplitudes[i * nm + j];
        plan.apply(in, col);
        for (std::size_t i = 0; i < ns; ++i) out.amplitudes[i * nm + j] = col[i];
    });
    return out;
}

RowMoments row_moments(const JointAmplitude& joint) {
    const std::size_t np = joint.p_axis.n_points;
    const std::size_t nx = joint.x_axis.n_points;
    const double dx = joint.x_axis.spacing;

    RowMoments m;
    m.density.assign(np, 0.0);
    m.meter_weighted.assign(np, 0.0);
    for (std::size_t i = 0; i < np; ++i) {
        const cxd* row = joint.amplitudes.data() + i * nx;
        double p = 0.0, w = 0.0;
        for (std::size_t j = 0; j < nx; ++j) {
            const double a2 = std::norm(row[j]);
            p += a2;
            w += a2 * joint.x_axis.value(j);
        }
        m.density[i] = p * dx;
        m.meter_weighted[i] = w * dx;
    }
    return m;
}

std::vector<double> postselection_density(const JointAmplitude& joint) {
    return row_moments(joint).density;
}

double postselected_meter_mean(const JointAmplitude& joint, PInterval bin) {
    if (!(bin.lo < bin.hi)) throw ConfigError("postselected_meter_mean: empty interval");
    const GridSpec& gp = joint.p_axis;
    const double half = 0.5 * gp.spacing;

    const RowMoments m = row_moments(joint);
    double mass = 0.0, num = 0.0;
    for (std::size_t i = 0; i < gp.n_points; ++i) {
        const double center = gp.value(i);
        const double lo = std::max(bin.lo, center - half);
        const double hi = std::min(bin.hi, center + half);
        if (hi <= lo) continue;
        const double w = hi - lo;
        mass += m.density[i] * w;
        num += m.meter_weighted[i] * w;
    }
    if (mass <= kMinBinProbability) {
        throw EmptyBinError("postselected_meter_mean: bin probability " +
                            std::to_string(mass) + " below threshold");
    }
    return num / mass;
}

WeakValueSample weak_value(const Wavefunction& psi_momentum, double P, Quadrature which) {
    if (psi_momentum.representation != Representation::Momentum) {
        throw ConfigError("weak_value expects a momentum-representation input");
    }
    const GridSpec& g = psi_momentum.grid;
    const std::size_t i = g.index_near(P);
    const auto& a = psi_momentum.amplitudes;
    const std::size_t n = a.size();
    const double h = g.spacing;

    WeakValueSample sample;
    sample.P = g.value(i);
    sample.valid = std::abs(a[i]) >= kValidityFraction * psi_momentum.max_abs();

    if (which == Quadrature::P) {
        sample.value = cxd{sample.P, 0.0};
        return sample;
    }

    cxd dpsi;
    if (i >= 2 && i + 2 < n) {
        // fourth-order centered stencil
        dpsi = (-a[i + 2] + 8.0 * a[i + 1] - 8.0 * a[i - 1] + a[i - 2]) / (12.0 * h);
    } else if (i >= 1 && i + 1 < n) {
        dpsi = (a[i + 1] - a[i - 1]) / (2.0 * h);
    } else if (i == 0) {
        dpsi = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * h);
    } else {
        dpsi = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) / (2.0 * h);
    }

    if (sample.valid) {
        sample.value = cxd{0.0, 1.0} * dpsi / a[i];
    }
    return sample;
}

std::optional<double> linear_order_prediction(const Wavefunction& psi_momentum,
                                              CouplingParams params, double P) {
    const WeakValueSample wv = weak_value(psi_momentum, P, Quadrature::X);
    if (!wv.valid) return std::nullopt;
    return params.theta * wv.value.real();
}

}  // namespace wvrecon
