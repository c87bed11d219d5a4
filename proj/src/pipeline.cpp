#include "wvrecon/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>

#include "wvrecon/errors.hpp"
#include "wvrecon/io.hpp"
#include "wvrecon/sampler.hpp"
#include "wvrecon/version.hpp"
#include "wvrecon/wigner.hpp"

namespace wvrecon {

namespace fs = std::filesystem;

void validate(const RunConfig& config) {
    validate(config.state);
    CouplingParams check(config.theta);  // throws on a bad theta
    (void)check;
    if (!(config.bin_width > 0.0)) throw ConfigError("bin_width must be positive");
    if (config.n_runs < 0) throw ConfigError("n_runs must be >= 0");
}

RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    if (!j.contains("state")) throw ConfigError("run config needs a \"state\" descriptor");
    if (!j.contains("theta")) throw ConfigError("run config needs \"theta\"");

    RunConfig c;
    c.state = descriptor_from_json(j["state"]);
    try {
        c.theta = j["theta"].get<double>();
        c.n_runs = j.value("n_runs", std::int64_t{0});
        c.seed = j.value("seed", std::uint64_t{1});
        c.bin_width = j.value("bin_width", 0.1);
        c.rotation_angle = j.value("rotation_angle", 0.0);
        c.output_dir = j.value("output_dir", std::string{});
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            c.grid = make_grid(g.value("x_min", -10.0), g.value("x_max", 10.0),
                               g.value("n_points", std::size_t{1024}));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad run config field: ") + e.what());
    }
    validate(c);
    return c;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["state"] = descriptor_to_json(c.state);
    j["theta"] = c.theta;
    j["n_runs"] = c.n_runs;
    j["seed"] = c.seed;
    j["bin_width"] = c.bin_width;
    j["grid"] = {{"x_min", c.grid.x_min},
                 {"x_max", c.grid.x_max},
                 {"n_points", c.grid.n_points}};
    j["rotation_angle"] = c.rotation_angle;
    j["output_dir"] = c.output_dir;
    return j;
}

PreparedJoint prepare_joint(const RunConfig& config) {
    validate(config);
    StateDescriptor descriptor = config.state;
    if (config.rotation_angle != 0.0) {
        descriptor = rotate_descriptor(descriptor, config.rotation_angle);
    }
    PreparedJoint p;
    p.system_position = realize_state(descriptor, config.grid);
    p.system_momentum = to_momentum(p.system_position);
    const StateDescriptor vacuum{{{cxd{1.0, 0.0}, cxd{0.0, 0.0}}}, true};
    const Wavefunction meter = realize_state(vacuum, config.grid);
    const JointPosition joint_xx =
        beam_split(p.system_position, meter, CouplingParams(config.theta));
    p.joint = joint_momentum_position(joint_xx);
    return p;
}

ExactBinnedStats exact_binned_stats(const JointAmplitude& joint, double bin_width,
                                    double mass_threshold) {
    if (!(bin_width > 0.0)) throw ConfigError("exact_binned_stats: bad bin width");
    const GridSpec& gp = joint.p_axis;
    const RowMoments moments = row_moments(joint);
    const double half = 0.5 * gp.spacing;

    auto bin_of = [&](double p) {
        return static_cast<std::int64_t>(std::floor(p / bin_width));
    };
    const std::int64_t b_lo = bin_of(gp.value(0) - half);
    const std::int64_t b_hi = bin_of(gp.value(gp.n_points - 1) + half - 1e-15);
    if (b_hi - b_lo >= (std::int64_t{1} << 26)) {
        throw ConfigError("exact_binned_stats: bin_width too small for the grid range");
    }
    const auto nb = static_cast<std::size_t>(b_hi - b_lo + 1);

    std::vector<double> mass(nb, 0.0), num(nb, 0.0);
    for (std::size_t i = 0; i < gp.n_points; ++i) {
        const double cl = gp.value(i) - half;
        const double cr = gp.value(i) + half;
        for (std::int64_t b = bin_of(cl); b <= bin_of(cr - 1e-15); ++b) {
            const double lo = std::max(cl, static_cast<double>(b) * bin_width);
            const double hi = std::min(cr, static_cast<double>(b + 1) * bin_width);
            if (hi <= lo) continue;
            const auto idx = static_cast<std::size_t>(b - b_lo);
            mass[idx] += moments.density[i] * (hi - lo);
            num[idx] += moments.meter_weighted[i] * (hi - lo);
        }
    }

    std::size_t first = nb, last = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        if (mass[b] > mass_threshold) {
            if (first == nb) first = b;
            last = b;
        }
    }
    ExactBinnedStats stats;
    stats.bin_width = bin_width;
    if (first == nb) return stats;  // nothing above threshold

    for (std::size_t b = first; b <= last; ++b) {
        const bool in = mass[b] > mass_threshold;
        stats.bin_centers.push_back(
            (static_cast<double>(b_lo + static_cast<std::int64_t>(b)) + 0.5) * bin_width);
        stats.p_mean.push_back(mass[b] / bin_width);
        stats.e_mean.push_back(in ? num[b] / mass[b] : 0.0);
        stats.included.push_back(in ? 1 : 0);
    }
    return stats;
}

ReconstructionResult reconstruct_from_bins(std::span<const double> bin_centers,
                                           std::span<const double> p_hat,
                                           std::span<const double> e_hat,
                                           std::span<const char> usable, double theta,
                                           double bin_width,
                                           const Wavefunction& psi_exact_momentum) {
    ReconstructionResult r;
    const std::vector<Segment> segments = contiguous_segments(usable);
    if (segments.empty()) {
        throw ReconstructionFailure("no bins carry any probability; nothing to reconstruct");
    }
    r.modulus = reconstruct_modulus(p_hat);
    r.phase_profile = reconstruct_phase(e_hat, bin_centers, segments, theta, bin_width);
    r.psi_rec = assemble_state(r.modulus, r.phase_profile, psi_exact_momentum.grid);
    r.segments = static_cast<int>(segments.size());
    r.failed = segments.size() > 1;
    r.delta = reconstruction_error(psi_exact_momentum, r.psi_rec);
    return r;
}

namespace {

nlohmann::ordered_json make_summary(const RunConfig& config, const ReconstructionResult& r) {
    nlohmann::ordered_json s;
    s["delta"] = r.delta;
    s["segments"] = r.segments;
    s["failed"] = r.failed;
    s["theta"] = config.theta;
    s["n_runs"] = config.n_runs;
    s["seed"] = config.seed;
    return s;
}

std::string wigner_csv_strided(const WignerGrid& w, std::size_t stride) {
    if (stride <= 1) return wigner_csv(w);
    WignerGrid thin;
    thin.p_axis = w.p_axis;
    thin.x_axis = w.x_axis;
    thin.x_axis.n_points = (w.x_axis.n_points + stride - 1) / stride;
    thin.x_axis.spacing = w.x_axis.spacing * static_cast<double>(stride);
    thin.values.reserve(thin.x_axis.n_points * w.p_axis.n_points);
    for (std::size_t i = 0; i < w.x_axis.n_points; i += stride) {
        for (std::size_t k = 0; k < w.p_axis.n_points; ++k) {
            thin.values.push_back(w.at(i, k));
        }
    }
    return wigner_csv(thin);
}

class ArtifactWriter {
public:
    explicit ArtifactWriter(const std::string& dir) : enabled_(!dir.empty()), dir_(dir) {
        if (enabled_) fs::create_directories(dir_);
    }

    void emit(const std::string& name, const std::string& content) {
        if (!enabled_) return;
        hashes_[name] = write_file(dir_ / name, content);
    }

    bool enabled() const { return enabled_; }
    const fs::path& dir() const { return dir_; }
    const nlohmann::ordered_json& hashes() const { return hashes_; }

private:
    bool enabled_;
    fs::path dir_;
    nlohmann::ordered_json hashes_ = nlohmann::ordered_json::object();
};

nlohmann::ordered_json make_manifest(const RunConfig& config, const ReconstructionResult& r,
                                     std::int64_t gap_count, double duration_s,
                                     const nlohmann::ordered_json& file_hashes) {
    nlohmann::ordered_json m;
    m["config"] = config_to_json(config);
    m["delta"] = r.delta;
    m["segments"] = r.segments;
    m["failed"] = r.failed;
    m["gap_count"] = gap_count;
    m["duration_seconds"] = duration_s;
    m["tool_version"] = kVersion;
    m["files"] = file_hashes;
    return m;
}

void emit_common(ArtifactWriter& files, const RunConfig& config, const PreparedJoint& prep,
                 const ReconstructionResult& r) {
    if (!files.enabled()) return;
    files.emit("psi_exact_momentum.csv", wavefunction_csv(prep.system_momentum));
    files.emit("reconstruction.csv", reconstruction_csv(r.phase_profile, r.modulus));
    files.emit("summary.json", make_summary(config, r).dump(2) + "\n");
}

// Wigner export axes: 128 momentum points over the state window, X rows
// thinned to about 128.
GridSpec wigner_axis(const GridSpec& g) { return make_grid(g.x_min, g.x_max, 128); }

}  // namespace

RunOutput run_exact(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    if (config.n_runs != 0) {
        throw ConfigError("run_exact requires n_runs = 0 (got a Monte Carlo config)");
    }
    const PreparedJoint prep = prepare_joint(config);

    const ExactBinnedStats stats = exact_binned_stats(prep.joint, config.bin_width);
    RunOutput out;
    out.psi_exact_momentum = prep.system_momentum;
    out.result = reconstruct_from_bins(stats.bin_centers, stats.p_mean, stats.e_mean,
                                       stats.included, config.theta, stats.bin_width,
                                       prep.system_momentum);

    ArtifactWriter files(config.output_dir);
    if (files.enabled()) {
        // dense exact statistics over the momentum grid
        const RowMoments moments = row_moments(prep.joint);
        const GridSpec& gp = prep.joint.p_axis;
        std::vector<ExactStatsRow> rows(gp.n_points);
        for (std::size_t i = 0; i < gp.n_points; ++i) {
            const WeakValueSample wv =
                weak_value(prep.system_momentum, gp.value(i), Quadrature::X);
            rows[i] = {gp.value(i),
                       moments.density[i],
                       moments.density[i] > 0.0 ? moments.meter_weighted[i] / moments.density[i]
                                                : 0.0,
                       wv.valid ? wv.value.real() : 0.0,
                       wv.valid ? wv.value.imag() : 0.0,
                       wv.valid};
        }
        files.emit("exact_stats.csv", exact_stats_csv(rows));

        const GridSpec paxis = wigner_axis(config.grid);
        const std::size_t stride = std::max<std::size_t>(1, config.grid.n_points / 128);
        files.emit("wigner_exact.csv",
                   wigner_csv_strided(wigner(prep.system_position, paxis), stride));
        files.emit("wigner_reconstructed.csv",
                   wigner_csv_strided(wigner(to_position(out.result.psi_rec), paxis), stride));
        emit_common(files, config, prep, out.result);
    }

    std::int64_t gaps = 0;
    for (char in : stats.included) gaps += in ? 0 : 1;
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.summary = make_summary(config, out.result);
    out.manifest = make_manifest(config, out.result, gaps, dt, files.hashes());
    if (files.enabled()) {
        write_file(files.dir() / "manifest.json", out.manifest.dump(2) + "\n");
    }
    return out;
}

RunOutput run_monte_carlo(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    if (config.n_runs <= 0) {
        throw ConfigError("run_monte_carlo requires n_runs > 0");
    }
    const PreparedJoint prep = prepare_joint(config);

    const std::vector<MeasurementRecord> records =
        sample_joint(prep.joint, config.n_runs, config.seed);
    const BinnedEstimates binned = bin_records(records, config.bin_width);

    std::vector<char> usable(binned.counts.size());
    for (std::size_t b = 0; b < binned.counts.size(); ++b) {
        usable[b] = binned.counts[b] > 0 ? 1 : 0;
    }

    RunOutput out;
    out.psi_exact_momentum = prep.system_momentum;
    out.result = reconstruct_from_bins(binned.bin_centers, binned.p_hat, binned.e_hat,
                                       usable, config.theta, binned.bin_width,
                                       prep.system_momentum);

    ArtifactWriter files(config.output_dir);
    if (files.enabled()) {
        files.emit("binned.csv", binned_csv(binned));
        if (config.emit_records) files.emit("records.csv", records_csv(records));
        emit_common(files, config, prep, out.result);
    }

    std::int64_t gaps = 0;
    for (char g : binned.gap_flags) gaps += g ? 1 : 0;
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.summary = make_summary(config, out.result);
    out.manifest = make_manifest(config, out.result, gaps, dt, files.hashes());
    if (files.enabled()) {
        write_file(files.dir() / "manifest.json", out.manifest.dump(2) + "\n");
    }
    return out;
}

namespace {

// shortest round-trip decimal, for directory tags
std::string shortest_decimal(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<SweepEntry> sweep(const RunConfig& base, SweepAxis axis,
                              std::span<const double> values) {
    if (values.empty()) throw ConfigError("sweep needs at least one axis value");

    std::vector<SweepEntry> entries;
    for (double v : values) {
        RunConfig cfg = base;
        std::string tag;
        if (axis == SweepAxis::Theta) {
            cfg.theta = v;
            tag = "theta_" + shortest_decimal(v);
        } else {
            cfg.n_runs = static_cast<std::int64_t>(v);
            tag = "n_runs_" + std::to_string(cfg.n_runs);
        }
        if (!base.output_dir.empty()) {
            cfg.output_dir = (fs::path(base.output_dir) / tag).string();
        }

        SweepEntry e;
        e.axis_value = v;
        try {
            const RunOutput out = cfg.n_runs == 0 ? run_exact(cfg) : run_monte_carlo(cfg);
            e.delta = out.result.delta;
            e.segments = out.result.segments;
            e.failed = out.result.failed;
        } catch (const std::exception& ex) {
            e.delta = std::nan("");
            e.segments = 0;
            e.failed = true;
            e.error = ex.what();
        }
        entries.push_back(std::move(e));
    }

    if (!base.output_dir.empty()) {
        std::string csv = "axis_value,delta,segments,failed\n";
        for (const auto& e : entries) {
            csv += format_g17(e.axis_value);
            csv += ',';
            csv += format_g17(e.delta);
            csv += ',';
            csv += std::to_string(e.segments);
            csv += ',';
            csv += e.failed ? '1' : '0';
            csv += '\n';
        }
        fs::create_directories(base.output_dir);
        write_file(fs::path(base.output_dir) / "sweep_summary.csv", csv);
    }
    return entries;
}

}  // namespace wvrecon
