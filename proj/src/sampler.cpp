#include "wvrecon/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "wvrecon/errors.hpp"
#include "wvrecon/parallel.hpp"

namespace wvrecon {

namespace {

constexpr std::int64_t kChunk = 65536;

// splitmix64: small, portable, and plenty for inverse-CDF draws.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t chunk) {
    SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL + chunk * 0x9e3779b97f4a7c15ULL));
    g.next();
    return g.next();
}

}  // namespace

std::vector<MeasurementRecord> sample_joint(const JointAmplitude& joint,
                                            std::int64_t n_runs, std::uint64_t seed) {
    if (n_runs < 0) throw ConfigError("sample_joint: n_runs must be >= 0");
    std::vector<MeasurementRecord> records(static_cast<std::size_t>(n_runs));
    if (n_runs == 0) return records;

    const std::size_t np = joint.p_axis.n_points;
    const std::size_t nx = joint.x_axis.n_points;

    std::vector<double> cdf(np * nx);
    double acc = 0.0;
    for (std::size_t c = 0; c < cdf.size(); ++c) {
        acc += std::norm(joint.amplitudes[c]);
        cdf[c] = acc;
    }
    if (acc <= 0.0) throw ConfigError("sample_joint: joint amplitude is identically zero");
    const double inv_total = 1.0 / acc;
    for (auto& v : cdf) v *= inv_total;
    cdf.back() = 1.0;

    const double dp = joint.p_axis.spacing;
    const double dx = joint.x_axis.spacing;
    const auto chunks = static_cast<std::size_t>((n_runs + kChunk - 1) / kChunk);

    parallel_for(chunks, [&](std::size_t chunk) {
        SplitMix64 rng(mix_seed(seed, chunk));
        const std::int64_t lo = static_cast<std::int64_t>(chunk) * kChunk;
        const std::int64_t hi = std::min<std::int64_t>(lo + kChunk, n_runs);
        for (std::int64_t k = lo; k < hi; ++k) {
            const double u = rng.uniform();
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            const auto cell = static_cast<std::size_t>(it - cdf.begin());
            const std::size_t ip = cell / nx;
            const std::size_t jx = cell % nx;
            records[static_cast<std::size_t>(k)] = {
                joint.p_axis.value(ip) + (rng.uniform() - 0.5) * dp,
                joint.x_axis.value(jx) + (rng.uniform() - 0.5) * dx,
            };
        }
    });
    return records;
}

BinnedEstimates bin_records(std::span<const MeasurementRecord> records, double bin_width,
                            double origin) {
    if (!(bin_width > 0.0)) throw ConfigError("bin_records: bin_width must be positive");

    BinnedEstimates out;
    out.bin_width = bin_width;
    out.total_runs = static_cast<std::int64_t>(records.size());
    if (records.empty()) return out;

    auto bin_of = [&](double p) {
        return static_cast<std::int64_t>(std::floor((p - origin) / bin_width));
    };

    std::int64_t lo = bin_of(records.front().P_outcome);
    std::int64_t hi = lo;
    for (const auto& r : records) {
        const std::int64_t b = bin_of(r.P_outcome);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    if (hi - lo >= (std::int64_t{1} << 26)) {
        throw ConfigError("bin_records: bin_width too small for the outcome range");
    }
    const auto nb = static_cast<std::size_t>(hi - lo + 1);

    out.counts.assign(nb, 0);
    std::vector<double> sum_x(nb, 0.0), sum_x2(nb, 0.0);
    for (const auto& r : records) {
        const auto b = static_cast<std::size_t>(bin_of(r.P_outcome) - lo);
        out.counts[b] += 1;
        sum_x[b] += r.x_outcome;
        sum_x2[b] += r.x_outcome * r.x_outcome;
    }

    out.bin_centers.resize(nb);
    out.p_hat.resize(nb);
    out.e_hat.assign(nb, 0.0);
    out.std_error.assign(nb, 0.0);
    out.gap_flags.assign(nb, 0);
    const double n_total = static_cast<double>(records.size());
    for (std::size_t b = 0; b < nb; ++b) {
        out.bin_centers[b] = origin + (static_cast<double>(lo + static_cast<std::int64_t>(b)) + 0.5) * bin_width;
        const auto c = static_cast<double>(out.counts[b]);
        out.p_hat[b] = c / (n_total * bin_width);
        if (out.counts[b] > 0) {
            const double mean = sum_x[b] / c;
            out.e_hat[b] = mean;
            if (out.counts[b] > 1) {
                const double var = std::max(0.0, (sum_x2[b] - c * mean * mean) / (c - 1.0));
                out.std_error[b] = std::sqrt(var / c);
            }
        } else {
            out.gap_flags[b] = 1;  // interior by construction: end bins are occupied
        }
    }
    return out;
}

std::vector<Segment> contiguous_segments(std::span<const char> mask) {
    std::vector<Segment> segs;
    std::size_t i = 0;
    while (i < mask.size()) {
        if (!mask[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < mask.size() && mask[j + 1]) ++j;
        segs.push_back({i, j});
        i = j + 1;
    }
    return segs;
}

std::vector<Segment> detect_gaps(const BinnedEstimates& binned) {
    std::vector<char> nonempty(binned.counts.size());
    for (std::size_t b = 0; b < binned.counts.size(); ++b) {
        nonempty[b] = binned.counts[b] > 0 ? 1 : 0;
    }
    return contiguous_segments(nonempty);
}

}  // namespace wvrecon
