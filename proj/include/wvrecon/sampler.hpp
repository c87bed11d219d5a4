#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wvrecon/coupler.hpp"

namespace wvrecon {

// One dual-homodyne run: system momentum reading and meter position reading.
struct MeasurementRecord {
    double P_outcome;
    double x_outcome;
};

// Draws n_runs independent samples from |amplitude|^2 dP dx by inverse-CDF
// lookup over the flattened cells, plus uniform jitter inside each cell so
// outcomes are continuous. Sampling is chunked with a fixed chunk size and a
// per-chunk generator keyed on (seed, chunk), so the output is identical for
// a given (seed, n_runs) no matter how many threads run the chunks.
std::vector<MeasurementRecord> sample_joint(const JointAmplitude& joint,
                                            std::int64_t n_runs, std::uint64_t seed);

struct BinnedEstimates {
    double bin_width = 0.0;
    std::int64_t total_runs = 0;
    std::vector<double> bin_centers;
    std::vector<std::int64_t> counts;
    std::vector<double> p_hat;      // counts / (N * bin_width)
    std::vector<double> e_hat;      // mean meter outcome per bin (0 if empty)
    std::vector<double> std_error;  // sample std dev / sqrt(count)
    std::vector<char> gap_flags;    // empty bins between nonempty ones
};

// Histograms the momentum outcomes into bins of the given width whose edges
// are aligned so that one edge falls exactly at origin.
BinnedEstimates bin_records(std::span<const MeasurementRecord> records, double bin_width,
                            double origin = 0.0);

// Maximal run of consecutive nonempty bins, by bin index.
struct Segment {
    std::size_t first;
    std::size_t last;  // inclusive
};

std::vector<Segment> detect_gaps(const BinnedEstimates& binned);

// Shared segmentation primitive: partitions indices where mask[i] != 0 into
// maximal contiguous runs.
std::vector<Segment> contiguous_segments(std::span<const char> mask);

}  // namespace wvrecon
