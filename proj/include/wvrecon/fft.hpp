#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wvrecon {

using cxd = std::complex<double>;

// In-place radix-2 FFT; data.size() must be a power of two. The inverse
// includes the 1/N factor. Hand-rolled rather than an external backend so
// results are bitwise reproducible across platforms and run counts.
void fft_pow2(std::span<cxd> data, bool inverse);

// Evaluates the discretized continuum transform
//
//   out[k] = scale * sum_n in[n] * exp(sign * i * (p0 + k*dp) * (x0 + n*dx))
//
// for k in [0, m). The frequency step dp is arbitrary (no dp*dx = 2*pi/n
// constraint), which lets position and momentum live on the same window.
// Implemented as a chirp-z transform: one circular convolution of length
// >= n+m via the power-of-two FFT above.
class ZoomTransform {
public:
    ZoomTransform(std::size_t n, std::size_t m, double x0, double dx,
                  double p0, double dp, int sign, double scale);

    void apply(std::span<const cxd> in, std::span<cxd> out) const;

    std::size_t input_size() const { return n_; }
    std::size_t output_size() const { return m_; }

private:
    std::size_t n_;
    std::size_t m_;
    std::size_t len_;
    std::vector<cxd> pre_;        // per-n input chirp
    std::vector<cxd> post_;       // per-k output chirp (scale folded in)
    std::vector<cxd> kernel_fft_; // FFT of the circular chirp kernel
};

}  // namespace wvrecon
