#include "wvrecon/fft.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace wvrecon {

namespace {

[[maybe_unused]] bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

void fft_pow2(std::span<cxd> data, bool inverse) {
    const std::size_t n = data.size();
    assert(is_pow2(n));
    if (n <= 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double dir = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = dir * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cxd wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cxd w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cxd u = data[i + k];
                const cxd v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : data) z *= inv;
    }
}

ZoomTransform::ZoomTransform(std::size_t n, std::size_t m, double x0, double dx,
                             double p0, double dp, int sign, double scale)
    : n_(n), m_(m), len_(next_pow2(n + m)) {
    const double s = sign >= 0 ? 1.0 : -1.0;
    const double w = s * dp * dx;

    // out[k] = scale * e^{i s p0 x0} * e^{i(s dp x0 k + w k^2/2)}
    //          * sum_n [in[n] e^{i(s p0 dx n + w n^2/2)}] e^{-i w (k-n)^2/2}
    pre_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        const double nn = static_cast<double>(j);
        pre_[j] = std::polar(1.0, s * p0 * dx * nn + 0.5 * w * nn * nn);
    }

    const cxd global = scale * std::polar(1.0, s * p0 * x0);
    post_.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) {
        const double kk = static_cast<double>(k);
        post_[k] = global * std::polar(1.0, s * dp * x0 * kk + 0.5 * w * kk * kk);
    }

    // circular chirp kernel c[m] = e^{-i w m^2 / 2} for m in [-(n-1), m-1]
    kernel_fft_.assign(len_, cxd{0.0, 0.0});
    for (std::size_t k = 0; k < m_; ++k) {
        const double kk = static_cast<double>(k);
        kernel_fft_[k] = std::polar(1.0, -0.5 * w * kk * kk);
    }
    for (std::size_t j = 1; j < n_; ++j) {
        const double jj = static_cast<double>(j);
        kernel_fft_[len_ - j] = std::polar(1.0, -0.5 * w * jj * jj);
    }
    fft_pow2(kernel_fft_, false);
}

void ZoomTransform::apply(std::span<const cxd> in, std::span<cxd> out) const {
    assert(in.size() == n_ && out.size() == m_);
    std::vector<cxd> work(len_, cxd{0.0, 0.0});
    for (std::size_t j = 0; j < n_; ++j) work[j] = in[j] * pre_[j];
    fft_pow2(work, false);
    for (std::size_t i = 0; i < len_; ++i) work[i] *= kernel_fft_[i];
    fft_pow2(work, true);
    for (std::size_t k = 0; k < m_; ++k) out[k] = work[k] * post_[k];
}

}  // namespace wvrecon
