#ifndef VORTEXLAB_DETAIL_FFT_HPP
#define VORTEXLAB_DETAIL_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "vortexlab/common.hpp"

namespace vortexlab::detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n && !(n & (n - 1)); }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative radix-2 transform; inverse=true applies the conjugate
// transform without the 1/n factor.
inline void fft_inplace(cplx* a, std::size_t n, bool inverse) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = (inverse ? 2.0 : -2.0) * pi / (double)len;
        cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// 2-D transform of a row-major nx-by-ny array (rows in parallel, then
// columns through a transpose).
inline void fft2_inplace(std::vector<cplx>& a, std::size_t nx, std::size_t ny, bool inverse) {
    parallel_chunks(nx, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) fft_inplace(a.data() + i * ny, ny, inverse);
    });
    std::vector<cplx> t(a.size());
    parallel_chunks(nx, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < ny; ++j) t[j * nx + i] = a[i * ny + j];
    });
    parallel_chunks(ny, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j) fft_inplace(t.data() + j * nx, nx, inverse);
    });
    parallel_chunks(ny, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j)
            for (std::size_t i = 0; i < nx; ++i) a[i * ny + j] = t[j * nx + i];
    });
}

}  // namespace vortexlab::detail

#endif
