// AVX2+FMA variants of the complex kernels. Compiled with -mavx2 -mfma on
// x86-64 only; selection happens at runtime in dispatch.cpp.
#include "polcav/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace polcav::kernels {

namespace {

// [a0, a1] * [b0, b1] lane-wise complex product, 2 complex per vector
inline __m256d cmul2(__m256d a, __m256d b) {
    __m256d ar = _mm256_movedup_pd(a);
    __m256d ai = _mm256_permute_pd(a, 0xF);
    __m256d bswap = _mm256_permute_pd(b, 0x5);
    return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bswap));
}

// conj(a) * b
inline __m256d cmulc2(__m256d a, __m256d b) {
    __m256d ar = _mm256_movedup_pd(a);
    __m256d ai = _mm256_permute_pd(a, 0xF);
    __m256d bswap = _mm256_permute_pd(b, 0x5);
    return _mm256_fmsubadd_pd(ar, b, _mm256_mul_pd(ai, bswap));
}

inline cplx reduce2(__m256d acc) {
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    return {out[0], out[1]};
}

void spmv_avx2(const CsrMatrix& a, const cplx* x, cplx* y) {
    const auto* vals = reinterpret_cast<const double*>(a.vals.data());
    for (int r = 0; r < a.rows; ++r) {
        const int begin = a.row_ptr[r];
        const int end = a.row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        int k = begin;
        for (; k + 1 < end; k += 2) {
            __m256d v = _mm256_loadu_pd(vals + 2 * k);
            __m128d x0 = _mm_loadu_pd(reinterpret_cast<const double*>(x + a.col_idx[k]));
            __m128d x1 = _mm_loadu_pd(reinterpret_cast<const double*>(x + a.col_idx[k + 1]));
            __m256d xs = _mm256_set_m128d(x1, x0);
            acc = _mm256_add_pd(acc, cmul2(v, xs));
        }
        cplx sum = reduce2(acc);
        if (k < end) sum += a.vals[k] * x[a.col_idx[k]];
        y[r] = sum;
    }
}

void axpy_avx2(int n, cplx alpha, const cplx* x, cplx* y) {
    const __m256d av = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&alpha));
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    int i = 0;
    for (; i + 1 < n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul2(av, xv)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void wxpay_avx2(int n, const cplx* x, cplx alpha, const cplx* y, cplx* w) {
    const __m256d av = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&alpha));
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    auto* wd = reinterpret_cast<double*>(w);
    int i = 0;
    for (; i + 1 < n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(wd + 2 * i, _mm256_add_pd(xv, cmul2(av, yv)));
    }
    for (; i < n; ++i) w[i] = x[i] + alpha * y[i];
}

double nrm2sq_avx2(int n, const cplx* x) {
    const auto* xd = reinterpret_cast<const double*>(x);
    const int nd = 2 * n;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    int i = 0;
    for (; i + 8 <= nd; i += 8) {
        __m256d v0 = _mm256_loadu_pd(xd + i);
        __m256d v1 = _mm256_loadu_pd(xd + i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    __m256d acc = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < nd; ++i) sum += xd[i] * xd[i];
    return sum;
}

cplx dotc_avx2(int n, const cplx* x, const cplx* y) {
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 1 < n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        acc = _mm256_add_pd(acc, cmulc2(xv, yv));
    }
    cplx sum = reduce2(acc);
    for (; i < n; ++i) sum += std::conj(x[i]) * y[i];
    return sum;
}

} // namespace

const Dispatch* avx2_kernels() {
    static const Dispatch table{Isa::Avx2, &spmv_avx2, &axpy_avx2,
                                &wxpay_avx2, &nrm2sq_avx2, &dotc_avx2};
    return &table;
}

} // namespace polcav::kernels

#else

namespace polcav::kernels {

const Dispatch* avx2_kernels() { return nullptr; }

} // namespace polcav::kernels

#endif
