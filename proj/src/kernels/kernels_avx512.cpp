// AVX-512F GEMM lane (the only op where the extra width pays off here).
// Other ops fall back to the AVX2 implementations under this lane.

#include <immintrin.h>

#include <cstddef>

#include "kernels_detail.hpp"

namespace icl::kern::detail {

namespace {

template <int RB, bool TA>
inline void block512_f32(int i0, int j0, int k, float alpha, const float* a, int lda,
                         const float* b, int ldb, float beta, float* c, int ldc) {
    __m512 acc[RB][2];
    for (int r = 0; r < RB; ++r) acc[r][0] = acc[r][1] = _mm512_setzero_ps();
    for (int kk = 0; kk < k; ++kk) {
        const float* brow = b + static_cast<std::size_t>(kk) * ldb + j0;
        const __m512 b0 = _mm512_loadu_ps(brow);
        const __m512 b1 = _mm512_loadu_ps(brow + 16);
        for (int r = 0; r < RB; ++r) {
            const float av = TA ? a[static_cast<std::size_t>(kk) * lda + i0 + r]
                                : a[static_cast<std::size_t>(i0 + r) * lda + kk];
            const __m512 avv = _mm512_set1_ps(av);
            acc[r][0] = _mm512_fmadd_ps(avv, b0, acc[r][0]);
            acc[r][1] = _mm512_fmadd_ps(avv, b1, acc[r][1]);
        }
    }
    const __m512 alphav = _mm512_set1_ps(alpha);
    for (int r = 0; r < RB; ++r) {
        float* crow = c + static_cast<std::size_t>(i0 + r) * ldc + j0;
        for (int h = 0; h < 2; ++h) {
            __m512 res = _mm512_mul_ps(alphav, acc[r][h]);
            if (beta != 0.0f)
                res = _mm512_fmadd_ps(_mm512_set1_ps(beta), _mm512_loadu_ps(crow + 16 * h), res);
            _mm512_storeu_ps(crow + 16 * h, res);
        }
    }
}

// Masked single-vector column block for the j tail.
template <bool TA>
inline void tail512_f32(int i0, int rb, int j0, int jn, int k, float alpha, const float* a,
                        int lda, const float* b, int ldb, float beta, float* c, int ldc) {
    const __mmask16 mask = static_cast<__mmask16>((1u << jn) - 1u);
    for (int r = 0; r < rb; ++r) {
        __m512 acc = _mm512_setzero_ps();
        for (int kk = 0; kk < k; ++kk) {
            const float av = TA ? a[static_cast<std::size_t>(kk) * lda + i0 + r]
                                : a[static_cast<std::size_t>(i0 + r) * lda + kk];
            const __m512 bv =
                _mm512_maskz_loadu_ps(mask, b + static_cast<std::size_t>(kk) * ldb + j0);
            acc = _mm512_fmadd_ps(_mm512_set1_ps(av), bv, acc);
        }
        float* crow = c + static_cast<std::size_t>(i0 + r) * ldc + j0;
        __m512 res = _mm512_mul_ps(_mm512_set1_ps(alpha), acc);
        if (beta != 0.0f)
            res = _mm512_fmadd_ps(_mm512_set1_ps(beta), _mm512_maskz_loadu_ps(mask, crow), res);
        _mm512_mask_storeu_ps(crow, mask, res);
    }
}

template <bool TA>
void gemm512_ab_f32(int m, int n, int k, float alpha, const float* a, int lda, const float* b,
                    int ldb, float beta, float* c, int ldc) {
    const int njb = n / 32 * 32;
    int i = 0;
    for (; i + 4 <= m; i += 4) {
        for (int j = 0; j < njb; j += 32)
            block512_f32<4, TA>(i, j, k, alpha, a, lda, b, ldb, beta, c, ldc);
        for (int j = njb; j < n; j += 16)
            tail512_f32<TA>(i, 4, j, n - j >= 16 ? 16 : n - j, k, alpha, a, lda, b, ldb, beta,
                            c, ldc);
    }
    for (; i < m; ++i) {
        for (int j = 0; j < njb; j += 32)
            block512_f32<1, TA>(i, j, k, alpha, a, lda, b, ldb, beta, c, ldc);
        for (int j = njb; j < n; j += 16)
            tail512_f32<TA>(i, 1, j, n - j >= 16 ? 16 : n - j, k, alpha, a, lda, b, ldb, beta,
                            c, ldc);
    }
}

template <int RB, bool TA>
inline void block512_f64(int i0, int j0, int k, double alpha, const double* a, int lda,
                         const double* b, int ldb, double beta, double* c, int ldc) {
    __m512d acc[RB][2];
    for (int r = 0; r < RB; ++r) acc[r][0] = acc[r][1] = _mm512_setzero_pd();
    for (int kk = 0; kk < k; ++kk) {
        const double* brow = b + static_cast<std::size_t>(kk) * ldb + j0;
        const __m512d b0 = _mm512_loadu_pd(brow);
        const __m512d b1 = _mm512_loadu_pd(brow + 8);
        for (int r = 0; r < RB; ++r) {
            const double av = TA ? a[static_cast<std::size_t>(kk) * lda + i0 + r]
                                 : a[static_cast<std::size_t>(i0 + r) * lda + kk];
            const __m512d avv = _mm512_set1_pd(av);
            acc[r][0] = _mm512_fmadd_pd(avv, b0, acc[r][0]);
            acc[r][1] = _mm512_fmadd_pd(avv, b1, acc[r][1]);
        }
    }
    const __m512d alphav = _mm512_set1_pd(alpha);
    for (int r = 0; r < RB; ++r) {
        double* crow = c + static_cast<std::size_t>(i0 + r) * ldc + j0;
        for (int h = 0; h < 2; ++h) {
            __m512d res = _mm512_mul_pd(alphav, acc[r][h]);
            if (beta != 0.0)
                res = _mm512_fmadd_pd(_mm512_set1_pd(beta), _mm512_loadu_pd(crow + 8 * h), res);
            _mm512_storeu_pd(crow + 8 * h, res);
        }
    }
}

template <bool TA>
inline void tail512_f64(int i0, int rb, int j0, int jn, int k, double alpha, const double* a,
                        int lda, const double* b, int ldb, double beta, double* c, int ldc) {
    const __mmask8 mask = static_cast<__mmask8>((1u << jn) - 1u);
    for (int r = 0; r < rb; ++r) {
        __m512d acc = _mm512_setzero_pd();
        for (int kk = 0; kk < k; ++kk) {
            const double av = TA ? a[static_cast<std::size_t>(kk) * lda + i0 + r]
                                 : a[static_cast<std::size_t>(i0 + r) * lda + kk];
            const __m512d bv =
                _mm512_maskz_loadu_pd(mask, b + static_cast<std::size_t>(kk) * ldb + j0);
            acc = _mm512_fmadd_pd(_mm512_set1_pd(av), bv, acc);
        }
        double* crow = c + static_cast<std::size_t>(i0 + r) * ldc + j0;
        __m512d res = _mm512_mul_pd(_mm512_set1_pd(alpha), acc);
        if (beta != 0.0)
            res = _mm512_fmadd_pd(_mm512_set1_pd(beta), _mm512_maskz_loadu_pd(mask, crow), res);
        _mm512_mask_storeu_pd(crow, mask, res);
    }
}

template <bool TA>
void gemm512_ab_f64(int m, int n, int k, double alpha, const double* a, int lda,
                    const double* b, int ldb, double beta, double* c, int ldc) {
    const int njb = n / 16 * 16;
    int i = 0;
    for (; i + 4 <= m; i += 4) {
        for (int j = 0; j < njb; j += 16)
            block512_f64<4, TA>(i, j, k, alpha, a, lda, b, ldb, beta, c, ldc);
        for (int j = njb; j < n; j += 8)
            tail512_f64<TA>(i, 4, j, n - j >= 8 ? 8 : n - j, k, alpha, a, lda, b, ldb, beta, c,
                            ldc);
    }
    for (; i < m; ++i) {
        for (int j = 0; j < njb; j += 16)
            block512_f64<1, TA>(i, j, k, alpha, a, lda, b, ldb, beta, c, ldc);
        for (int j = njb; j < n; j += 8)
            tail512_f64<TA>(i, 1, j, n - j >= 8 ? 8 : n - j, k, alpha, a, lda, b, ldb, beta, c,
                            ldc);
    }
}

}  // namespace

void gemm_avx512(Trans ta, Trans tb, int m, int n, int k, float alpha, const float* a, int lda,
                 const float* b, int ldb, float beta, float* c, int ldc) {
    if (tb == Trans::no) {
        if (ta == Trans::no)
            gemm512_ab_f32<false>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
        else
            gemm512_ab_f32<true>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    } else {
        gemm_avx2(ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    }
}

void gemm_avx512(Trans ta, Trans tb, int m, int n, int k, double alpha, const double* a,
                 int lda, const double* b, int ldb, double beta, double* c, int ldc) {
    if (tb == Trans::no) {
        if (ta == Trans::no)
            gemm512_ab_f64<false>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
        else
            gemm512_ab_f64<true>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    } else {
        gemm_avx2(ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    }
}

}  // namespace icl::kern::detail
