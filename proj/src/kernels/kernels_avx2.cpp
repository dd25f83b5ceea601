// AVX2+FMA lane. Compiled with -mavx2 -mfma; only reached after the runtime
// cpuid probe in lane_supported().

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kernels_detail.hpp"

namespace icl::kern::detail {

namespace {

inline float hsum(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_hadd_ps(lo, lo);
    lo = _mm_hadd_ps(lo, lo);
    return _mm_cvtss_f32(lo);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    lo = _mm_hadd_pd(lo, lo);
    return _mm_cvtsd_f64(lo);
}

// ---- fp32 --------------------------------------------------------------

// C[i0..i0+RB) x [j0..j0+16) block of alpha*op(A)*B + beta*C, k-broadcast form.
// At(i,kk) resolves the A transpose; B is accessed by rows (not transposed).
template <int RB, bool TA>
inline void block_f32(int i0, int j0, int k, float alpha, const float* a, int lda,
                      const float* b, int ldb, float beta, float* c, int ldc) {
    __m256 acc[RB][2];
    for (int r = 0; r < RB; ++r) acc[r][0] = acc[r][1] = _mm256_setzero_ps();
    for (int kk = 0; kk < k; ++kk) {
        const float* brow = b + static_cast<std::size_t>(kk) * ldb + j0;
        const __m256 b0 = _mm256_loadu_ps(brow);
        const __m256 b1 = _mm256_loadu_ps(brow + 8);
        for (int r = 0; r < RB; ++r) {
            const float av = TA ? a[static_cast<std::size_t>(kk) * lda + i0 + r]
                                : a[static_cast<std::size_t>(i0 + r) * lda + kk];
            const __m256 av8 = _mm256_set1_ps(av);
            acc[r][0] = _mm256_fmadd_ps(av8, b0, acc[r][0]);
            acc[r][1] = _mm256_fmadd_ps(av8, b1, acc[r][1]);
        }
    }
    const __m256 alpha8 = _mm256_set1_ps(alpha);
    for (int r = 0; r < RB; ++r) {
        float* crow = c + static_cast<std::size_t>(i0 + r) * ldc + j0;
        for (int h = 0; h < 2; ++h) {
            __m256 res = _mm256_mul_ps(alpha8, acc[r][h]);
            if (beta != 0.0f)
                res = _mm256_fmadd_ps(_mm256_set1_ps(beta), _mm256_loadu_ps(crow + 8 * h), res);
            _mm256_storeu_ps(crow + 8 * h, res);
        }
    }
}

template <bool TA>
void gemm_ab_f32(int m, int n, int k, float alpha, const float* a, int lda, const float* b,
                 int ldb, float beta, float* c, int ldc) {
    const int njb = n / 16 * 16;
    int i = 0;
    for (; i + 4 <= m; i += 4)
        for (int j = 0; j < njb; j += 16)
            block_f32<4, TA>(i, j, k, alpha, a, lda, b, ldb, beta, c, ldc);
    for (; i < m; ++i)
        for (int j = 0; j < njb; j += 16)
            block_f32<1, TA>(i, j, k, alpha, a, lda, b, ldb, beta, c, ldc);
    if (njb < n) {
        for (int r = 0; r < m; ++r) {
            for (int j = njb; j < n; ++j) {
                float accv = 0.0f;
                for (int kk = 0; kk < k; ++kk) {
                    const float av = TA ? a[static_cast<std::size_t>(kk) * lda + r]
                                        : a[static_cast<std::size_t>(r) * lda + kk];
                    accv += av * b[static_cast<std::size_t>(kk) * ldb + j];
                }
                float* cij = c + static_cast<std::size_t>(r) * ldc + j;
                *cij = beta == 0.0f ? alpha * accv : alpha * accv + beta * *cij;
            }
        }
    }
}

// C = alpha*A*B^T + beta*C: rows of A dotted with rows of B.
void gemm_nt_f32(int m, int n, int k, float alpha, const float* a, int lda, const float* b,
                 int ldb, float beta, float* c, int ldc) {
    const int kb = k / 8 * 8;
    for (int i = 0; i < m; ++i) {
        const float* arow = a + static_cast<std::size_t>(i) * lda;
        int j = 0;
        for (; j + 4 <= n; j += 4) {
            __m256 s0 = _mm256_setzero_ps(), s1 = _mm256_setzero_ps();
            __m256 s2 = _mm256_setzero_ps(), s3 = _mm256_setzero_ps();
            const float* b0 = b + static_cast<std::size_t>(j) * ldb;
            const float* b1 = b0 + ldb;
            const float* b2 = b1 + ldb;
            const float* b3 = b2 + ldb;
            for (int kk = 0; kk < kb; kk += 8) {
                const __m256 av = _mm256_loadu_ps(arow + kk);
                s0 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b0 + kk), s0);
                s1 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b1 + kk), s1);
                s2 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b2 + kk), s2);
                s3 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b3 + kk), s3);
            }
            float sums[4] = {hsum(s0), hsum(s1), hsum(s2), hsum(s3)};
            for (int q = 0; q < 4; ++q) {
                const float* brow = b + static_cast<std::size_t>(j + q) * ldb;
                for (int kk = kb; kk < k; ++kk) sums[q] += arow[kk] * brow[kk];
                float* cij = c + static_cast<std::size_t>(i) * ldc + j + q;
                *cij = beta == 0.0f ? alpha * sums[q] : alpha * sums[q] + beta * *cij;
            }
        }
        for (; j < n; ++j) {
            const float* brow = b + static_cast<std::size_t>(j) * ldb;
            __m256 s = _mm256_setzero_ps();
            for (int kk = 0; kk < kb; kk += 8)
                s = _mm256_fmadd_ps(_mm256_loadu_ps(arow + kk), _mm256_loadu_ps(brow + kk), s);
            float sum = hsum(s);
            for (int kk = kb; kk < k; ++kk) sum += arow[kk] * brow[kk];
            float* cij = c + static_cast<std::size_t>(i) * ldc + j;
            *cij = beta == 0.0f ? alpha * sum : alpha * sum + beta * *cij;
        }
    }
}

// ---- fp64 --------------------------------------------------------------

template <int RB, bool TA>
inline void block_f64(int i0, int j0, int k, double alpha, const double* a, int lda,
                      const double* b, int ldb, double beta, double* c, int ldc) {
    __m256d acc[RB][2];
    for (int r = 0; r < RB; ++r) acc[r][0] = acc[r][1] = _mm256_setzero_pd();
    for (int kk = 0; kk < k; ++kk) {
        const double* brow = b + static_cast<std::size_t>(kk) * ldb + j0;
        const __m256d b0 = _mm256_loadu_pd(brow);
        const __m256d b1 = _mm256_loadu_pd(brow + 4);
        for (int r = 0; r < RB; ++r) {
            const double av = TA ? a[static_cast<std::size_t>(kk) * lda + i0 + r]
                                 : a[static_cast<std::size_t>(i0 + r) * lda + kk];
            const __m256d av4 = _mm256_set1_pd(av);
            acc[r][0] = _mm256_fmadd_pd(av4, b0, acc[r][0]);
            acc[r][1] = _mm256_fmadd_pd(av4, b1, acc[r][1]);
        }
    }
    const __m256d alpha4 = _mm256_set1_pd(alpha);
    for (int r = 0; r < RB; ++r) {
        double* crow = c + static_cast<std::size_t>(i0 + r) * ldc + j0;
        for (int h = 0; h < 2; ++h) {
            __m256d res = _mm256_mul_pd(alpha4, acc[r][h]);
            if (beta != 0.0)
                res = _mm256_fmadd_pd(_mm256_set1_pd(beta), _mm256_loadu_pd(crow + 4 * h), res);
            _mm256_storeu_pd(crow + 4 * h, res);
        }
    }
}

template <bool TA>
void gemm_ab_f64(int m, int n, int k, double alpha, const double* a, int lda, const double* b,
                 int ldb, double beta, double* c, int ldc) {
    const int njb = n / 8 * 8;
    int i = 0;
    for (; i + 4 <= m; i += 4)
        for (int j = 0; j < njb; j += 8)
            block_f64<4, TA>(i, j, k, alpha, a, lda, b, ldb, beta, c, ldc);
    for (; i < m; ++i)
        for (int j = 0; j < njb; j += 8)
            block_f64<1, TA>(i, j, k, alpha, a, lda, b, ldb, beta, c, ldc);
    if (njb < n) {
        for (int r = 0; r < m; ++r) {
            for (int j = njb; j < n; ++j) {
                double accv = 0.0;
                for (int kk = 0; kk < k; ++kk) {
                    const double av = TA ? a[static_cast<std::size_t>(kk) * lda + r]
                                         : a[static_cast<std::size_t>(r) * lda + kk];
                    accv += av * b[static_cast<std::size_t>(kk) * ldb + j];
                }
                double* cij = c + static_cast<std::size_t>(r) * ldc + j;
                *cij = beta == 0.0 ? alpha * accv : alpha * accv + beta * *cij;
            }
        }
    }
}

void gemm_nt_f64(int m, int n, int k, double alpha, const double* a, int lda, const double* b,
                 int ldb, double beta, double* c, int ldc) {
    const int kb = k / 4 * 4;
    for (int i = 0; i < m; ++i) {
        const double* arow = a + static_cast<std::size_t>(i) * lda;
        for (int j = 0; j < n; ++j) {
            const double* brow = b + static_cast<std::size_t>(j) * ldb;
            __m256d s = _mm256_setzero_pd();
            for (int kk = 0; kk < kb; kk += 4)
                s = _mm256_fmadd_pd(_mm256_loadu_pd(arow + kk), _mm256_loadu_pd(brow + kk), s);
            double sum = hsum(s);
            for (int kk = kb; kk < k; ++kk) sum += arow[kk] * brow[kk];
            double* cij = c + static_cast<std::size_t>(i) * ldc + j;
            *cij = beta == 0.0 ? alpha * sum : alpha * sum + beta * *cij;
        }
    }
}

}  // namespace

void gemm_avx2(Trans ta, Trans tb, int m, int n, int k, float alpha, const float* a, int lda,
               const float* b, int ldb, float beta, float* c, int ldc) {
    if (tb == Trans::no) {
        if (ta == Trans::no)
            gemm_ab_f32<false>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
        else
            gemm_ab_f32<true>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    } else {
        if (ta == Trans::no)
            gemm_nt_f32(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
        else
            gemm_scalar(ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    }
}

void gemm_avx2(Trans ta, Trans tb, int m, int n, int k, double alpha, const double* a, int lda,
               const double* b, int ldb, double beta, double* c, int ldc) {
    if (tb == Trans::no) {
        if (ta == Trans::no)
            gemm_ab_f64<false>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
        else
            gemm_ab_f64<true>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    } else {
        if (ta == Trans::no)
            gemm_nt_f64(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
        else
            gemm_scalar(ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    }
}

float dot_avx2(const float* x, const float* y, int n) {
    const int nb = n / 8 * 8;
    __m256 s = _mm256_setzero_ps();
    for (int i = 0; i < nb; i += 8)
        s = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), s);
    float sum = hsum(s);
    for (int i = nb; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

double dot_avx2(const double* x, const double* y, int n) {
    const int nb = n / 4 * 4;
    __m256d s = _mm256_setzero_pd();
    for (int i = 0; i < nb; i += 4)
        s = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s);
    double sum = hsum(s);
    for (int i = nb; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

void axpy_avx2(int n, float a, const float* x, float* y) {
    const int nb = n / 8 * 8;
    const __m256 av = _mm256_set1_ps(a);
    for (int i = 0; i < nb; i += 8)
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
    for (int i = nb; i < n; ++i) y[i] += a * x[i];
}

void axpy_avx2(int n, double a, const double* x, double* y) {
    const int nb = n / 4 * 4;
    const __m256d av = _mm256_set1_pd(a);
    for (int i = 0; i < nb; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (int i = nb; i < n; ++i) y[i] += a * x[i];
}

void adam_avx2(int n, float* w, float* m, float* v, const float* g, float lr, float b1,
               float b2, float eps, float bc1, float bc2) {
    const int nb = n / 8 * 8;
    const __m256 b1v = _mm256_set1_ps(b1), ob1 = _mm256_set1_ps(1.0f - b1);
    const __m256 b2v = _mm256_set1_ps(b2), ob2 = _mm256_set1_ps(1.0f - b2);
    const __m256 lrv = _mm256_set1_ps(lr), epsv = _mm256_set1_ps(eps);
    const __m256 ibc1 = _mm256_set1_ps(1.0f / bc1), ibc2 = _mm256_set1_ps(1.0f / bc2);
    for (int i = 0; i < nb; i += 8) {
        const __m256 gv = _mm256_loadu_ps(g + i);
        __m256 mv = _mm256_fmadd_ps(b1v, _mm256_loadu_ps(m + i), _mm256_mul_ps(ob1, gv));
        __m256 vv = _mm256_fmadd_ps(b2v, _mm256_loadu_ps(v + i),
                                    _mm256_mul_ps(ob2, _mm256_mul_ps(gv, gv)));
        _mm256_storeu_ps(m + i, mv);
        _mm256_storeu_ps(v + i, vv);
        const __m256 mhat = _mm256_mul_ps(mv, ibc1);
        const __m256 vhat = _mm256_mul_ps(vv, ibc2);
        const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(vhat), epsv);
        const __m256 step = _mm256_div_ps(_mm256_mul_ps(lrv, mhat), denom);
        _mm256_storeu_ps(w + i, _mm256_sub_ps(_mm256_loadu_ps(w + i), step));
    }
    if (nb < n) adam_scalar(n - nb, w + nb, m + nb, v + nb, g + nb, lr, b1, b2, eps, bc1, bc2);
}

void adam_avx2(int n, double* w, double* m, double* v, const double* g, double lr, double b1,
               double b2, double eps, double bc1, double bc2) {
    const int nb = n / 4 * 4;
    const __m256d b1v = _mm256_set1_pd(b1), ob1 = _mm256_set1_pd(1.0 - b1);
    const __m256d b2v = _mm256_set1_pd(b2), ob2 = _mm256_set1_pd(1.0 - b2);
    const __m256d lrv = _mm256_set1_pd(lr), epsv = _mm256_set1_pd(eps);
    const __m256d ibc1 = _mm256_set1_pd(1.0 / bc1), ibc2 = _mm256_set1_pd(1.0 / bc2);
    for (int i = 0; i < nb; i += 4) {
        const __m256d gv = _mm256_loadu_pd(g + i);
        __m256d mv = _mm256_fmadd_pd(b1v, _mm256_loadu_pd(m + i), _mm256_mul_pd(ob1, gv));
        __m256d vv = _mm256_fmadd_pd(b2v, _mm256_loadu_pd(v + i),
                                     _mm256_mul_pd(ob2, _mm256_mul_pd(gv, gv)));
        _mm256_storeu_pd(m + i, mv);
        _mm256_storeu_pd(v + i, vv);
        const __m256d mhat = _mm256_mul_pd(mv, ibc1);
        const __m256d vhat = _mm256_mul_pd(vv, ibc2);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), epsv);
        const __m256d step = _mm256_div_pd(_mm256_mul_pd(lrv, mhat), denom);
        _mm256_storeu_pd(w + i, _mm256_sub_pd(_mm256_loadu_pd(w + i), step));
    }
    if (nb < n) adam_scalar(n - nb, w + nb, m + nb, v + nb, g + nb, lr, b1, b2, eps, bc1, bc2);
}

}  // namespace icl::kern::detail
