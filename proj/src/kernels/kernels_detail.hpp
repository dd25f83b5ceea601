#pragma once

#include "icl/kernels.hpp"

// Per-lane entry points. The SIMD TUs are only compiled on x86-64 targets;
// dispatch never selects a lane whose support probe fails.

namespace icl::kern::detail {

template <class T>
void gemm_scalar(Trans ta, Trans tb, int m, int n, int k, T alpha, const T* a, int lda,
                 const T* b, int ldb, T beta, T* c, int ldc);
template <class T>
T dot_scalar(const T* x, const T* y, int n);
template <class T>
void axpy_scalar(int n, T a, const T* x, T* y);
template <class T>
void adam_scalar(int n, T* w, T* m, T* v, const T* g, T lr, T b1, T b2, T eps, T bc1, T bc2);

#if defined(__x86_64__) || defined(_M_X64)
void gemm_avx2(Trans ta, Trans tb, int m, int n, int k, float alpha, const float* a, int lda,
               const float* b, int ldb, float beta, float* c, int ldc);
void gemm_avx2(Trans ta, Trans tb, int m, int n, int k, double alpha, const double* a, int lda,
               const double* b, int ldb, double beta, double* c, int ldc);
float dot_avx2(const float* x, const float* y, int n);
double dot_avx2(const double* x, const double* y, int n);
void axpy_avx2(int n, float a, const float* x, float* y);
void axpy_avx2(int n, double a, const double* x, double* y);
void adam_avx2(int n, float* w, float* m, float* v, const float* g, float lr, float b1,
               float b2, float eps, float bc1, float bc2);
void adam_avx2(int n, double* w, double* m, double* v, const double* g, double lr, double b1,
               double b2, double eps, double bc1, double bc2);

void gemm_avx512(Trans ta, Trans tb, int m, int n, int k, float alpha, const float* a, int lda,
                 const float* b, int ldb, float beta, float* c, int ldc);
void gemm_avx512(Trans ta, Trans tb, int m, int n, int k, double alpha, const double* a,
                 int lda, const double* b, int ldb, double beta, double* c, int ldc);
#endif

}  // namespace icl::kern::detail
