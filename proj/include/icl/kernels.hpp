#pragma once

#include <string>

namespace icl::kern {

/// Vector lanes, selected at runtime. scalar is the reference implementation;
/// the SIMD lanes must agree with it (equivalence-tested).
enum class Lane { scalar, avx2, avx512 };

bool lane_supported(Lane lane);
Lane active_lane();
/// Override lane selection (tests, ICL_LAB_SIMD=scalar|avx2|avx512).
void force_lane(Lane lane);
std::string lane_name(Lane lane);

enum class Trans { no, yes };

/// Row-major GEMM: C[M x N] = alpha * op(A) * op(B) + beta * C.
/// op(A) is M x K (stored K x M with leading dim lda when transposed),
/// op(B) is K x N (stored N x K with leading dim ldb when transposed).
template <class T>
void gemm(Trans ta, Trans tb, int m, int n, int k, T alpha, const T* a, int lda,
          const T* b, int ldb, T beta, T* c, int ldc);

template <class T>
T dot(const T* x, const T* y, int n);

/// y += a * x
template <class T>
void axpy(int n, T a, const T* x, T* y);

/// One Adam step over a flat parameter block. bc1 = 1 - beta1^t, bc2 = 1 - beta2^t.
template <class T>
void adam_update(int n, T* w, T* m, T* v, const T* g, T lr, T beta1, T beta2,
                 T eps, T bc1, T bc2);

/// In-place row softmax (numerically stabilized). Not lane-dispatched: the
/// exp dominates and stays scalar.
template <class T>
void softmax_rows(T* x, int rows, int cols, int ld);

}  // namespace icl::kern
