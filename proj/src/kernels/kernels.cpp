#include "icl/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "icl/error.hpp"
#include "kernels_detail.hpp"

namespace icl::kern {

namespace detail {

template <class T>
void gemm_scalar(Trans ta, Trans tb, int m, int n, int k, T alpha, const T* a, int lda,
                 const T* b, int ldb, T beta, T* c, int ldc) {
    auto at = [&](int i, int kk) {
        return ta == Trans::no ? a[static_cast<std::size_t>(i) * lda + kk]
                               : a[static_cast<std::size_t>(kk) * lda + i];
    };
    auto bt = [&](int kk, int j) {
        return tb == Trans::no ? b[static_cast<std::size_t>(kk) * ldb + j]
                               : b[static_cast<std::size_t>(j) * ldb + kk];
    };
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            T acc{};
            for (int kk = 0; kk < k; ++kk) acc += at(i, kk) * bt(kk, j);
            T* cij = c + static_cast<std::size_t>(i) * ldc + j;
            *cij = beta == T{} ? alpha * acc : alpha * acc + beta * *cij;
        }
    }
}

template <class T>
T dot_scalar(const T* x, const T* y, int n) {
    T acc{};
    for (int i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

template <class T>
void axpy_scalar(int n, T a, const T* x, T* y) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

template <class T>
void adam_scalar(int n, T* w, T* m, T* v, const T* g, T lr, T b1, T b2, T eps, T bc1, T bc2) {
    for (int i = 0; i < n; ++i) {
        m[i] = b1 * m[i] + (T{1} - b1) * g[i];
        v[i] = b2 * v[i] + (T{1} - b2) * g[i] * g[i];
        const T mhat = m[i] / bc1;
        const T vhat = v[i] / bc2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

template void gemm_scalar<float>(Trans, Trans, int, int, int, float, const float*, int,
                                 const float*, int, float, float*, int);
template void gemm_scalar<double>(Trans, Trans, int, int, int, double, const double*, int,
                                  const double*, int, double, double*, int);
template float dot_scalar<float>(const float*, const float*, int);
template double dot_scalar<double>(const double*, const double*, int);
template void axpy_scalar<float>(int, float, const float*, float*);
template void axpy_scalar<double>(int, double, const double*, double*);
template void adam_scalar<float>(int, float*, float*, float*, const float*, float, float,
                                 float, float, float, float);
template void adam_scalar<double>(int, double*, double*, double*, const double*, double,
                                  double, double, double, double, double);

}  // namespace detail

namespace {

#if defined(__x86_64__) || defined(_M_X64)
constexpr bool kX86 = true;
#else
constexpr bool kX86 = false;
#endif

Lane detect_lane() {
    if (const char* env = std::getenv("ICL_LAB_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Lane::scalar;
        if (std::strcmp(env, "avx2") == 0 && lane_supported(Lane::avx2)) return Lane::avx2;
        if (std::strcmp(env, "avx512") == 0 && lane_supported(Lane::avx512))
            return Lane::avx512;
    }
    if (lane_supported(Lane::avx512)) return Lane::avx512;
    if (lane_supported(Lane::avx2)) return Lane::avx2;
    return Lane::scalar;
}

Lane g_lane = detect_lane();

}  // namespace

bool lane_supported(Lane lane) {
    switch (lane) {
        case Lane::scalar:
            return true;
        case Lane::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Lane::avx512:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx512f");
#else
            return false;
#endif
    }
    return false;
}

Lane active_lane() { return g_lane; }

void force_lane(Lane lane) {
    require(lane_supported(lane), "force_lane: lane not supported on this CPU");
    g_lane = lane;
}

std::string lane_name(Lane lane) {
    switch (lane) {
        case Lane::scalar: return "scalar";
        case Lane::avx2: return "avx2";
        case Lane::avx512: return "avx512";
    }
    return "?";
}

template <class T>
void gemm(Trans ta, Trans tb, int m, int n, int k, T alpha, const T* a, int lda, const T* b,
          int ldb, T beta, T* c, int ldc) {
    if (m <= 0 || n <= 0) return;
#if defined(__x86_64__) || defined(_M_X64)
    if (g_lane == Lane::avx512) {
        detail::gemm_avx512(ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
        return;
    }
    if (g_lane == Lane::avx2) {
        detail::gemm_avx2(ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
        return;
    }
#endif
    detail::gemm_scalar(ta, tb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
}

template <class T>
T dot(const T* x, const T* y, int n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (kX86 && g_lane != Lane::scalar) return detail::dot_avx2(x, y, n);
#endif
    return detail::dot_scalar(x, y, n);
}

template <class T>
void axpy(int n, T a, const T* x, T* y) {
#if defined(__x86_64__) || defined(_M_X64)
    if (kX86 && g_lane != Lane::scalar) {
        detail::axpy_avx2(n, a, x, y);
        return;
    }
#endif
    detail::axpy_scalar(n, a, x, y);
}

template <class T>
void adam_update(int n, T* w, T* m, T* v, const T* g, T lr, T beta1, T beta2, T eps, T bc1,
                 T bc2) {
#if defined(__x86_64__) || defined(_M_X64)
    if (kX86 && g_lane != Lane::scalar) {
        detail::adam_avx2(n, w, m, v, g, lr, beta1, beta2, eps, bc1, bc2);
        return;
    }
#endif
    detail::adam_scalar(n, w, m, v, g, lr, beta1, beta2, eps, bc1, bc2);
}

template <class T>
void softmax_rows(T* x, int rows, int cols, int ld) {
    for (int i = 0; i < rows; ++i) {
        T* r = x + static_cast<std::size_t>(i) * ld;
        T mx = r[0];
        for (int j = 1; j < cols; ++j) mx = std::max(mx, r[j]);
        T sum{};
        for (int j = 0; j < cols; ++j) {
            r[j] = std::exp(r[j] - mx);
            sum += r[j];
        }
        const T inv = T{1} / sum;
        for (int j = 0; j < cols; ++j) r[j] *= inv;
    }
}

template void gemm<float>(Trans, Trans, int, int, int, float, const float*, int, const float*,
                          int, float, float*, int);
template void gemm<double>(Trans, Trans, int, int, int, double, const double*, int,
                           const double*, int, double, double*, int);
template float dot<float>(const float*, const float*, int);
template double dot<double>(const double*, const double*, int);
template void axpy<float>(int, float, const float*, float*);
template void axpy<double>(int, double, const double*, double*);
template void adam_update<float>(int, float*, float*, float*, const float*, float, float,
                                 float, float, float, float);
template void adam_update<double>(int, double*, double*, double*, const double*, double,
                                  double, double, double, double, double);
template void softmax_rows<float>(float*, int, int, int);
template void softmax_rows<double>(double*, int, int, int);

}  // namespace icl::kern
