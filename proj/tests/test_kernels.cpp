#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "icl/kernels.hpp"
#include "icl/linalg.hpp"
#include "icl/matrix.hpp"
#include "icl/rng.hpp"

using namespace icl;
using kern::Lane;
using kern::Trans;

namespace {

template <class T>
Matrix<T> random_matrix(Rng& rng, int r, int c) {
    Matrix<T> m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i)
        m.data()[i] = static_cast<T>(rng.uniform() * 2.0 - 1.0);
    return m;
}

std::vector<Lane> available_lanes() {
    std::vector<Lane> lanes{Lane::scalar};
    if (kern::lane_supported(Lane::avx2)) lanes.push_back(Lane::avx2);
    if (kern::lane_supported(Lane::avx512)) lanes.push_back(Lane::avx512);
    return lanes;
}

struct LaneGuard {
    Lane saved = kern::active_lane();
    ~LaneGuard() { kern::force_lane(saved); }
};

template <class T>
void check_gemm_equivalence(Trans ta, Trans tb, int m, int n, int k, T beta, double tol) {
    Rng rng(1234 + m * 7 + n * 11 + k * 13 + (ta == Trans::yes ? 1000 : 0) +
            (tb == Trans::yes ? 2000 : 0));
    const Matrix<T> a = ta == Trans::no ? random_matrix<T>(rng, m, k) : random_matrix<T>(rng, k, m);
    const Matrix<T> b = tb == Trans::no ? random_matrix<T>(rng, k, n) : random_matrix<T>(rng, n, k);
    const Matrix<T> c0 = random_matrix<T>(rng, m, n);

    LaneGuard guard;
    kern::force_lane(Lane::scalar);
    Matrix<T> ref = c0;
    kern::gemm(ta, tb, m, n, k, T{1}, a.data(), a.cols(), b.data(), b.cols(), beta, ref.data(),
               ref.cols());

    for (Lane lane : available_lanes()) {
        if (lane == Lane::scalar) continue;
        kern::force_lane(lane);
        Matrix<T> out = c0;
        kern::gemm(ta, tb, m, n, k, T{1}, a.data(), a.cols(), b.data(), b.cols(), beta,
                   out.data(), out.cols());
        INFO("lane ", kern::lane_name(lane), " m=", m, " n=", n, " k=", k);
        CHECK(linf_distance(ref, out) < tol);
    }
}

}  // namespace

TEST_CASE("gemm lanes agree with scalar reference") {
    const int shapes[][3] = {{1, 1, 1},   {3, 5, 7},    {4, 16, 8},  {5, 17, 9},
                             {64, 40, 96}, {33, 100, 50}, {128, 31, 3}, {7, 257, 19}};
    for (auto& s : shapes) {
        for (Trans ta : {Trans::no, Trans::yes}) {
            for (Trans tb : {Trans::no, Trans::yes}) {
                if (ta == Trans::yes && tb == Trans::yes) continue;
                check_gemm_equivalence<float>(ta, tb, s[0], s[1], s[2], 0.0f, 2e-4);
                check_gemm_equivalence<float>(ta, tb, s[0], s[1], s[2], 0.5f, 2e-4);
                check_gemm_equivalence<double>(ta, tb, s[0], s[1], s[2], 0.0, 1e-12);
                check_gemm_equivalence<double>(ta, tb, s[0], s[1], s[2], 1.0, 1e-12);
            }
        }
    }
}

TEST_CASE("gemm matches hand-computed product") {
    // [1 2; 3 4] * [5 6; 7 8] = [19 22; 43 50]
    const double a[4] = {1, 2, 3, 4};
    const double b[4] = {5, 6, 7, 8};
    double c[4] = {0, 0, 0, 0};
    LaneGuard guard;
    for (Lane lane : available_lanes()) {
        kern::force_lane(lane);
        kern::gemm(Trans::no, Trans::no, 2, 2, 2, 1.0, a, 2, b, 2, 0.0, c, 2);
        CHECK(c[0] == doctest::Approx(19));
        CHECK(c[1] == doctest::Approx(22));
        CHECK(c[2] == doctest::Approx(43));
        CHECK(c[3] == doctest::Approx(50));
    }
}

TEST_CASE("dot/axpy/adam lanes agree") {
    Rng rng(99);
    const int n = 103;
    std::vector<double> x(n), y0(n), g(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rng.uniform() - 0.5;
        y0[i] = rng.uniform() - 0.5;
        g[i] = rng.uniform() - 0.5;
    }
    LaneGuard guard;
    kern::force_lane(Lane::scalar);
    const double dref = kern::dot(x.data(), y0.data(), n);
    std::vector<double> yref = y0;
    kern::axpy(n, 0.37, x.data(), yref.data());
    std::vector<double> wr = x, mr(n, 0.0), vr(n, 0.0);
    kern::adam_update(n, wr.data(), mr.data(), vr.data(), g.data(), 1e-3, 0.9, 0.999, 1e-8,
                      0.1, 0.001999);

    for (Lane lane : available_lanes()) {
        if (lane == Lane::scalar) continue;
        kern::force_lane(lane);
        CHECK(std::abs(kern::dot(x.data(), y0.data(), n) - dref) < 1e-12);
        std::vector<double> y = y0;
        kern::axpy(n, 0.37, x.data(), y.data());
        for (int i = 0; i < n; ++i) CHECK(std::abs(y[i] - yref[i]) < 1e-14);
        std::vector<double> w = x, m(n, 0.0), v(n, 0.0);
        kern::adam_update(n, w.data(), m.data(), v.data(), g.data(), 1e-3, 0.9, 0.999, 1e-8,
                          0.1, 0.001999);
        for (int i = 0; i < n; ++i) CHECK(std::abs(w[i] - wr[i]) < 1e-12);
    }
}

TEST_CASE("softmax rows normalize") {
    Matrix<double> m(3, 5);
    Rng rng(7);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform() * 10 - 5;
    kern::softmax_rows(m.data(), 3, 5, 5);
    for (int i = 0; i < 3; ++i) {
        double s = 0;
        for (int j = 0; j < 5; ++j) {
            CHECK(m(i, j) >= 0.0);
            s += m(i, j);
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("lu solve round-trips and flags singular input") {
    Rng rng(31);
    const int n = 60;
    Matrix<double> a = random_matrix<double>(rng, n, n);
    for (int i = 0; i < n; ++i) a(i, i) += 4.0;  // keep well conditioned
    const Matrix<double> x = random_matrix<double>(rng, n, 3);
    const Matrix<double> b = linalg::matmul(a, x);
    const Matrix<double> xs = linalg::solve(a, b);
    CHECK(linf_distance(x, xs) < 1e-10);

    const Matrix<double> inv = linalg::inverse(a);
    CHECK(linf_distance(linalg::matmul(a, inv), Matrix<double>::identity(n)) < 1e-10);

    // X A = B right-division
    const Matrix<double> y = random_matrix<double>(rng, 3, n);
    const Matrix<double> rhs = linalg::matmul(y, a);
    CHECK(linf_distance(linalg::solve_right(rhs, a), y) < 1e-10);

    Matrix<double> sing(4, 4, 0.0);
    sing(0, 0) = 1.0;  // rank 1
    CHECK_THROWS_AS(linalg::inverse(sing), SingularMatrix);
}
