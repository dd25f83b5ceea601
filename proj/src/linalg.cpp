#include "icl/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "icl/error.hpp"
#include "icl/kernels.hpp"

namespace icl::linalg {

LuFactors lu_factor(Matrix<double> a) {
    require(a.rows() == a.cols() && a.rows() > 0, "lu_factor: matrix must be square");
    const int n = a.rows();
    std::vector<int> piv(static_cast<std::size_t>(n));
    double umax = 0.0, umin = 0.0;
    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                p = r;
            }
        }
        piv[static_cast<std::size_t>(col)] = p;
        if (p != col)
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(p, j));
        const double pivot = a(col, col);
        const double apiv = std::abs(pivot);
        if (col == 0) {
            umax = umin = apiv;
        } else {
            umax = std::max(umax, apiv);
            umin = std::min(umin, apiv);
        }
        if (apiv == 0.0 || umin / umax < 1e-14)
            throw SingularMatrix("lu_factor: singular or near-singular system",
                                 umin > 0.0 ? umax / umin : std::numeric_limits<double>::infinity());
        const double inv = 1.0 / pivot;
        for (int r = col + 1; r < n; ++r) {
            const double l = a(r, col) * inv;
            a(r, col) = l;
            if (l != 0.0) kern::axpy(n - col - 1, -l, a.row(col) + col + 1, a.row(r) + col + 1);
        }
    }
    return LuFactors{std::move(a), std::move(piv), umax / umin};
}

Matrix<double> lu_solve(const LuFactors& f, const Matrix<double>& b) {
    const int n = f.lu.rows();
    require(b.rows() == n, "lu_solve: rhs row mismatch");
    const int m = b.cols();
    Matrix<double> x = b;
    for (int col = 0; col < n; ++col) {
        const int p = f.piv[static_cast<std::size_t>(col)];
        if (p != col)
            for (int j = 0; j < m; ++j) std::swap(x(col, j), x(p, j));
    }
    // Forward substitution (unit lower triangle).
    for (int r = 1; r < n; ++r)
        for (int c = 0; c < r; ++c) kern::axpy(m, -f.lu(r, c), x.row(c), x.row(r));
    // Back substitution.
    for (int r = n - 1; r >= 0; --r) {
        const double inv = 1.0 / f.lu(r, r);
        for (int j = 0; j < m; ++j) x(r, j) *= inv;
        for (int c = 0; c < r; ++c) kern::axpy(m, -f.lu(c, r), x.row(r), x.row(c));
    }
    return x;
}

Matrix<double> solve(const Matrix<double>& a, const Matrix<double>& b) {
    return lu_solve(lu_factor(a), b);
}

Matrix<double> solve_right(const Matrix<double>& b, const Matrix<double>& a) {
    // X A = B  <=>  A^T X^T = B^T
    return transpose(solve(transpose(a), transpose(b)));
}

Matrix<double> inverse(const Matrix<double>& a) {
    return solve(a, Matrix<double>::identity(a.rows()));
}

Matrix<double> matmul(const Matrix<double>& a, const Matrix<double>& b) {
    require(a.cols() == b.rows(), "matmul: shape mismatch");
    Matrix<double> c(a.rows(), b.cols());
    kern::gemm(kern::Trans::no, kern::Trans::no, a.rows(), b.cols(), a.cols(), 1.0, a.data(),
               a.cols(), b.data(), b.cols(), 0.0, c.data(), c.cols());
    return c;
}

Matrix<double> transpose(const Matrix<double>& a) {
    Matrix<double> t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

}  // namespace icl::linalg
