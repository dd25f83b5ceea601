#pragma once

#include <vector>

#include "icl/matrix.hpp"

namespace icl::linalg {

/// Compact LU factorization with partial pivoting (L\U stored in one matrix).
struct LuFactors {
    Matrix<double> lu;
    std::vector<int> piv;
    /// Crude conditioning proxy: max|U_ii| / min|U_ii|.
    double diag_ratio = 0.0;
};

/// Throws SingularMatrix (with the diagonal-ratio estimate) on exact/near singularity.
LuFactors lu_factor(Matrix<double> a);

/// Solve A X = B for X; B is n x m.
Matrix<double> lu_solve(const LuFactors& f, const Matrix<double>& b);

Matrix<double> solve(const Matrix<double>& a, const Matrix<double>& b);

/// Solve X A = B for X (right division), i.e. X = B A^{-1}.
Matrix<double> solve_right(const Matrix<double>& b, const Matrix<double>& a);

Matrix<double> inverse(const Matrix<double>& a);

Matrix<double> matmul(const Matrix<double>& a, const Matrix<double>& b);

Matrix<double> transpose(const Matrix<double>& a);

}  // namespace icl::linalg
