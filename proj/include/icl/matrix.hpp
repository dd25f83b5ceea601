#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "icl/error.hpp"

namespace icl {

/// Dense row-major matrix with value semantics. Leading dimension == cols.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
        require(rows >= 0 && cols >= 0, "Matrix: negative shape");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    T* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
    const T* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    template <class U>
    Matrix<U> cast() const {
        Matrix<U> out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i)
            out.data()[i] = static_cast<U>(data_[i]);
        return out;
    }

    bool all_finite() const {
        for (T v : data_)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

/// Largest absolute entry difference (entrywise infinity distance).
template <class T>
double linf_distance(const Matrix<T>& a, const Matrix<T>& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "linf_distance: shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(static_cast<double>(a.data()[i]) -
                                         static_cast<double>(b.data()[i])));
    return worst;
}

template <class T>
double max_abs(const Matrix<T>& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(static_cast<double>(a.data()[i])));
    return worst;
}

}  // namespace icl
