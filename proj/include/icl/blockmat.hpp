#pragma once

#include <array>
#include <vector>

#include "icl/matrix.hpp"

namespace icl {

/// Matrix over role groups where every block has the form X_{a,b}: a on the
/// aligned diagonal, b elsewhere (a == b gives the constant block Y_b). This
/// family is closed under products and inversion, so the closed-form analysis
/// can run at symbolic group sizes (e.g. L = 10^6) without densifying.
class StructuredMatrix {
public:
    struct Block {
        double diag = 0.0;  // a
        double off = 0.0;   // b
    };

    StructuredMatrix() = default;
    explicit StructuredMatrix(std::vector<double> group_sizes);

    int groups() const { return static_cast<int>(sizes_.size()); }
    double group_size(int g) const { return sizes_[static_cast<std::size_t>(g)]; }
    Block& block(int g, int h) { return blocks_[static_cast<std::size_t>(g * groups() + h)]; }
    const Block& block(int g, int h) const {
        return blocks_[static_cast<std::size_t>(g * groups() + h)];
    }

    static StructuredMatrix identity(std::vector<double> group_sizes);

    StructuredMatrix mul(const StructuredMatrix& other) const;
    StructuredMatrix scaled(double s) const;
    StructuredMatrix plus(const StructuredMatrix& other) const;
    /// Add c_g to the diagonal of the (g, g) block.
    StructuredMatrix plus_group_diagonal(const std::vector<double>& per_group) const;
    /// Row sum (identical for every row of a group).
    std::vector<double> row_sums() const;
    /// Exact inverse within the structured family (2G^2 linear unknowns).
    StructuredMatrix inverse() const;

    /// Densify with integer group sizes (must match the symbolic sizes).
    Matrix<double> dense(const std::vector<int>& int_sizes) const;

    double max_abs_difference(const StructuredMatrix& other) const;

private:
    std::vector<double> sizes_;
    std::vector<Block> blocks_;
};

}  // namespace icl
