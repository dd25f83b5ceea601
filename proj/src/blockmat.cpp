#include "icl/blockmat.hpp"

#include <cmath>

#include "icl/error.hpp"
#include "icl/linalg.hpp"

namespace icl {

StructuredMatrix::StructuredMatrix(std::vector<double> group_sizes)
    : sizes_(std::move(group_sizes)),
      blocks_(sizes_.size() * sizes_.size()) {
    for (double n : sizes_) require(n >= 1.0, "StructuredMatrix: group sizes must be >= 1");
}

StructuredMatrix StructuredMatrix::identity(std::vector<double> group_sizes) {
    StructuredMatrix m(std::move(group_sizes));
    for (int g = 0; g < m.groups(); ++g) m.block(g, g) = {1.0, 0.0};
    return m;
}

StructuredMatrix StructuredMatrix::mul(const StructuredMatrix& other) const {
    require(sizes_ == other.sizes_, "StructuredMatrix: group mismatch");
    const int G = groups();
    StructuredMatrix out(sizes_);
    for (int g = 0; g < G; ++g) {
        for (int h = 0; h < G; ++h) {
            double a = 0.0, b = 0.0;
            for (int f = 0; f < G; ++f) {
                const Block& x = block(g, f);
                const Block& y = other.block(f, h);
                if (x.diag != x.off)
                    require(sizes_[static_cast<std::size_t>(g)] ==
                                sizes_[static_cast<std::size_t>(f)],
                            "aligned block between different-size groups");
                if (y.diag != y.off)
                    require(sizes_[static_cast<std::size_t>(f)] ==
                                sizes_[static_cast<std::size_t>(h)],
                            "aligned block between different-size groups");
                const double m = sizes_[static_cast<std::size_t>(f)];
                // X_{a1,b1} * X_{a2,b2} = X_{beta + (a1-b1)(a2-b2), beta},
                // beta = m b1 b2 + (a1-b1) b2 + b1 (a2-b2).
                // The delta-alignment term only exists when the three groups
                // share the index space; cross-size blocks must be constant.
                const double beta =
                    m * x.off * y.off + (x.diag - x.off) * y.off + x.off * (y.diag - y.off);
                b += beta;
                a += beta + (x.diag - x.off) * (y.diag - y.off);
            }
            out.block(g, h) = {a, b};
        }
    }
    return out;
}

StructuredMatrix StructuredMatrix::scaled(double s) const {
    StructuredMatrix out = *this;
    for (auto& blk : out.blocks_) {
        blk.diag *= s;
        blk.off *= s;
    }
    return out;
}

StructuredMatrix StructuredMatrix::plus(const StructuredMatrix& other) const {
    require(sizes_ == other.sizes_, "StructuredMatrix: group mismatch");
    StructuredMatrix out = *this;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        out.blocks_[i].diag += other.blocks_[i].diag;
        out.blocks_[i].off += other.blocks_[i].off;
    }
    return out;
}

StructuredMatrix StructuredMatrix::plus_group_diagonal(const std::vector<double>& per_group) const {
    require(per_group.size() == sizes_.size(), "StructuredMatrix: diagonal size mismatch");
    StructuredMatrix out = *this;
    for (int g = 0; g < groups(); ++g)
        out.block(g, g).diag += per_group[static_cast<std::size_t>(g)];
    return out;
}

std::vector<double> StructuredMatrix::row_sums() const {
    const int G = groups();
    std::vector<double> sums(static_cast<std::size_t>(G), 0.0);
    for (int g = 0; g < G; ++g) {
        double s = 0.0;
        for (int h = 0; h < G; ++h) {
            const Block& blk = block(g, h);
            // aligned blocks contribute one diagonal entry per row
            s += blk.off * sizes_[static_cast<std::size_t>(h)] + (blk.diag - blk.off);
        }
        sums[static_cast<std::size_t>(g)] = s;
    }
    return sums;
}

StructuredMatrix StructuredMatrix::inverse() const {
    // Solve M * X = I over the block parameters of X; the product is linear in
    // X so this is a small dense solve. Blocks between different-size groups
    // have no aligned diagonal and carry a single (constant) parameter.
    const int G = groups();
    auto aligned = [&](int g, int h) {
        return sizes_[static_cast<std::size_t>(g)] == sizes_[static_cast<std::size_t>(h)];
    };
    std::vector<int> var_a(static_cast<std::size_t>(G * G)), var_b(static_cast<std::size_t>(G * G));
    int n = 0;
    for (int f = 0; f < G; ++f)
        for (int h = 0; h < G; ++h) {
            var_a[static_cast<std::size_t>(f * G + h)] = n;
            var_b[static_cast<std::size_t>(f * G + h)] = aligned(f, h) ? n + 1 : n;
            n += aligned(f, h) ? 2 : 1;
        }

    Matrix<double> sys(n, n, 0.0);
    Matrix<double> rhs(n, 1, 0.0);
    int eq = 0;
    for (int g = 0; g < G; ++g) {
        for (int h = 0; h < G; ++h) {
            const int row_a = eq;
            const int row_b = aligned(g, h) ? eq + 1 : eq;
            eq += aligned(g, h) ? 2 : 1;
            for (int f = 0; f < G; ++f) {
                const Block& m = block(g, f);
                const double nf = sizes_[static_cast<std::size_t>(f)];
                const int xa = var_a[static_cast<std::size_t>(f * G + h)];
                const int xb = var_b[static_cast<std::size_t>(f * G + h)];
                // beta = nf*m.off*x.off + (m.diag-m.off)*x.off + m.off*(x.diag-x.off)
                const double coef_xoff = nf * m.off + (m.diag - m.off) - m.off;
                const double coef_xdiag = m.off;
                sys(row_b, xb) += coef_xoff;
                sys(row_b, xa) += coef_xdiag;
                if (row_a != row_b) {
                    sys(row_a, xb) += coef_xoff;
                    sys(row_a, xa) += coef_xdiag;
                    // delta term needs g,f,h all index-aligned
                    if (aligned(g, f) && aligned(f, h)) {
                        sys(row_a, xa) += m.diag - m.off;
                        sys(row_a, xb) -= m.diag - m.off;
                    }
                }
            }
            rhs(row_a, 0) = g == h ? 1.0 : 0.0;
        }
    }
    const Matrix<double> sol = linalg::solve(sys, rhs);
    StructuredMatrix out(sizes_);
    for (int f = 0; f < G; ++f)
        for (int h = 0; h < G; ++h)
            out.block(f, h) = {sol(var_a[static_cast<std::size_t>(f * G + h)], 0),
                               sol(var_b[static_cast<std::size_t>(f * G + h)], 0)};
    return out;
}

Matrix<double> StructuredMatrix::dense(const std::vector<int>& int_sizes) const {
    require(int_sizes.size() == sizes_.size(), "dense: group count mismatch");
    int total = 0;
    for (std::size_t g = 0; g < int_sizes.size(); ++g) {
        require(static_cast<double>(int_sizes[g]) == sizes_[g], "dense: size mismatch");
        total += int_sizes[g];
    }
    Matrix<double> out(total, total);
    int roff = 0;
    for (int g = 0; g < groups(); ++g) {
        int coff = 0;
        for (int h = 0; h < groups(); ++h) {
            const Block& blk = block(g, h);
            for (int i = 0; i < int_sizes[static_cast<std::size_t>(g)]; ++i)
                for (int j = 0; j < int_sizes[static_cast<std::size_t>(h)]; ++j)
                    out(roff + i, coff + j) = i == j ? blk.diag : blk.off;
            coff += int_sizes[static_cast<std::size_t>(h)];
        }
        roff += int_sizes[static_cast<std::size_t>(g)];
    }
    return out;
}

double StructuredMatrix::max_abs_difference(const StructuredMatrix& other) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        worst = std::max(worst, std::abs(blocks_[i].diag - other.blocks_[i].diag));
        worst = std::max(worst, std::abs(blocks_[i].off - other.blocks_[i].off));
    }
    return worst;
}

}  // namespace icl
