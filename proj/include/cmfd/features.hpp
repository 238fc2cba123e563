#ifndef CMFD_FEATURES_HPP
#define CMFD_FEATURES_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "cmfd/errors.hpp"
#include "cmfd/image.hpp"

namespace cmfd {

/// Orthonormal 2D DCT-II coefficients of a square block, row-major.
/// coeff(0, 0) is the DC term; coeff(i, j) has vertical frequency i and
/// horizontal frequency j.
struct DctBlock {
    int size = 0;
    std::vector<double> coeffs;

    double operator()(int i, int j) const { return coeffs[static_cast<std::size_t>(i) * size + j]; }
    double& operator()(int i, int j) { return coeffs[static_cast<std::size_t>(i) * size + j]; }
};

struct FeatureVector {
    double c1 = 0;  // coefficient (2,1), first vertical AC term
    double c2 = 0;  // coefficient (1,2), first horizontal AC term
    double c3 = 0;  // low-frequency triangle energy share
    double c4 = 0;  // top-half-rows energy share

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// One row of the feature matrix: the quantized vector, the block origin
/// and the unquantized features, which order rows inside a bin.
struct FeatureRow {
    std::array<std::int32_t, 4> q{};
    Origin origin;
    std::array<double, 4> fine{};

    friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

/// Precomputed orthonormal DCT-II basis for one block size.
class DctBasis {
public:
    explicit DctBasis(int b) : b_(b), m_(static_cast<std::size_t>(b) * b) {
        if (b < 2) throw InvalidArgument("DCT block size must be at least 2");
        const double n = b;
        for (int k = 0; k < b; ++k) {
            const double alpha = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
            for (int x = 0; x < b; ++x)
                m_[static_cast<std::size_t>(k) * b + x] =
                    alpha * std::cos(std::numbers::pi * (2 * x + 1) * k / (2.0 * n));
        }
    }

    int size() const noexcept { return b_; }

    /// Forward transform of a row-major b x b block.
    ///
    /// The block is shifted by its first pixel before transforming and the
    /// shift is added back to the DC term afterwards. Integer-valued blocks
    /// that differ by an additive constant therefore produce bit-identical AC
    /// coefficients.
    DctBlock forward(std::span<const double> block) const {
        check(block.size());
        const double pivot = block[0];
        std::vector<double> centered(block.begin(), block.end());
        for (auto& v : centered) v -= pivot;

        DctBlock out{b_, apply(centered, false)};
        out(0, 0) += b_ * pivot;
        return out;
    }

    /// Inverse transform back to a row-major pixel block.
    std::vector<double> inverse(const DctBlock& d) const {
        check(d.coeffs.size());
        return apply(d.coeffs, true);
    }

private:
    void check(std::size_t n) const {
        if (n != m_.size()) throw InvalidArgument("block size does not match DCT basis");
    }

    // Separable pass: rows then columns. Forward is M X M^T, inverse M^T X M.
    std::vector<double> apply(const std::vector<double>& in, bool transpose) const {
        const int b = b_;
        auto basis = [&](int k, int x) {
            return transpose ? m_[static_cast<std::size_t>(x) * b + k] : m_[static_cast<std::size_t>(k) * b + x];
        };
        std::vector<double> tmp(in.size()), out(in.size());
        for (int r = 0; r < b; ++r)
            for (int k = 0; k < b; ++k) {
                double s = 0;
                for (int x = 0; x < b; ++x) s += basis(k, x) * in[static_cast<std::size_t>(r) * b + x];
                tmp[static_cast<std::size_t>(r) * b + k] = s;
            }
        for (int c = 0; c < b; ++c)
            for (int k = 0; k < b; ++k) {
                double s = 0;
                for (int y = 0; y < b; ++y) s += basis(k, y) * tmp[static_cast<std::size_t>(y) * b + c];
                out[static_cast<std::size_t>(k) * b + c] = s;
            }
        return out;
    }

    int b_;
    std::vector<double> m_;
};

inline DctBlock block_dct(std::span<const double> block, int b) { return DctBasis(b).forward(block); }

/// Two low-frequency coefficients plus two magnitude-share ratios. The DC
/// term is excluded everywhere, so the vector ignores additive brightness.
inline FeatureVector feature_vector(const DctBlock& d) {
    const int b = d.size;
    double all = 0, tri = 0, top = 0;
    for (int i = 0; i < b; ++i) {
        for (int j = 0; j < b; ++j) {
            if (i == 0 && j == 0) continue;
            const double m = std::abs(d(i, j));
            all += m;
            if (i + j <= b - 2) tri += m;
            if (i < (b + 1) / 2) top += m;
        }
    }
    FeatureVector v;
    v.c1 = d(1, 0);
    v.c2 = d(0, 1);
    if (all > 0) {
        v.c3 = tri / all;
        v.c4 = top / all;
    }
    return v;
}

inline FeatureRow quantize(const FeatureVector& v, double s12, double s34, Origin origin = {}) {
    if (!(s12 > 0) || !(s34 > 0)) throw InvalidArgument("quantization steps must be positive");
    FeatureRow row;
    row.q = {static_cast<std::int32_t>(std::lround(v.c1 / s12)),
             static_cast<std::int32_t>(std::lround(v.c2 / s12)),
             static_cast<std::int32_t>(std::lround(v.c3 / s34)),
             static_cast<std::int32_t>(std::lround(v.c4 / s34))};
    row.origin = origin;
    row.fine = {v.c1, v.c2, v.c3, v.c4};
    return row;
}

}  // namespace cmfd

#endif  // CMFD_FEATURES_HPP
