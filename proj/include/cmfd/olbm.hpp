#ifndef CMFD_OLBM_HPP
#define CMFD_OLBM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <vector>

#include "cmfd/image.hpp"
#include "cmfd/matcher.hpp"

namespace cmfd {

/// Raw-pixel rows for plain overlapped block matching: the b*b luma values
/// of every block, rounded to integers, stored contiguously.
class RawBlockMatrix {
public:
    RawBlockMatrix(const LumaImage& luma, int b) : b_(b), grid_(block_grid(luma, b)) {
        const std::size_t len = row_length();
        values_.resize(grid_.origins.size() * len);
        for (std::size_t i = 0; i < grid_.origins.size(); ++i) {
            const Origin o = grid_.origins[i];
            std::uint8_t* dst = &values_[i * len];
            for (int r = 0; r < b; ++r)
                for (int c = 0; c < b; ++c)
                    *dst++ = static_cast<std::uint8_t>(
                        std::clamp(std::lround(luma.at(o.row + r, o.col + c)), 0L, 255L));
        }
    }

    std::size_t size() const noexcept { return grid_.origins.size(); }
    std::size_t row_length() const noexcept { return static_cast<std::size_t>(b_) * b_; }
    Origin origin(std::size_t i) const { return grid_.origins[i]; }
    const std::uint8_t* row(std::size_t i) const { return &values_[i * row_length()]; }

    int compare(std::size_t i, std::size_t j) const { return std::memcmp(row(i), row(j), row_length()); }

    /// Row indices in lexicographic order of pixel values, ties by origin.
    std::vector<std::size_t> sorted_order() const {
        std::vector<std::size_t> idx(size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            const int c = compare(x, y);
            return c != 0 ? c < 0 : origin(x) < origin(y);
        });
        return idx;
    }

private:
    int b_;
    BlockGrid grid_;
    std::vector<std::uint8_t> values_;
};

/// Neighbour matching over the sorted raw rows.
inline std::vector<MatchPair> olbm_pairs(const RawBlockMatrix& m, int window = 1) {
    const auto order = m.sorted_order();
    std::vector<MatchPair> pairs;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size() && j <= i + static_cast<std::size_t>(window); ++j) {
            if (m.compare(order[i], order[j]) != 0) break;
            pairs.push_back(canonical_pair(m.origin(order[i]), m.origin(order[j])));
        }
    return pairs;
}

/// Every pair of blocks with identical raw rows, by exhaustive O(R^2)
/// comparison. Reference only; use on small images.
inline std::vector<MatchPair> exhaustive_pairs(const RawBlockMatrix& m) {
    std::vector<MatchPair> pairs;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (m.compare(i, j) == 0) pairs.push_back(canonical_pair(m.origin(i), m.origin(j)));
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

/// Plain overlapped block matching on exact pixel equality. Shares shift
/// classification, thresholds, and mask rendering with detect().
inline DetectionResult olbm_detect(const RgbImage& img, const DetectorConfig& cfg = {}) {
    check_detectable(img.width(), img.height(), cfg);
    detail::Stopwatch clock;
    StageTimings timing;

    const LumaImage luma = to_luma(img);
    timing.luma_ms = clock.lap_ms();

    const RawBlockMatrix matrix(luma, cfg.block_size);
    timing.features_ms = clock.lap_ms();

    // Sorting happens inside olbm_pairs; its cost lands in match_ms.
    const auto pairs = olbm_pairs(matrix, cfg.window);
    timing.match_ms = clock.lap_ms();

    return finish_detection(pairs, matrix.size(), img.width(), img.height(), cfg, timing, clock);
}

}  // namespace cmfd

#endif  // CMFD_OLBM_HPP
