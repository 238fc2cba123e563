#ifndef CMFD_MATCHER_HPP
#define CMFD_MATCHER_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cmfd/errors.hpp"
#include "cmfd/features.hpp"
#include "cmfd/image.hpp"
#include "cmfd/morphology.hpp"
#include "cmfd/parallel.hpp"

namespace cmfd {

/// How the minimum-shift threshold measures a shift vector.
enum class ShiftMetric {
    chebyshev,     // max(|dx|, |dy|)
    paper_absdiff  // |dx - dy|
};

inline const char* to_string(ShiftMetric m) {
    return m == ShiftMetric::chebyshev ? "chebyshev" : "paper-absdiff";
}

inline ShiftMetric parse_shift_metric(const std::string& s) {
    if (s == "chebyshev") return ShiftMetric::chebyshev;
    if (s == "paper-absdiff") return ShiftMetric::paper_absdiff;
    throw InvalidArgument("unknown shift metric '" + s + "'");
}

/// Block count at which th2 is taken literally; other image sizes scale it.
inline constexpr double kReferenceBlockCount = 14641.0;

struct DetectorConfig {
    int block_size = 8;
    double s12 = 2.0;
    double s34 = 0.01;
    int window = 1;
    int th1 = 10;
    ShiftMetric th1_metric = ShiftMetric::chebyshev;
    int th2 = 100;
    int se_size = 3;
    int threads = 1;

    /// Coarser bins and a wider comparison window for inputs that went
    /// through lossy compression or filtering.
    static DetectorConfig robust() {
        DetectorConfig cfg;
        cfg.s12 = 8.0;
        cfg.s34 = 0.3;
        cfg.window = 10;
        return cfg;
    }

    /// Throws InvalidArgument naming the first bad field.
    void validate() const {
        if (block_size < 2) throw InvalidArgument("block_size must be >= 2");
        if (!(s12 > 0)) throw InvalidArgument("s12 must be > 0");
        if (!(s34 > 0)) throw InvalidArgument("s34 must be > 0");
        if (window < 1) throw InvalidArgument("window must be >= 1");
        if (th1 < 0) throw InvalidArgument("th1 must be >= 0");
        if (th2 < 1) throw InvalidArgument("th2 must be >= 1");
        if (se_size < 1) throw InvalidArgument("se_size must be >= 1");
    }
};

/// Canonical translation between the two blocks of a pair: dx > 0, or
/// dx == 0 and dy > 0. dx is the row offset, dy the column offset.
struct Shift {
    int dx = 0;
    int dy = 0;

    friend constexpr auto operator<=>(const Shift&, const Shift&) = default;
};

struct MatchPair {
    Origin a;  // lexicographically smaller origin
    Origin b;
    Shift shift;

    friend bool operator==(const MatchPair&, const MatchPair&) = default;
    friend constexpr auto operator<=>(const MatchPair& x, const MatchPair& y) {
        return std::tie(x.a, x.b) <=> std::tie(y.a, y.b);
    }
};

inline MatchPair canonical_pair(Origin p, Origin q) {
    if (q < p) std::swap(p, q);
    return {p, q, {q.row - p.row, q.col - p.col}};
}

struct ShiftClass {
    Shift shift;
    std::vector<MatchPair> pairs;

    /// Nc, counted in block pairs.
    std::size_t count() const noexcept { return pairs.size(); }
};

struct StageTimings {
    double luma_ms = 0;
    double features_ms = 0;
    double sort_ms = 0;
    double match_ms = 0;
    double classify_ms = 0;
    double render_ms = 0;

    double total_ms() const {
        return luma_ms + features_ms + sort_ms + match_ms + classify_ms + render_ms;
    }
};

struct DetectionResult {
    BinaryMask source_mask;
    BinaryMask dest_mask;
    std::vector<ShiftClass> accepted;  // largest class first
    StageTimings timing;

    BinaryMask combined() const { return source_mask | dest_mask; }
};

namespace detail {

class Stopwatch {
public:
    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
        start_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// th2 scaled to the block count of the image under test.
inline int effective_th2(int th2, std::size_t blocks) {
    const double scaled = std::round(th2 * static_cast<double>(blocks) / kReferenceBlockCount);
    return std::max(1, static_cast<int>(scaled));
}

inline bool row_less(const FeatureRow& x, const FeatureRow& y) {
    if (x.q != y.q) return x.q < y.q;
    if (x.fine != y.fine) return x.fine < y.fine;
    return x.origin < y.origin;
}

/// One quantized row per overlapping block, in row-major origin order.
inline std::vector<FeatureRow> feature_rows(const LumaImage& luma, const DetectorConfig& cfg) {
    const BlockGrid grid = block_grid(luma, cfg.block_size);
    const DctBasis basis(cfg.block_size);
    std::vector<FeatureRow> rows(grid.origins.size());
    parallel_for(rows.size(), cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto block = extract_block(luma, grid.origins[i], cfg.block_size);
            rows[i] = quantize(feature_vector(basis.forward(block)), cfg.s12, cfg.s34, grid.origins[i]);
        }
    });
    return rows;
}

/// Lexicographic order on (q1, q2, q3, q4), then on the unquantized
/// features, then by row-major origin. Identical blocks therefore sit next
/// to each other even when other blocks share their bin. The order is
/// total, so the result does not depend on input order.
inline std::vector<FeatureRow> sort_rows(std::vector<FeatureRow> rows) {
    std::sort(rows.begin(), rows.end(), row_less);
    return rows;
}

/// Every pair of rows at most `window` positions apart in the sorted
/// matrix whose quantized vectors are equal.
inline std::vector<MatchPair> find_pairs(const std::vector<FeatureRow>& sorted, int window = 1) {
    if (window < 1) throw InvalidArgument("window must be >= 1");
    std::vector<MatchPair> pairs;
    const std::size_t n = sorted.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t last = std::min(n - 1, i + static_cast<std::size_t>(window));
        for (std::size_t j = i + 1; j <= last; ++j) {
            if (sorted[j].q != sorted[i].q) break;
            pairs.push_back(canonical_pair(sorted[i].origin, sorted[j].origin));
        }
    }
    return pairs;
}

/// Groups pairs by shift. Classes come out largest first, ties by shift.
inline std::vector<ShiftClass> classify_shifts(const std::vector<MatchPair>& pairs) {
    std::map<Shift, std::vector<MatchPair>> groups;
    for (const auto& p : pairs) groups[p.shift].push_back(p);

    std::vector<ShiftClass> classes;
    classes.reserve(groups.size());
    for (auto& [shift, members] : groups) {
        std::sort(members.begin(), members.end());
        classes.push_back({shift, std::move(members)});
    }
    std::stable_sort(classes.begin(), classes.end(),
                     [](const ShiftClass& x, const ShiftClass& y) { return x.count() > y.count(); });
    return classes;
}

inline int shift_magnitude(Shift s, ShiftMetric metric) {
    return metric == ShiftMetric::chebyshev ? std::max(std::abs(s.dx), std::abs(s.dy))
                                            : std::abs(s.dx - s.dy);
}

inline std::vector<ShiftClass> apply_thresholds(std::vector<ShiftClass> classes, int th1, int th2,
                                                ShiftMetric metric = ShiftMetric::chebyshev) {
    std::erase_if(classes, [&](const ShiftClass& c) {
        return shift_magnitude(c.shift, metric) < th1 || c.count() < static_cast<std::size_t>(th2);
    });
    return classes;
}

/// Paints the b x b square of every accepted pair: origin a into the
/// source mask, origin b into the destination mask. No closing applied.
inline std::pair<BinaryMask, BinaryMask> render_masks(const std::vector<ShiftClass>& accepted, int b,
                                                      int width, int height) {
    BinaryMask source(width, height), dest(width, height);
    for (const auto& cls : accepted)
        for (const auto& p : cls.pairs) {
            source.fill_rect(p.a.row, p.a.col, b, b);
            dest.fill_rect(p.b.row, p.b.col, b, b);
        }
    return {std::move(source), std::move(dest)};
}

/// Shift classification, thresholding, rendering and closing, shared by
/// every row matcher. `blocks` is the block count used to scale th2.
inline DetectionResult finish_detection(const std::vector<MatchPair>& pairs, std::size_t blocks,
                                        int width, int height, const DetectorConfig& cfg,
                                        StageTimings timing, detail::Stopwatch& clock) {
    auto classes = classify_shifts(pairs);
    auto accepted = apply_thresholds(std::move(classes), cfg.th1, effective_th2(cfg.th2, blocks),
                                     cfg.th1_metric);
    timing.classify_ms = clock.lap_ms();

    auto [source, dest] = render_masks(accepted, cfg.block_size, width, height);
    const auto se = StructuringElement::square(cfg.se_size);
    DetectionResult result{close(source, se), close(dest, se), std::move(accepted), timing};
    result.timing.render_ms = clock.lap_ms();
    return result;
}

inline void check_detectable(int width, int height, const DetectorConfig& cfg) {
    cfg.validate();
    const std::size_t blocks = block_count(width, height, cfg.block_size);
    if (blocks < static_cast<std::size_t>(effective_th2(cfg.th2, blocks)))
        throw ImageTooSmall("image yields " + std::to_string(blocks) +
                            " blocks, fewer than the count threshold");
}

/// Full intensity-invariant pipeline: luma, block features, sorted matrix,
/// neighbour matching, shift filtering, mask closing.
inline DetectionResult detect(const RgbImage& img, const DetectorConfig& cfg = {}) {
    check_detectable(img.width(), img.height(), cfg);
    detail::Stopwatch clock;
    StageTimings timing;

    const LumaImage luma = to_luma(img);
    timing.luma_ms = clock.lap_ms();

    auto rows = feature_rows(luma, cfg);
    timing.features_ms = clock.lap_ms();

    const std::size_t blocks = rows.size();
    rows = sort_rows(std::move(rows));
    timing.sort_ms = clock.lap_ms();

    const auto pairs = find_pairs(rows, cfg.window);
    timing.match_ms = clock.lap_ms();

    return finish_detection(pairs, blocks, img.width(), img.height(), cfg, timing, clock);
}

}  // namespace cmfd

#endif  // CMFD_MATCHER_HPP
