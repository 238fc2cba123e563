#ifndef CMFD_EVAL_HPP
#define CMFD_EVAL_HPP

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "cmfd/config.hpp"
#include "cmfd/corpus.hpp"
#include "cmfd/degrade.hpp"
#include "cmfd/errors.hpp"
#include "cmfd/image.hpp"
#include "cmfd/matcher.hpp"
#include "cmfd/parallel.hpp"

namespace cmfd {

struct Score {
    double acc = 0;
    double fp = 0;
    std::size_t detected_pixels = 0;        // |D1| + |D2|
    std::size_t false_positive_pixels = 0;  // |D1 - R1| + |D2 - R2|
    bool swapped = false;                   // D1 was scored against R2
};

/// Pixel accuracy and false-positive rate of detected masks (d1, d2)
/// against true regions (r1, r2):
///   ACC = (|R1 & D1| + |R2 & D2|) / (|R1| + |R2|)
///   FP  = (|D1 - R1| + |D2 - R2|) / (|R1| + |R2|)
/// The detected labels are swapped when that yields a higher ACC.
inline Score score(const BinaryMask& d1, const BinaryMask& d2, const BinaryMask& r1, const BinaryMask& r2) {
    const double truth = static_cast<double>(r1.popcount() + r2.popcount());
    if (truth == 0) throw EmptyGroundTruth();

    const std::size_t straight = (r1 & d1).popcount() + (r2 & d2).popcount();
    const std::size_t crossed = (r1 & d2).popcount() + (r2 & d1).popcount();

    Score s;
    s.swapped = crossed > straight;
    const BinaryMask& a = s.swapped ? d2 : d1;
    const BinaryMask& b = s.swapped ? d1 : d2;
    s.acc = static_cast<double>(s.swapped ? crossed : straight) / truth;
    s.false_positive_pixels = (a - r1).popcount() + (b - r2).popcount();
    s.fp = static_cast<double>(s.false_positive_pixels) / truth;
    s.detected_pixels = d1.popcount() + d2.popcount();
    return s;
}

/// One forged image with its ground truth, ready for a sweep.
struct SweepItem {
    std::string id;
    RgbImage image;
    BinaryMask gt_source;
    BinaryMask gt_dest;
    Shift truth_shift;
};

inline Shift canonical_shift(Origin from, Origin to) { return canonical_pair(from, to).shift; }

inline SweepItem to_sweep_item(const CorpusItem& item) {
    return {item.id, item.forged.image, item.forged.gt_source, item.forged.gt_dest,
            canonical_shift({item.spec.source_rect.row, item.spec.source_rect.col}, item.spec.dest_origin)};
}

struct CellRecord {
    std::string image_id;
    std::string degradation;
    std::size_t grid_index = 0;
    Score score;
    std::optional<Shift> dominant_shift;
    Shift truth_shift;
    bool localized = false;
    double ms = 0;
    std::string error;  // empty on success

    bool failed() const { return !error.empty(); }
};

struct GridSummary {
    std::string degradation;
    std::size_t cells = 0;
    std::size_t failed = 0;
    std::size_t localized = 0;
    double mean_acc = 0;
    double mean_fp = 0;
};

struct SweepReport {
    Method method = Method::iidmjpeg;
    DetectorConfig config;
    std::vector<CellRecord> cells;  // image-major, grid-minor
    std::vector<GridSummary> summary;

    const GridSummary* find(const std::string& label) const {
        for (const auto& s : summary)
            if (s.degradation == label) return &s;
        return nullptr;
    }
};

/// A shift is localized when its Chebyshev distance to the truth is <= tol.
inline bool shift_within(Shift a, Shift b, int tol = 2) {
    return std::abs(a.dx - b.dx) <= tol && std::abs(a.dy - b.dy) <= tol;
}

struct SweepOptions {
    Method method = Method::iidmjpeg;
    std::uint64_t seed = 0;
    int threads = 1;
};

/// Degrades, detects and scores every (image, grid point) cell. Each cell's
/// noise seed is derived from the grid spec seed and the cell position, so
/// any thread count yields the same report. Cell errors are recorded as
/// failed cells scoring ACC = FP = 0.
inline SweepReport sweep(const std::vector<SweepItem>& corpus, const std::vector<DegradeSpec>& grid,
                         const DetectorConfig& cfg, const SweepOptions& opt = {}) {
    SweepReport report{opt.method, cfg, {}, {}};
    if (corpus.empty() || grid.empty()) return report;

    DetectorConfig cell_cfg = cfg;
    cell_cfg.threads = 1;

    const std::size_t n = corpus.size() * grid.size();
    report.cells.resize(n);
    parallel_for(n, opt.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t i = k / grid.size(), g = k % grid.size();
            const SweepItem& item = corpus[i];
            CellRecord& rec = report.cells[k];
            rec.image_id = item.id;
            rec.degradation = grid[g].label();
            rec.grid_index = g;
            rec.truth_shift = item.truth_shift;
            try {
                DegradeSpec spec = grid[g];
                spec.seed = derive_seed(spec.seed ^ opt.seed, i, g);
                const RgbImage degraded = degrade(item.image, spec);
                const auto t0 = std::chrono::steady_clock::now();
                const DetectionResult det = run_detector(opt.method, degraded, cell_cfg);
                rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                rec.score = score(det.source_mask, det.dest_mask, item.gt_source, item.gt_dest);
                if (!det.accepted.empty()) {
                    rec.dominant_shift = det.accepted.front().shift;
                    rec.localized = shift_within(*rec.dominant_shift, item.truth_shift);
                }
            } catch (const std::exception& e) {
                rec.score = {};
                rec.error = e.what();
            }
        }
    });

    report.summary.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) report.summary[g].degradation = grid[g].label();
    for (const auto& rec : report.cells) {
        auto& s = report.summary[rec.grid_index];
        ++s.cells;
        s.failed += rec.failed();
        s.localized += rec.localized;
        s.mean_acc += rec.score.acc;
        s.mean_fp += rec.score.fp;
    }
    for (auto& s : report.summary) {
        s.mean_acc /= static_cast<double>(s.cells);
        s.mean_fp /= static_cast<double>(s.cells);
    }
    return report;
}

namespace detail {

inline std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string shift_text(std::optional<Shift> s) {
    return s ? std::to_string(s->dx) + "," + std::to_string(s->dy) : "none";
}

}  // namespace detail

/// Tab-separated report with a config echo, one record per cell and one
/// aggregate row per grid point. Field order is fixed. Timings are wall-clock
/// and therefore only emitted on request.
inline std::string format_report(const SweepReport& r, bool with_timing = false) {
    std::string out = "# cmfd sweep report\n[config]\n";
    out += "method=" + std::string(to_string(r.method)) + "\n";
    out += to_kv(r.config).str();

    out += "[cells]\nimage_id\tdegradation\tacc\tfp\tdetected_pixels\tfp_pixels\t";
    out += with_timing ? "ms\t" : "";
    out += "dominant_shift\ttruth_shift\tlocalized\tstatus\n";
    for (const auto& c : r.cells) {
        out += c.image_id + "\t" + c.degradation + "\t" + detail::fixed6(c.score.acc) + "\t" +
               detail::fixed6(c.score.fp) + "\t" + std::to_string(c.score.detected_pixels) + "\t" +
               std::to_string(c.score.false_positive_pixels) + "\t";
        if (with_timing) out += detail::fixed6(c.ms) + "\t";
        out += detail::shift_text(c.dominant_shift) + "\t" + detail::shift_text(c.truth_shift) + "\t" +
               (c.localized ? "1" : "0") + "\t" + (c.failed() ? "error: " + c.error : "ok") + "\n";
    }

    out += "[aggregate]\ndegradation\tcells\tfailed\tlocalized\tmean_acc\tmean_fp\n";
    for (const auto& s : r.summary)
        out += s.degradation + "\t" + std::to_string(s.cells) + "\t" + std::to_string(s.failed) + "\t" +
               std::to_string(s.localized) + "\t" + detail::fixed6(s.mean_acc) + "\t" +
               detail::fixed6(s.mean_fp) + "\n";
    return out;
}

/// Input image with detected pixels tinted orange.
inline RgbImage overlay(const RgbImage& img, const BinaryMask& detected) {
    RgbImage out = img;
    constexpr int tint[3] = {255, 140, 0};
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c)
            if (detected.get(r, c))
                for (int ch = 0; ch < 3; ++ch)
                    out.at(r, c, ch) = static_cast<std::uint8_t>((img.at(r, c, ch) + tint[ch]) / 2);
    return out;
}

}  // namespace cmfd

#endif  // CMFD_EVAL_HPP
