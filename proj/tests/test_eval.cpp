#include <gtest/gtest.h>

#include <random>

#include "cmfd/eval.hpp"

namespace cmfd {
namespace {

BinaryMask random_mask(int w, int h, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution bit(p);
    BinaryMask m(w, h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) m.set(r, c, bit(rng));
    return m;
}

// Straight-line evaluation of the two formulas for a fixed label assignment.
std::pair<double, double> formula(const BinaryMask& d1, const BinaryMask& d2, const BinaryMask& r1,
                                  const BinaryMask& r2) {
    double tp = 0, fp = 0, truth = 0;
    for (int r = 0; r < r1.height(); ++r)
        for (int c = 0; c < r1.width(); ++c) {
            truth += r1.get(r, c) + r2.get(r, c);
            tp += (d1.get(r, c) && r1.get(r, c)) + (d2.get(r, c) && r2.get(r, c));
            fp += (d1.get(r, c) && !r1.get(r, c)) + (d2.get(r, c) && !r2.get(r, c));
        }
    return {tp / truth, fp / truth};
}

TEST(Score, PerfectAndEmpty) {
    BinaryMask r1(64, 64), r2(64, 64);
    r1.fill_rect(0, 0, 20, 20);
    r2.fill_rect(30, 30, 20, 20);
    const auto perfect = score(r1, r2, r1, r2);
    EXPECT_EQ(perfect.acc, 1.0);
    EXPECT_EQ(perfect.fp, 0.0);
    const BinaryMask none(64, 64);
    const auto empty = score(none, none, r1, r2);
    EXPECT_EQ(empty.acc, 0.0);
    EXPECT_EQ(empty.fp, 0.0);
    EXPECT_EQ(empty.detected_pixels, 0u);
}

TEST(Score, WorkedArithmetic) {
    // |R1| = |R2| = 800, 700 + 686 true positives, 218 spurious pixels.
    BinaryMask r1(100, 100), r2(100, 100), d1(100, 100), d2(100, 100);
    r1.fill_rect(0, 0, 20, 40);
    r2.fill_rect(50, 0, 20, 40);
    d1.fill_rect(0, 0, 20, 35);    // 700 inside R1
    d2.fill_rect(50, 0, 20, 34);   // 680 inside R2
    d2.fill_rect(69, 34, 1, 6);    // +6 inside R2
    d1.fill_rect(90, 0, 2, 100);   // 200 spurious
    d2.fill_rect(30, 0, 1, 18);    // 18 spurious
    const auto s = score(d1, d2, r1, r2);
    EXPECT_NEAR(s.acc, 1386.0 / 1600.0, 1e-15);
    EXPECT_NEAR(s.fp, 218.0 / 1600.0, 1e-15);
    EXPECT_NEAR(s.acc, 0.866, 5e-4);
    EXPECT_NEAR(s.fp, 0.136, 5e-4);
    EXPECT_EQ(s.false_positive_pixels, 218u);
    EXPECT_EQ(s.detected_pixels, 700u + 686 + 218);
}

TEST(Score, SwapNeverLowersAcc) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 500; ++t) {
        const auto r1 = random_mask(16, 16, 0.3, rng), r2 = random_mask(16, 16, 0.3, rng) - r1;
        const auto d1 = random_mask(16, 16, 0.4, rng), d2 = random_mask(16, 16, 0.4, rng);
        if ((r1 | r2).none()) continue;
        const auto s = score(d1, d2, r1, r2);
        const auto straight = formula(d1, d2, r1, r2), crossed = formula(d2, d1, r1, r2);
        EXPECT_DOUBLE_EQ(s.acc, std::max(straight.first, crossed.first));
        EXPECT_DOUBLE_EQ(s.fp, s.swapped ? crossed.second : straight.second);
        EXPECT_GE(s.acc, 0.0);
        EXPECT_LE(s.acc, 1.0);
        EXPECT_EQ(score(d2, d1, r1, r2).acc, s.acc);
        if (d1.subset_of(r1) && d2.subset_of(r2) && !s.swapped) {
            EXPECT_EQ(s.fp, 0.0);
        }
    }
}

TEST(Score, EmptyTruthThrows) {
    const BinaryMask e(8, 8);
    EXPECT_THROW(score(e, e, e, e), EmptyGroundTruth);
}

std::vector<SweepItem> small_corpus(int n, std::vector<int> deltas = {0}) {
    std::vector<SweepItem> out;
    for (const auto& item : make_corpus({.count = n, .size = 96, .region = 32, .deltas = deltas, .seed = 5}))
        out.push_back(to_sweep_item(item));
    return out;
}

TEST(Sweep, ExactClonesIdentityGrid) {
    const auto report = sweep(small_corpus(4), {DegradeSpec{}}, DetectorConfig{});
    ASSERT_EQ(report.summary.size(), 1u);
    EXPECT_NEAR(report.summary[0].mean_acc, 1.0, 0.02);
    EXPECT_EQ(report.summary[0].localized, 4u);
}

TEST(Sweep, AggregateIsMeanOfCells) {
    std::vector<DegradeSpec> grid(3);
    grid[1].jpeg_qf = 90;
    grid[2].awgn_snr_db = 35;
    grid[2].seed = 3;
    const auto report = sweep(small_corpus(3, {10, -20}), grid, DetectorConfig::robust(), {.threads = 2});
    ASSERT_EQ(report.cells.size(), 9u);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double acc = 0, fp = 0;
        for (const auto& c : report.cells)
            if (c.grid_index == g) {
                acc += c.score.acc / 3;
                fp += c.score.fp / 3;
            }
        EXPECT_NEAR(report.summary[g].mean_acc, acc, 1e-12);
        EXPECT_NEAR(report.summary[g].mean_fp, fp, 1e-12);
        EXPECT_EQ(report.summary[g].degradation, grid[g].label());
    }
}

TEST(Sweep, EmptyGridGivesEmptyTable) {
    const auto report = sweep(small_corpus(1), {}, DetectorConfig{});
    EXPECT_TRUE(report.cells.empty());
    EXPECT_TRUE(report.summary.empty());
}

TEST(Sweep, FailedCellsAreFlagged) {
    auto corpus = small_corpus(1);
    corpus.push_back({"tiny", RgbImage(4, 4), BinaryMask(4, 4), BinaryMask(4, 4), {}});
    corpus.back().gt_source.set(0, 0, true);
    const auto report = sweep(corpus, {DegradeSpec{}}, DetectorConfig{});
    EXPECT_FALSE(report.cells[0].failed());
    EXPECT_TRUE(report.cells[1].failed());
    EXPECT_EQ(report.cells[1].score.acc, 0.0);
    EXPECT_EQ(report.summary[0].failed, 1u);
    EXPECT_NE(format_report(report).find("error: "), std::string::npos);
}

TEST(Sweep, ReportIndependentOfThreads) {
    std::vector<DegradeSpec> grid(2);
    grid[0].awgn_snr_db = 30;
    grid[1].jpeg_qf = 75;
    grid[1].awgn_snr_db = 25;
    const auto corpus = small_corpus(3, {20});
    const auto a = format_report(sweep(corpus, grid, DetectorConfig::robust(), {.seed = 9, .threads = 1}));
    const auto b = format_report(sweep(corpus, grid, DetectorConfig::robust(), {.seed = 9, .threads = 3}));
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("[aggregate]"), std::string::npos);
}

TEST(Overlay, TintsOnlyDetectedPixels) {
    RgbImage img(4, 4);
    BinaryMask m(4, 4);
    m.set(1, 2, true);
    const auto out = overlay(img, m);
    EXPECT_EQ(out.at(1, 2, 0), 127);
    EXPECT_EQ(out.at(1, 2, 1), 70);
    EXPECT_EQ(out.at(1, 2, 2), 0);
    EXPECT_EQ(out.at(0, 0, 0), 0);
}

}  // namespace
}  // namespace cmfd
