// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails. Tolerances, corpus sizes and seeds are fixed here.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "cmfd/cmfd.hpp"
#include "oracles.hpp"

using namespace cmfd;

namespace {

constexpr std::uint64_t kCorpusSeed = 20240611;
constexpr std::uint64_t kNoiseSeed = 77;

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<SweepItem> corpus_128() {
    std::vector<SweepItem> out;
    for (const auto& item : make_corpus({.count = 20, .size = 128, .region = 40,
                                         .deltas = {-30, -20, -10, 10, 20, 30}, .seed = kCorpusSeed}))
        out.push_back(to_sweep_item(item));
    return out;
}

int hardware_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

void add_table(Outcome& o, const SweepReport& r) {
    for (const auto& s : r.summary)
        o.detail.push_back(fmt("%-22s acc %.4f  fp %.4f  localized %zu/%zu  failed %zu", s.degradation.c_str(),
                               s.mean_acc, s.mean_fp, s.localized, s.cells, s.failed));
}

std::vector<DegradeSpec> qf_grid() {
    std::vector<DegradeSpec> grid;
    for (int qf : {100, 92, 83, 75, 67, 58, 50, 42, 33, 25, 17, 9}) {
        DegradeSpec d;
        d.jpeg_qf = qf;
        grid.push_back(d);
    }
    return grid;
}

std::vector<DegradeSpec> awgn_grid() {
    std::vector<DegradeSpec> grid;
    for (double snr = 10; snr <= 40; snr += 5) {
        DegradeSpec d;
        d.jpeg_qf = 75;
        d.awgn_snr_db = snr;
        d.seed = kNoiseSeed;
        grid.push_back(d);
    }
    return grid;
}

std::vector<DegradeSpec> blur_grid() {
    std::vector<DegradeSpec> grid;
    for (double sd : {0.1, 0.5, 2.0, 5.0, 8.0, 10.0}) {
        DegradeSpec d;
        d.jpeg_qf = 75;
        d.blur = BlurSpec{3, sd};
        grid.push_back(d);
    }
    return grid;
}

Outcome criterion1(const std::vector<SweepItem>& corpus) {
    Outcome o;
    const auto r = sweep(corpus, {DegradeSpec{}}, DetectorConfig{}, {.threads = hardware_threads()});
    const auto& s = r.summary[0];
    o.pass = s.mean_acc >= 0.85 && s.mean_fp <= 0.05;
    o.summary = fmt("uncompressed intensity-variant clones: mean ACC %.4f (>= 0.85), mean FP %.4f (<= 0.05)",
                    s.mean_acc, s.mean_fp);
    add_table(o, r);
    return o;
}

Outcome criterion2(const std::vector<SweepItem>& corpus, std::string& report_text) {
    Outcome o;
    const auto r = sweep(corpus, qf_grid(), DetectorConfig::robust(), {.threads = hardware_threads()});
    report_text = format_report(r);
    double high = 0, low = 0;
    int nh = 0, nl = 0;
    std::size_t must = 0, localized = 0;
    for (const auto& c : r.cells) {
        const int qf = qf_grid()[c.grid_index].jpeg_qf.value();
        if (qf >= 67) high += c.score.acc, ++nh;
        if (qf <= 25) low += c.score.acc, ++nl;
        if (qf >= 17) ++must, localized += c.localized;
    }
    const double gap = high / nh - low / nl;
    o.pass = gap >= 0.2 && localized == must;
    o.summary = fmt("JPEG trend: ACC(QF>=67) %.4f - ACC(QF<=25) %.4f = %.4f (>= 0.2); localized %zu/%zu cells "
                    "with QF >= 17 (all)",
                    high / nh, low / nl, gap, localized, must);
    add_table(o, r);
    return o;
}

Outcome criterion3(const std::vector<SweepItem>& corpus, std::string& report_text) {
    Outcome o;
    const auto r = sweep(corpus, awgn_grid(), DetectorConfig::robust(), {.seed = kNoiseSeed, .threads = hardware_threads()});
    report_text = format_report(r);
    double worst_acc = 1, worst_fp = 0;
    std::size_t localized = 0;
    for (const auto& s : r.summary) {
        worst_acc = std::min(worst_acc, s.mean_acc);
        worst_fp = std::max(worst_fp, s.mean_fp);
        localized += s.localized;
    }
    o.pass = worst_acc >= 0.5 && worst_fp <= 0.2 && localized == r.cells.size();
    o.summary = fmt("AWGN on QF-75, SNR 10..40 dB: lowest mean ACC %.4f (>= 0.5), highest mean FP %.4f (<= 0.2), "
                    "localized %zu/%zu (all)",
                    worst_acc, worst_fp, localized, r.cells.size());
    add_table(o, r);
    return o;
}

Outcome criterion4(const std::vector<SweepItem>& corpus) {
    Outcome o;
    const auto r = sweep(corpus, blur_grid(), DetectorConfig::robust(), {.threads = hardware_threads()});
    double worst_acc = 1, worst_fp = 0;
    for (const auto& s : r.summary) {
        worst_acc = std::min(worst_acc, s.mean_acc);
        worst_fp = std::max(worst_fp, s.mean_fp);
    }
    o.pass = worst_acc >= 0.5 && worst_fp <= 0.25;
    o.summary = fmt("3x3 Gaussian blur on QF-75: lowest mean ACC %.4f (>= 0.5), highest mean FP %.4f (<= 0.25)",
                    worst_acc, worst_fp);
    add_table(o, r);
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::mt19937_64 rng(kCorpusSeed ^ 5);
    std::uniform_int_distribution<int> side(48, 64);
    int same_shift = 0;
    std::size_t oracle_pairs = 0, recalled = 0;
    const int n = 50;
    for (int i = 0; i < n; ++i) {
        const int w = side(rng), h = side(rng);
        const int rg = std::uniform_int_distribution<int>(16, std::min(w, h) / 2 - 1)(rng);
        const auto base = make_base_image(w, h, derive_seed(kCorpusSeed, static_cast<std::uint64_t>(i), 5));
        const auto spec = random_forgery(w, h, rg, 0, derive_seed(kCorpusSeed, static_cast<std::uint64_t>(i), 6));
        const auto img = synthesize(base, spec).image;

        const auto ours = detect(img), raw = olbm_detect(img);
        if (ours.accepted.empty() || raw.accepted.empty()) {
            o.detail.push_back(fmt("image %d (%dx%d, clone %d): %s accepted nothing", i, w, h, rg,
                                   ours.accepted.empty() ? "detector" : "oracle"));
            continue;
        }
        const Shift dominant = raw.accepted.front().shift;
        same_shift += ours.accepted.front().shift == dominant;

        const std::set<MatchPair> found(ours.accepted.front().pairs.begin(), ours.accepted.front().pairs.end());
        std::size_t hit = 0, total = 0;
        for (const auto& p : exhaustive_pairs(RawBlockMatrix(to_luma(img), 8)))
            if (p.shift == dominant) ++total, hit += found.count(p);
        oracle_pairs += total;
        recalled += hit;
        if (hit != total)
            o.detail.push_back(fmt("image %d (%dx%d, clone %d): recalled %zu of %zu oracle pairs", i, w, h, rg, hit,
                                   total));
    }
    const double recall = oracle_pairs ? static_cast<double>(recalled) / oracle_pairs : 0.0;
    o.pass = same_shift == n && recalled == oracle_pairs && oracle_pairs > 0;
    o.summary = fmt("oracle equivalence on %d exact clones <= 64x64: same dominant shift %d/%d, block-pair recall "
                    "%.6f (%zu/%zu, must be 1)",
                    n, same_shift, n, recall, recalled, oracle_pairs);
    return o;
}

Outcome criterion6() {
    Outcome o;
    std::mt19937_64 rng(kCorpusSeed ^ 6);
    std::uniform_int_distribution<int> shift(-50, 50);
    const DetectorConfig cfg;
    int exact = 0;
    const int n = 1000;
    for (int t = 0; t < n; ++t) {
        const int c = shift(rng);
        std::uniform_int_distribution<int> pixel(std::max(0, -c), std::min(255, 255 - c));
        std::vector<double> x(64), y(64);
        for (int i = 0; i < 64; ++i) {
            x[i] = pixel(rng);
            y[i] = x[i] + c;
        }
        const auto fx = feature_vector(block_dct(x, 8)), fy = feature_vector(block_dct(y, 8));
        const bool same = fx == fy && quantize(fx, cfg.s12, cfg.s34).q == quantize(fy, cfg.s12, cfg.s34).q;
        exact += same;
        if (!same && o.detail.size() < 5) o.detail.push_back(fmt("block %d, c = %d: features differ", t, c));
    }
    o.pass = exact == n;
    o.summary = fmt("feature invariance: %d/%d random 8x8 blocks bit-identical after an in-range shift", exact, n);
    return o;
}

Outcome criterion7() {
    using namespace oracle;
    Outcome o;
    std::mt19937 rng(static_cast<std::uint32_t>(kCorpusSeed ^ 7));
    int ok = 0;
    const int n = 1000;
    for (int t = 0; t < n; ++t) {
        const int w = 8 + static_cast<int>(rng() % 33), h = 8 + static_cast<int>(rng() % 33);
        const int k = 1 + static_cast<int>(rng() % 5);
        const auto a = random_mask(rng, w, h, 0.1 + 0.7 * (t % 9) / 9.0);
        const auto b = a | random_mask(rng, w, h, 0.15);
        const auto se = random_se(rng, k, true);

        const auto d = dilate(a, se), e = erode(a, se), c = close(a, se);
        bool good = d == dilate_oracle(a, se) && e == erode_oracle(a, se) && c == close_oracle(a, se, k);
        good = good && e == crop(dilate(embed(a, k).complement(), se.reflect()).complement(), k, w, h);
        good = good && close(c, se) == c;
        good = good && a.subset_of(c) && a.subset_of(d) && e.subset_of(a);
        good = good && d.subset_of(dilate(b, se)) && e.subset_of(erode(b, se)) && c.subset_of(close(b, se));
        ok += good;
        if (!good && o.detail.size() < 5) o.detail.push_back(fmt("instance %d (%dx%d, k=%d) violated", t, w, h, k));
    }
    o.pass = ok == n;
    o.summary = fmt("morphology: duality, idempotent closing, extensivity, monotonicity and oracle agreement on "
                    "%d/%d random instances",
                    ok, n);
    return o;
}

Outcome criterion8() {
    Outcome o;
    std::size_t checked = 0, bad = 0;
    auto check = [&](const BinaryMask& d1, const BinaryMask& d2, const BinaryMask& r1, const BinaryMask& r2) {
        if ((r1 | r2).none()) return;
        ++checked;
        const auto s = score(d1, d2, r1, r2);
        const auto perfect = score(r1, r2, r1, r2);
        const BinaryMask none(r1.width(), r1.height());
        const auto empty = score(none, none, r1, r2);
        const double truth = static_cast<double>(r1.popcount() + r2.popcount());
        const double straight = static_cast<double>((r1 & d1).popcount() + (r2 & d2).popcount()) / truth;
        const bool good = perfect.acc == 1.0 && perfect.fp == 0.0 && empty.acc == 0.0 && empty.fp == 0.0 &&
                          s.acc >= straight && score(d2, d1, r1, r2).acc == s.acc && s.acc >= 0 && s.acc <= 1 &&
                          s.fp >= 0;
        bad += !good;
    };
    // Every quadruple of masks on a 2x2 frame with disjoint truth regions.
    auto mask = [](unsigned bits) {
        BinaryMask m(2, 2);
        for (int i = 0; i < 4; ++i) m.set(i / 2, i % 2, (bits >> i) & 1u);
        return m;
    };
    for (unsigned r1 = 0; r1 < 16; ++r1)
        for (unsigned r2 = 0; r2 < 16; ++r2) {
            if (r1 & r2) continue;
            for (unsigned d1 = 0; d1 < 16; ++d1)
                for (unsigned d2 = 0; d2 < 16; ++d2) check(mask(d1), mask(d2), mask(r1), mask(r2));
        }
    std::mt19937 rng(static_cast<std::uint32_t>(kCorpusSeed ^ 8));
    for (int t = 0; t < 5000; ++t) {
        const auto r1 = oracle::random_mask(rng, 12, 12, 0.3);
        const auto r2 = oracle::random_mask(rng, 12, 12, 0.3) - r1;
        check(oracle::random_mask(rng, 12, 12, 0.4), oracle::random_mask(rng, 12, 12, 0.4), r1, r2);
    }
    o.pass = bad == 0;
    o.summary = fmt("metric identities: %zu/%zu mask quadruples satisfy perfect=(1,0), empty=(0,0), swap never lowers "
                    "ACC",
                    checked - bad, checked);
    return o;
}

Outcome criterion9() {
    Outcome o;
    const int sides[3] = {64, 91, 128};
    double median[3];
    for (int s = 0; s < 3; ++s) {
        std::vector<double> ms;
        for (int rep = 0; rep < 21; ++rep) {
            const auto img = make_base_image(sides[s], sides[s], derive_seed(kCorpusSeed, 9, rep % 7));
            const auto t0 = std::chrono::steady_clock::now();
            const auto res = detect(img);
            ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
        }
        std::nth_element(ms.begin(), ms.begin() + ms.size() / 2, ms.end());
        median[s] = ms[ms.size() / 2];
        o.detail.push_back(fmt("%dx%d: median %.3f ms over %zu runs", sides[s], sides[s], median[s], ms.size()));
    }
    const double g1 = median[1] / median[0], g2 = median[2] / median[1];
    o.pass = g1 <= 2.5 && g2 <= 2.5;
    o.summary = fmt("runtime scaling: x%.3f from 64^2 to 91^2, x%.3f from 91^2 to 128^2 (each <= 2.5)", g1, g2);
    return o;
}

Outcome criterion10(const std::vector<SweepItem>& corpus, const std::string& qf_report,
                    const std::string& awgn_report) {
    Outcome o;
    const auto qf = format_report(sweep(corpus, qf_grid(), DetectorConfig::robust(), {.threads = 1}));
    const auto awgn = format_report(
        sweep(corpus, awgn_grid(), DetectorConfig::robust(), {.seed = kNoiseSeed, .threads = 3}));
    const bool same_qf = qf == qf_report, same_awgn = awgn == awgn_report;
    o.pass = same_qf && same_awgn && !qf.empty();
    o.summary = fmt("determinism: JPEG sweep report %s (%zu bytes), AWGN sweep report %s (%zu bytes) on rerun with "
                    "a different thread count",
                    same_qf ? "identical" : "DIFFERS", qf.size(), same_awgn ? "identical" : "DIFFERS", awgn.size());
    return o;
}

}  // namespace

int main() {
    const auto corpus = corpus_128();
    std::string qf_report, awgn_report;

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, [&] { return criterion1(corpus); }},
        {2, [&] { return criterion2(corpus, qf_report); }},
        {3, [&] { return criterion3(corpus, awgn_report); }},
        {4, [&] { return criterion4(corpus); }},
        {5, criterion5},
        {6, criterion6},
        {7, criterion7},
        {8, criterion8},
        {9, criterion9},
        {10, [&] { return criterion10(corpus, qf_report, awgn_report); }},
    };

    int failed = 0;
    for (const auto& [id, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("threw: ") + e.what();
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, o.summary.c_str(), sec);
        for (const auto& line : o.detail) std::printf("         %s\n", line.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
