// cmfd: copy-move forgery detection from the command line.
//
//   cmfd detect     --in forged.png --out-dir out/
//   cmfd synthesize --out-dir corpus/ --seed 3 --delta 20
//   cmfd degrade    --in forged.png --out degraded.png --qf 75 --snr 30
//   cmfd evaluate   --source d1.png --dest d2.png --gt-source r1.png --gt-dest r2.png
//   cmfd sweep      --grid qf=100,83,75,67,58,50,42,33,25,17,9 --out-dir sweep/
//
// Exit status: 0 on success, 1 on usage errors, 2 on processing errors.

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cmfd/cmfd.hpp"

namespace fs = std::filesystem;
using namespace cmfd;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fails a stage with the stage and file named in the message.
struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& what) : std::runtime_error(stage + ": " + what) {}
};

struct DetectorFlags {
    std::string preset = "default";
    DetectorConfig cfg;
    std::string metric = "chebyshev";
    std::string method = "iidmjpeg";
    std::vector<CLI::Option*> tuned;

    void attach(CLI::App* app) {
        app->add_option("--method", method, "Detector: iidmjpeg or olbm")
            ->check(CLI::IsMember({"iidmjpeg", "olbm"}))
            ->capture_default_str();
        app->add_option("--preset", preset,
                        "Starting values for the tuning flags: default (exact settings) or robust "
                        "(coarse bins and wide window for compressed or filtered input)")
            ->check(CLI::IsMember({"default", "robust"}))
            ->capture_default_str();
        tuned = {
            app->add_option("--block-size", cfg.block_size, "Block side b")->capture_default_str(),
            app->add_option("--s12", cfg.s12, "Quantization step for the two DCT coefficients")
                ->capture_default_str(),
            app->add_option("--s34", cfg.s34, "Quantization step for the two energy ratios")
                ->capture_default_str(),
            app->add_option("--window", cfg.window, "Neighbouring sorted rows compared per row")
                ->capture_default_str(),
            app->add_option("--th1", cfg.th1, "Minimum shift magnitude")->capture_default_str(),
            app->add_option("--th1-metric", metric, "Shift magnitude: chebyshev or paper-absdiff")
                ->check(CLI::IsMember({"chebyshev", "paper-absdiff"}))
                ->capture_default_str(),
            app->add_option("--th2", cfg.th2, "Minimum pairs per shift class at 128x128")
                ->capture_default_str(),
            app->add_option("--se-size", cfg.se_size, "Closing structuring element side")
                ->capture_default_str(),
        };
        app->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
    }

    // Explicit flags override the preset.
    DetectorConfig resolve() const {
        DetectorConfig out = preset == "robust" ? DetectorConfig::robust() : DetectorConfig{};
        const DetectorConfig& given = cfg;
        auto set = [&](std::size_t i) { return tuned[i]->count() > 0; };
        if (set(0)) out.block_size = given.block_size;
        if (set(1)) out.s12 = given.s12;
        if (set(2)) out.s34 = given.s34;
        if (set(3)) out.window = given.window;
        if (set(4)) out.th1 = given.th1;
        if (set(5)) out.th1_metric = parse_shift_metric(metric);
        if (set(6)) out.th2 = given.th2;
        if (set(7)) out.se_size = given.se_size;
        out.threads = given.threads;
        try {
            out.validate();
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
        if (out.threads < 1) throw UsageError("threads must be >= 1");
        return out;
    }
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw StageError("output", "cannot create " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw StageError("output", "cannot write " + path);
}

RgbImage load(const std::string& path) {
    try {
        return read_image(path);
    } catch (const std::exception& e) {
        throw StageError("read", e.what());
    }
}

BinaryMask load_mask(const std::string& path) {
    try {
        return read_mask(path);
    } catch (const std::exception& e) {
        throw StageError("read", e.what());
    }
}

std::string shift_list(const std::vector<ShiftClass>& classes) {
    std::string out;
    for (const auto& c : classes)
        out += "class=" + std::to_string(c.shift.dx) + "," + std::to_string(c.shift.dy) + " pairs=" +
               std::to_string(c.count()) + "\n";
    return out;
}

// --- detect ---------------------------------------------------------------

struct DetectArgs {
    std::string in, out_dir = ".";
    bool timing = false;
    DetectorFlags det;
};

int run_detect(const DetectArgs& a) {
    const DetectorConfig cfg = a.det.resolve();
    const Method method = parse_method(a.det.method);
    const RgbImage img = load(a.in);
    DetectionResult res;
    try {
        res = run_detector(method, img, cfg);
    } catch (const std::exception& e) {
        throw StageError("detect " + a.in, e.what());
    }
    ensure_dir(a.out_dir);
    write_mask_png(join(a.out_dir, "source_mask.png"), res.source_mask);
    write_mask_png(join(a.out_dir, "dest_mask.png"), res.dest_mask);
    write_png(join(a.out_dir, "overlay.png"), overlay(img, res.combined()));

    std::string report = "# cmfd detection report\n[config]\ninput=" + fs::path(a.in).filename().string() +
                         "\nmethod=" + to_string(method) + "\n" + to_kv(cfg).str();
    report += "[result]\nwidth=" + std::to_string(img.width()) + "\nheight=" + std::to_string(img.height()) +
              "\naccepted_classes=" + std::to_string(res.accepted.size()) +
              "\nsource_pixels=" + std::to_string(res.source_mask.popcount()) +
              "\ndest_pixels=" + std::to_string(res.dest_mask.popcount()) + "\n" + shift_list(res.accepted);
    if (a.timing) {
        const auto& t = res.timing;
        report += "[timing_ms]\nluma=" + KeyValueDoc::format_real(t.luma_ms) +
                  "\nfeatures=" + KeyValueDoc::format_real(t.features_ms) +
                  "\nsort=" + KeyValueDoc::format_real(t.sort_ms) +
                  "\nmatch=" + KeyValueDoc::format_real(t.match_ms) +
                  "\nclassify=" + KeyValueDoc::format_real(t.classify_ms) +
                  "\nrender=" + KeyValueDoc::format_real(t.render_ms) +
                  "\ntotal=" + KeyValueDoc::format_real(t.total_ms()) + "\n";
    }
    write_text(join(a.out_dir, "report.txt"), report);
    std::cout << (res.accepted.empty() ? "no clone detected" : "clone detected") << ": "
              << res.accepted.size() << " accepted class(es), " << res.combined().popcount()
              << " pixels flagged\n";
    return 0;
}

// --- synthesize -----------------------------------------------------------

struct SynthArgs {
    std::string in, manifest, out_dir = ".";
    int size = 128, region = 40, delta = 0;
    double gain = 1.0;
    std::uint64_t seed = 1;
    std::vector<int> source, dest;
};

int run_synthesize(const SynthArgs& a) {
    if (a.size < 8) throw UsageError("size must be >= 8");
    const RgbImage base = a.in.empty() ? make_base_image(a.size, a.size, a.seed) : load(a.in);
    ForgerySpec spec;
    if (!a.manifest.empty()) {
        try {
            spec = forgery_from_kv(KeyValueDoc::load(a.manifest));
        } catch (const std::exception& e) {
            throw StageError("manifest " + a.manifest, e.what());
        }
    } else if (!a.source.empty()) {
        if (a.dest.empty()) throw UsageError("--source requires --dest");
        spec.source_rect = {a.source[0], a.source[1], a.region, a.region};
        spec.dest_origin = {a.dest[0], a.dest[1]};
        spec.intensity_delta = a.delta;
        spec.intensity_gain = a.gain;
        spec.seed = a.seed;
    } else {
        try {
            spec = random_forgery(base.width(), base.height(), a.region, a.delta, derive_seed(a.seed, 0, 1));
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        spec.intensity_gain = a.gain;
    }
    ForgeryResult f;
    try {
        f = synthesize(base, spec);
    } catch (const std::exception& e) {
        throw StageError("synthesize", e.what());
    }
    ensure_dir(a.out_dir);
    write_png(join(a.out_dir, "forged.png"), f.image);
    write_mask_png(join(a.out_dir, "gt_source.png"), f.gt_source);
    write_mask_png(join(a.out_dir, "gt_dest.png"), f.gt_dest);
    write_text(join(a.out_dir, "manifest.txt"), to_kv(spec).str());
    std::cout << "forged " << spec.source_rect.height << "x" << spec.source_rect.width << " region ("
              << spec.source_rect.row << "," << spec.source_rect.col << ") -> (" << spec.dest_origin.row << ","
              << spec.dest_origin.col << ")\n";
    return 0;
}

// --- degrade --------------------------------------------------------------

struct DegradeArgs {
    std::string in, out, spec_file;
    int qf = 0, blur_size = 3;
    double snr = 0, blur_sigma = 0;
    std::uint64_t seed = 0;
    CLI::Option *qf_opt = nullptr, *snr_opt = nullptr, *sigma_opt = nullptr;
};

int run_degrade(const DegradeArgs& a) {
    DegradeSpec spec;
    if (!a.spec_file.empty()) {
        try {
            spec = degrade_from_kv(KeyValueDoc::load(a.spec_file));
        } catch (const std::exception& e) {
            throw StageError("spec " + a.spec_file, e.what());
        }
    }
    if (a.qf_opt->count()) spec.jpeg_qf = a.qf;
    if (a.snr_opt->count()) spec.awgn_snr_db = a.snr;
    if (a.sigma_opt->count()) spec.blur = BlurSpec{a.blur_size, a.blur_sigma};
    if (a.seed) spec.seed = a.seed;
    const RgbImage img = load(a.in);
    RgbImage out;
    try {
        out = degrade(img, spec);
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    } catch (const std::exception& e) {
        throw StageError("degrade " + a.in, e.what());
    }
    if (const auto parent = fs::path(a.out).parent_path(); !parent.empty()) ensure_dir(parent.string());
    try {
        write_png(a.out, out);
    } catch (const std::exception& e) {
        throw StageError("output", e.what());
    }
    std::cout << spec.label() << "\n";
    return 0;
}

// --- evaluate -------------------------------------------------------------

struct EvalArgs {
    std::string source, dest, gt_source, gt_dest;
};

int run_evaluate(const EvalArgs& a) {
    const auto d1 = load_mask(a.source), d2 = load_mask(a.dest);
    const auto r1 = load_mask(a.gt_source), r2 = load_mask(a.gt_dest);
    Score s;
    try {
        s = score(d1, d2, r1, r2);
    } catch (const std::exception& e) {
        throw StageError("evaluate", e.what());
    }
    KeyValueDoc doc;
    doc.set("acc", detail::fixed6(s.acc));
    doc.set("fp", detail::fixed6(s.fp));
    doc.set("detected_pixels", static_cast<std::uint64_t>(s.detected_pixels));
    doc.set("fp_pixels", static_cast<std::uint64_t>(s.false_positive_pixels));
    doc.set("swapped", std::string(s.swapped ? "1" : "0"));
    std::cout << doc.str();
    return 0;
}

// --- sweep ----------------------------------------------------------------

struct SweepArgs {
    std::string grid = "qf=100,83,75,67,58,50,42,33,25,17,9", out_dir;
    int count = 20, size = 128, region = 40, base_qf = 0;
    std::vector<int> deltas{-30, -20, -10, 10, 20, 30};
    std::uint64_t seed = 1;
    bool timing = false;
    DetectorFlags det;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

template <typename T>
T number(const std::string& text) {
    T v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw UsageError("bad grid value '" + text + "'");
    return v;
}

// "qf=100,75", "snr=10,20", "blur=3x0.5,3x2" or "identity".
std::vector<DegradeSpec> parse_grid(const std::string& text, int base_qf) {
    if (text == "identity") return {DegradeSpec{}};
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw UsageError("grid must look like axis=v1,v2,...");
    const std::string axis = text.substr(0, eq);
    std::vector<DegradeSpec> grid;
    for (const auto& v : split(text.substr(eq + 1), ',')) {
        DegradeSpec d;
        if (base_qf) d.jpeg_qf = base_qf;
        if (axis == "qf") {
            d.jpeg_qf = number<int>(v);
            if (*d.jpeg_qf < 1 || *d.jpeg_qf > 100) throw UsageError("qf must be in [1, 100]");
        } else if (axis == "snr") {
            d.awgn_snr_db = number<double>(v);
        } else if (axis == "blur") {
            const auto x = v.find('x');
            if (x == std::string::npos) throw UsageError("blur values look like 3x0.5");
            d.blur = BlurSpec{number<int>(v.substr(0, x)), number<double>(v.substr(x + 1))};
            if (d.blur->filter_size < 1 || !(d.blur->sigma > 0)) throw UsageError("bad blur value '" + v + "'");
        } else {
            throw UsageError("unknown grid axis '" + axis + "'");
        }
        grid.push_back(d);
    }
    if (grid.empty()) throw UsageError("grid has no values");
    return grid;
}

int run_sweep(const SweepArgs& a) {
    const DetectorConfig cfg = a.det.resolve();
    const Method method = parse_method(a.det.method);
    if (a.base_qf < 0 || a.base_qf > 100) throw UsageError("base-qf must be in [1, 100]");
    const auto grid = parse_grid(a.grid, a.base_qf);
    if (a.count < 1) throw UsageError("count must be >= 1");

    std::vector<SweepItem> corpus;
    try {
        for (const auto& item : make_corpus({a.count, a.size, a.region, a.deltas, a.seed}))
            corpus.push_back(to_sweep_item(item));
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    const SweepReport report = sweep(corpus, grid, cfg, {method, a.seed, cfg.threads});
    const std::string text = format_report(report, a.timing);
    if (!a.out_dir.empty()) {
        ensure_dir(a.out_dir);
        write_text(join(a.out_dir, "report.txt"), text);
    }
    std::printf("%-28s %6s %8s %9s %9s\n", "degradation", "cells", "failed", "mean_acc", "mean_fp");
    for (const auto& s : report.summary)
        std::printf("%-28s %6zu %8zu %9.4f %9.4f\n", s.degradation.c_str(), s.cells, s.failed, s.mean_acc,
                    s.mean_fp);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Copy-move forgery detection with intensity-invariant DCT block features"};
    app.require_subcommand(1);

    DetectArgs det;
    auto* c_detect = app.add_subcommand("detect", "Detect cloned regions in an image");
    c_detect->add_option("--in", det.in, "Input image (PNG, BMP or JPEG)")->required();
    c_detect->add_option("--out-dir", det.out_dir, "Directory for masks, overlay and report")->capture_default_str();
    c_detect->add_flag("--timing", det.timing, "Append per-stage wall-clock timings to the report");
    det.det.attach(c_detect);

    SynthArgs syn;
    auto* c_synth = app.add_subcommand("synthesize", "Create a copy-move forgery with ground-truth masks");
    c_synth->add_option("--in", syn.in, "Base image; a procedural image is generated when omitted");
    c_synth->add_option("--manifest", syn.manifest, "Read the forgery spec from a key=value manifest");
    c_synth->add_option("--out-dir", syn.out_dir, "Output directory")->capture_default_str();
    c_synth->add_option("--size", syn.size, "Generated image side")->capture_default_str();
    c_synth->add_option("--region", syn.region, "Clone side")->capture_default_str();
    c_synth->add_option("--source", syn.source, "Source row and column")->expected(2);
    c_synth->add_option("--dest", syn.dest, "Destination row and column")->expected(2);
    c_synth->add_option("--delta", syn.delta, "Additive intensity change of the clone")->capture_default_str();
    c_synth->add_option("--gain", syn.gain, "Multiplicative intensity change of the clone")->capture_default_str();
    c_synth->add_option("--seed", syn.seed, "Seed for the base image and random placement")->capture_default_str();

    DegradeArgs deg;
    auto* c_degrade = app.add_subcommand("degrade", "Apply JPEG, noise and blur, in that order");
    c_degrade->add_option("--in", deg.in, "Input image")->required();
    c_degrade->add_option("--out", deg.out, "Output PNG")->required();
    c_degrade->add_option("--spec", deg.spec_file, "Read the degradation from a key=value file");
    deg.qf_opt = c_degrade->add_option("--qf", deg.qf, "JPEG quality factor")->check(CLI::Range(1, 100));
    deg.snr_opt = c_degrade->add_option("--snr", deg.snr, "AWGN signal-to-noise ratio in dB");
    c_degrade->add_option("--blur-size", deg.blur_size, "Gaussian kernel side")->capture_default_str();
    deg.sigma_opt = c_degrade->add_option("--blur-sigma", deg.blur_sigma, "Gaussian standard deviation");
    c_degrade->add_option("--seed", deg.seed, "Noise seed");

    EvalArgs ev;
    auto* c_eval = app.add_subcommand("evaluate", "Score detected masks against ground truth");
    c_eval->add_option("--source", ev.source, "Detected source mask")->required();
    c_eval->add_option("--dest", ev.dest, "Detected destination mask")->required();
    c_eval->add_option("--gt-source", ev.gt_source, "True source mask")->required();
    c_eval->add_option("--gt-dest", ev.gt_dest, "True destination mask")->required();

    SweepArgs sw;
    auto* c_sweep = app.add_subcommand("sweep", "Run a degradation grid over a synthesized corpus");
    c_sweep->add_option("--grid", sw.grid, "axis=v1,v2,... with axis qf, snr or blur (KxSD), or identity")
        ->capture_default_str();
    c_sweep->add_option("--base-qf", sw.base_qf, "JPEG quality applied before the swept degradation");
    c_sweep->add_option("--count", sw.count, "Corpus size")->capture_default_str();
    c_sweep->add_option("--size", sw.size, "Image side")->capture_default_str();
    c_sweep->add_option("--region", sw.region, "Clone side")->capture_default_str();
    c_sweep->add_option("--deltas", sw.deltas, "Intensity deltas cycled over the corpus")->delimiter(',');
    c_sweep->add_option("--seed", sw.seed, "Corpus and noise seed")->capture_default_str();
    c_sweep->add_option("--out-dir", sw.out_dir, "Write the full report here");
    c_sweep->add_flag("--timing", sw.timing, "Include per-cell timings in the report");
    sw.det.attach(c_sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_detect->parsed()) return run_detect(det);
        if (c_synth->parsed()) return run_synthesize(syn);
        if (c_degrade->parsed()) return run_degrade(deg);
        if (c_eval->parsed()) return run_evaluate(ev);
        return run_sweep(sw);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        for (auto* sub : app.get_subcommands()) std::cerr << sub->help();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
