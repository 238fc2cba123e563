#ifndef CMFD_DEGRADE_HPP
#define CMFD_DEGRADE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "cmfd/codec.hpp"
#include "cmfd/errors.hpp"
#include "cmfd/image.hpp"
#include "cmfd/kv.hpp"

namespace cmfd {

struct Rect {
    int row = 0;
    int col = 0;
    int height = 0;
    int width = 0;

    bool intersects(const Rect& o) const {
        return row < o.row + o.height && o.row < row + height && col < o.col + o.width &&
               o.col < col + width;
    }
    bool inside(int img_width, int img_height) const {
        return row >= 0 && col >= 0 && height > 0 && width > 0 && row + height <= img_height &&
               col + width <= img_width;
    }
};

/// A copy-move forgery: source_rect is pasted at dest_origin with
/// dest = clamp(gain * source + delta) per channel.
struct ForgerySpec {
    Rect source_rect;
    Origin dest_origin;
    int intensity_delta = 0;
    double intensity_gain = 1.0;
    std::uint64_t seed = 0;

    Rect dest_rect() const {
        return {dest_origin.row, dest_origin.col, source_rect.height, source_rect.width};
    }
};

struct BlurSpec {
    int filter_size = 3;
    double sigma = 0.5;
};

/// Post-forgery degradation chain, applied as JPEG, then AWGN, then blur.
struct DegradeSpec {
    std::optional<int> jpeg_qf;
    std::optional<double> awgn_snr_db;
    std::optional<BlurSpec> blur;
    std::uint64_t seed = 0;

    bool identity() const { return !jpeg_qf && !awgn_snr_db && !blur; }

    /// Stable short label, e.g. "qf=75;snr=20;blur=3x0.5", or "identity".
    std::string label() const {
        std::string out;
        auto add = [&](const std::string& s) { out += (out.empty() ? "" : ";") + s; };
        if (jpeg_qf) add("qf=" + std::to_string(*jpeg_qf));
        if (awgn_snr_db) add("snr=" + KeyValueDoc::format_real(*awgn_snr_db));
        if (blur)
            add("blur=" + std::to_string(blur->filter_size) + "x" + KeyValueDoc::format_real(blur->sigma));
        return out.empty() ? "identity" : out;
    }
};

struct ForgeryResult {
    RgbImage image;
    BinaryMask gt_source;
    BinaryMask gt_dest;
};

inline std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

inline ForgeryResult synthesize(const RgbImage& img, const ForgerySpec& spec) {
    const Rect src = spec.source_rect, dst = spec.dest_rect();
    if (!src.inside(img.width(), img.height()) || !dst.inside(img.width(), img.height()))
        throw OutOfBounds("forgery rectangles must lie inside the image");
    if (src.intersects(dst)) throw OverlapError("source and destination rectangles intersect");

    ForgeryResult out{img, BinaryMask(img.width(), img.height()), BinaryMask(img.width(), img.height())};
    for (int r = 0; r < src.height; ++r)
        for (int c = 0; c < src.width; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                const double v = spec.intensity_gain * img.at(src.row + r, src.col + c, ch) + spec.intensity_delta;
                out.image.at(dst.row + r, dst.col + c, ch) = clamp_u8(v);
            }
    out.gt_source.fill_rect(src.row, src.col, src.height, src.width);
    out.gt_dest.fill_rect(dst.row, dst.col, dst.height, dst.width);
    return out;
}

inline RgbImage jpeg_roundtrip(const RgbImage& img, int qf) { return decode_image(encode_jpeg(img, qf)); }

/// Mean squared luma, the reference power for SNR.
inline double signal_power(const RgbImage& img) {
    const LumaImage y = to_luma(img);
    double sum = 0;
    for (double v : y.data()) sum += v * v;
    return sum / static_cast<double>(y.data().size());
}

inline double awgn_sigma(double signal_power, double snr_db) {
    return std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0));
}

/// Independent N(0, sigma^2) noise on every channel sample, sigma fixed by
/// the SNR against the luma power of the input.
inline RgbImage add_awgn(const RgbImage& img, double snr_db, std::uint64_t seed) {
    if (!std::isfinite(snr_db)) throw InvalidArgument("SNR must be finite");
    const double sigma = awgn_sigma(signal_power(img), snr_db);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    RgbImage out = img;
    for (auto& v : out.data()) v = clamp_u8(v + noise(rng));
    return out;
}

/// Normalized 1D Gaussian taps for offsets -k/2 .. k-1-k/2.
inline std::vector<double> gaussian_taps(int k, double sd) {
    if (k < 1) throw InvalidArgument("filter size must be >= 1");
    if (!(sd > 0)) throw InvalidArgument("blur sigma must be > 0");
    const int anchor = k / 2;
    std::vector<double> taps(static_cast<std::size_t>(k));
    double sum = 0;
    for (int i = 0; i < k; ++i) {
        const double x = i - anchor;
        taps[static_cast<std::size_t>(i)] = std::exp(-x * x / (2 * sd * sd));
        sum += taps[static_cast<std::size_t>(i)];
    }
    for (auto& t : taps) t /= sum;
    return taps;
}

/// k x k kernel G(x, y) proportional to exp(-(x^2 + y^2) / (2 sd^2)),
/// row-major, summing to 1. It is the outer product of gaussian_taps.
inline std::vector<double> gaussian_kernel(int k, double sd) {
    const auto t = gaussian_taps(k, sd);
    std::vector<double> kern(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) kern[static_cast<std::size_t>(i) * k + j] = t[i] * t[j];
    return kern;
}

/// Separable Gaussian filter with edge replication, anchored at (k/2, k/2).
inline RgbImage gaussian_blur(const RgbImage& img, int k, double sd) {
    const auto taps = gaussian_taps(k, sd);
    const int anchor = k / 2, w = img.width(), h = img.height();
    std::vector<double> tmp(static_cast<std::size_t>(w) * h * 3);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                double s = 0;
                for (int i = 0; i < k; ++i)
                    s += taps[static_cast<std::size_t>(i)] * img.at(r, std::clamp(c + i - anchor, 0, w - 1), ch);
                tmp[(static_cast<std::size_t>(r) * w + c) * 3 + ch] = s;
            }
    RgbImage out(w, h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                double s = 0;
                for (int i = 0; i < k; ++i) {
                    const int rr = std::clamp(r + i - anchor, 0, h - 1);
                    s += taps[static_cast<std::size_t>(i)] * tmp[(static_cast<std::size_t>(rr) * w + c) * 3 + ch];
                }
                out.at(r, c, ch) = clamp_u8(s);
            }
    return out;
}

inline RgbImage degrade(const RgbImage& img, const DegradeSpec& spec) {
    RgbImage out = img;
    if (spec.jpeg_qf) out = jpeg_roundtrip(out, *spec.jpeg_qf);
    if (spec.awgn_snr_db) out = add_awgn(out, *spec.awgn_snr_db, spec.seed);
    if (spec.blur) out = gaussian_blur(out, spec.blur->filter_size, spec.blur->sigma);
    return out;
}

// Flat key-value forms, used by corpus manifests.

inline KeyValueDoc to_kv(const ForgerySpec& s) {
    KeyValueDoc doc;
    doc.set("source_row", s.source_rect.row);
    doc.set("source_col", s.source_rect.col);
    doc.set("source_height", s.source_rect.height);
    doc.set("source_width", s.source_rect.width);
    doc.set("dest_row", s.dest_origin.row);
    doc.set("dest_col", s.dest_origin.col);
    doc.set("intensity_delta", s.intensity_delta);
    doc.set("intensity_gain", s.intensity_gain);
    doc.set("seed", s.seed);
    return doc;
}

inline ForgerySpec forgery_from_kv(const KeyValueDoc& doc) {
    ForgerySpec s;
    s.source_rect = {doc.get_as<int>("source_row"), doc.get_as<int>("source_col"),
                     doc.get_as<int>("source_height"), doc.get_as<int>("source_width")};
    s.dest_origin = {doc.get_as<int>("dest_row"), doc.get_as<int>("dest_col")};
    s.intensity_delta = doc.get_or<int>("intensity_delta", 0);
    s.intensity_gain = doc.get_or<double>("intensity_gain", 1.0);
    s.seed = doc.get_or<std::uint64_t>("seed", 0);
    return s;
}

inline KeyValueDoc to_kv(const DegradeSpec& s) {
    KeyValueDoc doc;
    if (s.jpeg_qf) doc.set("jpeg_qf", *s.jpeg_qf);
    if (s.awgn_snr_db) doc.set("awgn_snr_db", *s.awgn_snr_db);
    if (s.blur) {
        doc.set("blur_size", s.blur->filter_size);
        doc.set("blur_sigma", s.blur->sigma);
    }
    doc.set("seed", s.seed);
    return doc;
}

inline DegradeSpec degrade_from_kv(const KeyValueDoc& doc) {
    DegradeSpec s;
    if (doc.has("jpeg_qf")) s.jpeg_qf = doc.get_as<int>("jpeg_qf");
    if (doc.has("awgn_snr_db")) s.awgn_snr_db = doc.get_as<double>("awgn_snr_db");
    if (doc.has("blur_size") || doc.has("blur_sigma"))
        s.blur = BlurSpec{doc.get_as<int>("blur_size"), doc.get_as<double>("blur_sigma")};
    s.seed = doc.get_or<std::uint64_t>("seed", 0);
    if (s.jpeg_qf && (*s.jpeg_qf < 1 || *s.jpeg_qf > 100))
        throw InvalidArgument("jpeg_qf must be in [1, 100]");
    return s;
}

}  // namespace cmfd

#endif  // CMFD_DEGRADE_HPP
