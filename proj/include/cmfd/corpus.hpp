#ifndef CMFD_CORPUS_HPP
#define CMFD_CORPUS_HPP

// Seeded synthetic corpora: procedural base images and random copy-move
// forgeries with ground truth.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cmfd/degrade.hpp"
#include "cmfd/image.hpp"

namespace cmfd {

/// Deterministic per-item seed from a base seed and two indices (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ a) ^ (b + 0x632be59bd9b4e019ULL));
}

namespace detail {

/// Smoothly interpolated lattice noise with one random value per cell corner.
class ValueNoise {
public:
    ValueNoise(int width, int height, int cell, std::mt19937_64& rng)
        : cell_(cell), cols_(width / cell + 2), rows_(height / cell + 2) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        lattice_.resize(static_cast<std::size_t>(cols_) * rows_);
        for (auto& v : lattice_) v = u(rng);
    }

    double operator()(int row, int col) const {
        const double y = static_cast<double>(row) / cell_, x = static_cast<double>(col) / cell_;
        const int r0 = static_cast<int>(y), c0 = static_cast<int>(x);
        const double fy = fade(y - r0), fx = fade(x - c0);
        const double top = lerp(at(r0, c0), at(r0, c0 + 1), fx);
        const double bottom = lerp(at(r0 + 1, c0), at(r0 + 1, c0 + 1), fx);
        return lerp(top, bottom, fy);
    }

private:
    static double fade(double t) { return t * t * (3 - 2 * t); }
    static double lerp(double a, double b, double t) { return a + (b - a) * t; }
    double at(int r, int c) const { return lattice_[static_cast<std::size_t>(r) * cols_ + c]; }

    int cell_, cols_, rows_;
    std::vector<double> lattice_;
};

}  // namespace detail

/// A natural-looking textured RGB image: fractal luminance noise with a
/// roughly 1/f spectrum, low-frequency colour variation, a handful of
/// flat-shaded shapes with hard edges, and fine sensor grain.
inline RgbImage make_base_image(int width, int height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    std::vector<double> lum(static_cast<std::size_t>(width) * height, 0.0);
    for (int cell = 64; cell >= 2; cell /= 2) {
        const detail::ValueNoise octave(width, height, cell, rng);
        const double amp = 9.0 * std::pow(cell, 0.55);
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c) lum[static_cast<std::size_t>(r) * width + c] += amp * octave(r, c);
    }
    const detail::ValueNoise tint_a(width, height, 48, rng), tint_b(width, height, 48, rng);

    std::vector<double> rgb(lum.size() * 3);
    const double base = 110 + 30 * u01(rng);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * width + c;
            const double y = base + lum[i], ta = 25 * tint_a(r, c), tb = 25 * tint_b(r, c);
            rgb[3 * i + 0] = y + ta;
            rgb[3 * i + 1] = y - 0.5 * ta + 0.4 * tb;
            rgb[3 * i + 2] = y - tb;
        }

    const int shapes = 3 + static_cast<int>(u01(rng) * 5);
    for (int s = 0; s < shapes; ++s) {
        const double cy = u01(rng) * height, cx = u01(rng) * width;
        const double ry = 6 + u01(rng) * height / 5.0, rx = 6 + u01(rng) * width / 5.0;
        const double col[3] = {50 + 150 * u01(rng), 50 + 150 * u01(rng), 50 + 150 * u01(rng)};
        const double gy = (u01(rng) - 0.5) * 3, gx = (u01(rng) - 0.5) * 3;
        const bool ellipse = u01(rng) < 0.6;
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c) {
                const double dy = (r - cy) / ry, dx = (c - cx) / rx;
                const bool in = ellipse ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1 && std::abs(dy) <= 1;
                if (!in) continue;
                const std::size_t i = static_cast<std::size_t>(r) * width + c;
                const double texture = 0.5 * lum[i] + gy * (r - cy) + gx * (c - cx);
                for (int ch = 0; ch < 3; ++ch) rgb[3 * i + ch] = col[ch] + texture;
            }
    }

    std::normal_distribution<double> grain(0.0, 2.0);
    RgbImage img(width, height);
    auto& data = img.data();
    for (std::size_t i = 0; i < rgb.size(); ++i) data[i] = clamp_u8(std::clamp(rgb[i], 20.0, 235.0) + grain(rng));
    return img;
}

/// Random forgery of a region x region square with a disjoint destination.
inline ForgerySpec random_forgery(int width, int height, int region, int delta, std::uint64_t seed) {
    if (region < 1 || region > std::min(width, height))
        throw InvalidArgument("region does not fit the image");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> row(0, height - region), col(0, width - region);
    ForgerySpec spec;
    spec.intensity_delta = delta;
    spec.seed = seed;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        spec.source_rect = {row(rng), col(rng), region, region};
        spec.dest_origin = {row(rng), col(rng)};
        if (!spec.source_rect.intersects(spec.dest_rect())) return spec;
    }
    throw InvalidArgument("could not place a disjoint destination");
}

struct CorpusItem {
    std::string id;
    ForgerySpec spec;
    ForgeryResult forged;
};

struct CorpusOptions {
    int count = 20;
    int size = 128;
    int region = 40;
    std::vector<int> deltas{-30, -20, -10, 10, 20, 30};
    std::uint64_t seed = 1;
};

/// Item i uses base image seed and forgery seed derived from (seed, i), and
/// cycles through the delta list.
inline std::vector<CorpusItem> make_corpus(const CorpusOptions& opt) {
    std::vector<CorpusItem> items;
    items.reserve(static_cast<std::size_t>(opt.count));
    for (int i = 0; i < opt.count; ++i) {
        const std::uint64_t base_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(i), 0);
        const std::uint64_t forgery_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(i), 1);
        const int delta = opt.deltas.empty() ? 0 : opt.deltas[static_cast<std::size_t>(i) % opt.deltas.size()];
        const RgbImage base = make_base_image(opt.size, opt.size, base_seed);
        const ForgerySpec spec = random_forgery(opt.size, opt.size, opt.region, delta, forgery_seed);
        char id[32];
        std::snprintf(id, sizeof id, "img%03d", i);
        items.push_back({id, spec, synthesize(base, spec)});
    }
    return items;
}

}  // namespace cmfd

#endif  // CMFD_CORPUS_HPP
