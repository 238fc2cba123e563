#ifndef CMFD_IMAGE_HPP
#define CMFD_IMAGE_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmfd/errors.hpp"

namespace cmfd {

/// Top-left corner of a block, in (row, col) pixel coordinates.
struct Origin {
    int row = 0;
    int col = 0;

    friend constexpr auto operator<=>(const Origin&, const Origin&) = default;
};

/// 8-bit interleaved RGB raster. width = columns (M), height = rows (N).
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw InvalidArgument("image dimensions must be positive");
        data_.assign(static_cast<std::size_t>(width) * height * 3, fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }

    std::uint8_t& at(int row, int col, int ch) {
        return data_[(static_cast<std::size_t>(row) * width_ + col) * 3 + ch];
    }
    std::uint8_t at(int row, int col, int ch) const {
        return data_[(static_cast<std::size_t>(row) * width_ + col) * 3 + ch];
    }

    void set(int row, int col, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        auto* p = &data_[(static_cast<std::size_t>(row) * width_ + col) * 3];
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }

    std::vector<std::uint8_t>& data() noexcept { return data_; }
    const std::vector<std::uint8_t>& data() const noexcept { return data_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Real-valued luminance raster, row-major.
class LumaImage {
public:
    LumaImage() = default;
    LumaImage(int width, int height, double fill = 0.0)
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw InvalidArgument("image dimensions must be positive");
        data_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    double& at(int row, int col) { return data_[static_cast<std::size_t>(row) * width_ + col]; }
    double at(int row, int col) const { return data_[static_cast<std::size_t>(row) * width_ + col]; }

    const double* row_ptr(int row) const { return &data_[static_cast<std::size_t>(row) * width_]; }

    const std::vector<double>& data() const noexcept { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Per-pixel boolean raster. Stored one byte per pixel (0 or 1).
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false)
        : width_(width), height_(height),
          bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {
        if (width < 1 || height < 1)
            throw InvalidArgument("mask dimensions must be positive");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    bool get(int row, int col) const {
        return bits_[static_cast<std::size_t>(row) * width_ + col] != 0;
    }
    void set(int row, int col, bool v = true) {
        bits_[static_cast<std::size_t>(row) * width_ + col] = v ? 1 : 0;
    }
    bool contains(int row, int col) const {
        return row >= 0 && col >= 0 && row < height_ && col < width_ && get(row, col);
    }

    /// Sets every pixel of the h x w rectangle at (row, col), clipped to the frame.
    void fill_rect(int row, int col, int h, int w) {
        const int r1 = std::min(row + h, height_), c1 = std::min(col + w, width_);
        for (int r = std::max(row, 0); r < r1; ++r)
            for (int c = std::max(col, 0); c < c1; ++c) set(r, c);
    }

    std::size_t popcount() const {
        return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
    }
    bool none() const { return popcount() == 0; }

    BinaryMask complement() const {
        BinaryMask out(*this);
        for (auto& b : out.bits_) b ^= 1;
        return out;
    }

    /// True when every set pixel of *this is also set in other.
    bool subset_of(const BinaryMask& other) const {
        check_same(other);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] && !other.bits_[i]) return false;
        return true;
    }

    friend BinaryMask operator&(const BinaryMask& a, const BinaryMask& b) {
        return combine(a, b, [](std::uint8_t x, std::uint8_t y) { return std::uint8_t(x & y); });
    }
    friend BinaryMask operator|(const BinaryMask& a, const BinaryMask& b) {
        return combine(a, b, [](std::uint8_t x, std::uint8_t y) { return std::uint8_t(x | y); });
    }
    /// Set difference a \ b.
    friend BinaryMask operator-(const BinaryMask& a, const BinaryMask& b) {
        return combine(a, b, [](std::uint8_t x, std::uint8_t y) { return std::uint8_t(x & (y ^ 1)); });
    }

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    void check_same(const BinaryMask& other) const {
        if (width_ != other.width_ || height_ != other.height_)
            throw InvalidArgument("mask dimensions differ");
    }

    template <typename Op>
    static BinaryMask combine(const BinaryMask& a, const BinaryMask& b, Op op) {
        a.check_same(b);
        BinaryMask out(a);
        for (std::size_t i = 0; i < out.bits_.size(); ++i) out.bits_[i] = op(a.bits_[i], b.bits_[i]);
        return out;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Origins of every overlapping b x b block, row-major.
struct BlockGrid {
    int block_size = 0;
    std::vector<Origin> origins;
};

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

inline double luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    return kLumaR * r + kLumaG * g + kLumaB * b;
}

inline LumaImage to_luma(const RgbImage& img) {
    LumaImage out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c)
            out.at(r, c) = luma(img.at(r, c, 0), img.at(r, c, 1), img.at(r, c, 2));
    return out;
}

/// Number of overlapping blocks, (M-b+1)(N-b+1).
inline std::size_t block_count(int width, int height, int b) {
    if (b < 1) throw InvalidArgument("block size must be at least 1");
    if (b > std::min(width, height)) throw BlockTooLarge(b, width, height);
    return static_cast<std::size_t>(width - b + 1) * static_cast<std::size_t>(height - b + 1);
}

inline BlockGrid block_grid(int width, int height, int b) {
    BlockGrid grid{b, {}};
    grid.origins.reserve(block_count(width, height, b));
    for (int r = 0; r + b <= height; ++r)
        for (int c = 0; c + b <= width; ++c) grid.origins.push_back({r, c});
    return grid;
}

inline BlockGrid block_grid(const LumaImage& img, int b) {
    return block_grid(img.width(), img.height(), b);
}

/// Copies the b x b window at origin into a row-major buffer.
inline std::vector<double> extract_block(const LumaImage& img, Origin origin, int b) {
    if (b < 1 || origin.row < 0 || origin.col < 0 || origin.row + b > img.height() ||
        origin.col + b > img.width())
        throw OutOfBounds("block at (" + std::to_string(origin.row) + "," +
                          std::to_string(origin.col) + ") of size " + std::to_string(b) +
                          " exceeds image bounds");
    std::vector<double> out(static_cast<std::size_t>(b) * b);
    for (int r = 0; r < b; ++r) {
        const double* src = img.row_ptr(origin.row + r) + origin.col;
        std::copy(src, src + b, out.begin() + static_cast<std::ptrdiff_t>(r) * b);
    }
    return out;
}

}  // namespace cmfd

#endif  // CMFD_IMAGE_HPP
